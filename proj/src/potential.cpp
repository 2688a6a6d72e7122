#include "tmlab/potential.hpp"

#include <cmath>

#include "tmlab/error.hpp"

namespace tmlab {

double DistancePower::atLevel(int m) const {
  if (m == kLevelInfinity) return 0.0;
  double v = std::pow(static_cast<double>(m), -a);
  if (perturbCoeff != 0.0) v += perturbCoeff * std::pow(static_cast<double>(m), -perturbPower);
  return v;
}

int vuPrefixDepth(const Point& x, int kMax) {
  if (kMax < 1 || kMax > 40) throw Error(Errc::OutOfRange, "kMax outside [1,40]");
  const int c = x.digit(1);
  Point y = x.shift(1);
  const std::uint64_t limit = std::uint64_t{1} << kMax;
  if (y.tailKind() == Point::TailKind::ThueMorse && y.tailSeed() == c && y.tailOffset() == y.prefix().size() &&
      y.prefix() == fixedPointPrefix(c, std::max<std::size_t>(1, y.prefix().size())).substr(0, y.prefix().size()))
    throw Error(Errc::UndefinedPoint, "x lies in sigma^{-1}{rho_0, rho_1}");
  std::uint64_t m = 0;
  while (m < limit && y.digit(m) == thueMorseDigit(m, c)) ++m;
  if (m >= limit) throw Error(Errc::UndefinedPoint, "depth saturates kMax");
  return 63 - __builtin_clzll(m);  // m >= 1 since y_0 = c
}

namespace {

// y_{q..q+2^k} is tau_k or its flip.
bool blockIsTau(const Point& y, std::uint64_t q, int k) {
  const int c = y.digit(q);
  for (std::uint64_t t = 1; t < (std::uint64_t{1} << k); ++t)
    if (y.digit(q + t) != thueMorseDigit(t, c)) return false;
  return true;
}

// sigma x is a concatenation of tau_k / bar tau_k blocks.
bool orbitDepthAtLeast(const Point& y, int k) {
  const std::uint64_t B = std::uint64_t{1} << k, s = y.prefix().size();
  std::uint64_t q = 0;
  for (; q < s; q += B)
    if (!blockIsTau(y, q, k)) return false;
  if (y.tailKind() == Point::TailKind::ThueMorse)
    return (q - s + y.tailOffset()) % B == 0;  // misaligned shifts of H^k(K) are disjoint
  // Periodic tail: block contents cycle within p blocks.
  for (std::uint64_t j = 0; j < y.tail().size(); ++j, q += B)
    if (!blockIsTau(y, q, k)) return false;
  return true;
}

}  // namespace

int vuDepth(const Point& x, int kMax) {
  if (kMax < 1 || kMax > 40) throw Error(Errc::OutOfRange, "kMax outside [1,40]");
  Point y = x.shift(1);
  const std::uint64_t s = y.prefix().size();
  if (y.tailKind() == Point::TailKind::ThueMorse && y.tailOffset() >= s &&
      y.prefix() == Point::thueMorse(FiniteWord(), y.tailSeed(), y.tailOffset() - s).take(s)) {
    // y = sigma^u rho_b: depth is the 2-adic valuation of u.
    std::uint64_t u = y.tailOffset() - s;
    if (u == 0 || __builtin_ctzll(u) >= kMax) throw Error(Errc::UndefinedPoint, "x lies in sigma^{-1}{rho_0, rho_1}");
    return __builtin_ctzll(u);
  }
  int k = 0;
  while (orbitDepthAtLeast(y, k + 1))
    if (++k >= kMax) throw Error(Errc::UndefinedPoint, "depth saturates kMax");
  return k;
}

double evalPotential(const Potential& V, const Point& x, int levelCap) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DistancePower>) {
          return v.atLevel(admissibleLevel(x, levelCap));
        } else if constexpr (std::is_same_v<T, CylinderUc>) {
          int a = x.digit(0), b = x.digit(1);
          return a == b ? 0.0 : (a == 0 ? v.c : -v.c);
        } else if constexpr (std::is_same_v<T, UnboundedVu>) {
          return v.atDepth(vuDepth(x, v.kMax));
        } else {
          std::size_t idx = 0;
          for (int i = 0; i < v.depth; ++i) idx = (idx << 1) | static_cast<std::size_t>(x.digit(i));
          return v.values.at(idx);
        }
      },
      V);
}

std::vector<double> orbitValues(const Potential& V, const Point& x, std::uint64_t n, int levelCap) {
  std::vector<double> out(n);
  if (const auto* dp = std::get_if<DistancePower>(&V)) {
    auto lang = Language::get(static_cast<std::size_t>(levelCap));
    std::string text = x.take(n + static_cast<std::size_t>(levelCap) + 1).str();
    auto lv = lang->levels(text, n, levelCap);
    for (std::uint64_t j = 0; j < n; ++j) out[j] = dp->atLevel(lv[j]);
    return out;
  }
  if (std::holds_alternative<UnboundedVu>(V)) {
    for (std::uint64_t j = 0; j < n; ++j) out[j] = evalPotential(V, x.shift(j), levelCap);
    return out;
  }
  // Cylinder potentials only need a sliding window of digits.
  int depth = std::holds_alternative<CylinderUc>(V) ? 2 : std::get<CylinderTable>(V).depth;
  FiniteWord w = x.take(n + static_cast<std::size_t>(depth));
  for (std::uint64_t j = 0; j < n; ++j) {
    Point p = Point::periodic(w.substr(j, static_cast<std::size_t>(depth)), FiniteWord("0"));
    out[j] = evalPotential(V, p, levelCap);
  }
  return out;
}

double birkhoffSum(const Potential& V, const Point& x, std::uint64_t n, int levelCap) {
  return pairwiseSum(orbitValues(V, x, n, levelCap));
}

double pairwiseSum(const double* v, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwiseSum(v, h) + pairwiseSum(v + h, n - h);
}

nlohmann::json potentialToJson(const Potential& V) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DistancePower>) {
          nlohmann::json j{{"type", "distance_power"}, {"a", v.a}};
          if (v.perturbCoeff != 0.0) j["perturbation"] = {{"coeff", v.perturbCoeff}, {"power", v.perturbPower}};
          return j;
        } else if constexpr (std::is_same_v<T, CylinderUc>) {
          return {{"type", "cylinder_uc"}, {"c", v.c}};
        } else if constexpr (std::is_same_v<T, UnboundedVu>) {
          return {{"type", "vu"},
                  {"alpha", v.alpha},
                  {"k_max", v.kMax},
                  {"sign", v.sign == VuSign::AlphaKMinusOne ? "alpha_k_minus_1" : "alpha_1_minus_k"}};
        } else {
          return {{"type", "cylinder_table"}, {"depth", v.depth}, {"values", v.values}};
        }
      },
      V);
}

Potential potentialFromJson(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "distance_power") {
    DistancePower d;
    d.a = j.at("a").get<double>();
    if (!(d.a > 0)) throw Error(Errc::InvalidArgument, "distance_power needs a > 0");
    if (j.contains("perturbation")) {
      d.perturbCoeff = j["perturbation"].at("coeff").get<double>();
      d.perturbPower = j["perturbation"].at("power").get<double>();
      if (d.perturbCoeff != 0.0 && !(d.perturbPower > d.a))
        throw Error(Errc::InvalidArgument, "perturbation must decay faster than m^{-a}");
    }
    return d;
  }
  if (type == "cylinder_uc") return CylinderUc{j.at("c").get<double>()};
  if (type == "vu") {
    UnboundedVu u;
    u.alpha = j.at("alpha").get<double>();
    u.kMax = j.value("k_max", 30);
    std::string s = j.value("sign", std::string("alpha_k_minus_1"));
    if (s == "alpha_k_minus_1")
      u.sign = VuSign::AlphaKMinusOne;
    else if (s == "alpha_1_minus_k")
      u.sign = VuSign::AlphaOneMinusK;
    else
      throw Error(Errc::InvalidArgument, "unknown vu sign convention " + s);
    return u;
  }
  if (type == "cylinder_table") {
    CylinderTable t;
    t.depth = j.at("depth").get<int>();
    t.values = j.at("values").get<std::vector<double>>();
    if (t.depth < 1 || t.depth > 24 || t.values.size() != (std::size_t{1} << t.depth))
      throw Error(Errc::InvalidArgument, "cylinder_table needs 2^depth values");
    return t;
  }
  throw Error(Errc::InvalidArgument, "unknown potential type " + type);
}

std::string potentialName(const Potential& V) { return potentialToJson(V).at("type").get<std::string>(); }

}  // namespace tmlab
