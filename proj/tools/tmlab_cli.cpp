#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "tmlab/coding.hpp"
#include "tmlab/combinatorics.hpp"
#include "tmlab/csv.hpp"
#include "tmlab/error.hpp"
#include "tmlab/interval_map.hpp"
#include "tmlab/mu_k.hpp"
#include "tmlab/renorm.hpp"
#include "tmlab/thermo.hpp"

using namespace tmlab;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.3.0";

struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// State shared by all subcommands.
struct Run {
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  json tolerances = json::object();
  json extra = json::object();  // results recorded in the manifest
  std::uint64_t languageHash = 0;
  bool failed = false;
  std::string failure;

  void fail(const std::string& why) {
    if (!failed) failure = why;
    failed = true;
  }
};

std::string hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::vector<double> parseGrid(const std::string& s) {
  std::vector<double> g;
  if (s.find(':') != std::string::npos) {
    double a, b, step;
    char c1, c2;
    std::istringstream is(s);
    if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) || b < a)
      throw Error(Errc::InvalidArgument, "grid must be lo:hi:step with step > 0");
    for (long i = 0; a + static_cast<double>(i) * step <= b + 1e-9 * step; ++i) g.push_back(a + static_cast<double>(i) * step);
    return g;
  }
  std::istringstream is(s);
  for (std::string item; std::getline(is, item, ',');) g.push_back(std::stod(item));
  if (g.empty()) throw Error(Errc::InvalidArgument, "empty grid");
  return g;
}

std::pair<int, int> parseRange(const std::string& s) {
  auto p = s.find(':');
  if (p == std::string::npos) {
    int v = std::stoi(s);
    return {v, v};
  }
  int lo = std::stoi(s.substr(0, p)), hi = std::stoi(s.substr(p + 1));
  if (hi < lo) throw Error(Errc::InvalidArgument, "range must be lo:hi with lo <= hi");
  return {lo, hi};
}

// PREFIX(TAIL) for a periodic tail, PREFIX[rho0] or PREFIX[rho1+OFFSET] for a
// Thue-Morse tail.
Point parsePoint(const std::string& s) {
  auto open = s.find_first_of("([");
  if (open == std::string::npos || s.back() != (s[open] == '(' ? ')' : ']'))
    throw Error(Errc::InvalidArgument, "point must look like 0110(01) or 1[rho0] / 1[rho1+5]: " + s);
  FiniteWord prefix(s.substr(0, open));
  std::string body = s.substr(open + 1, s.size() - open - 2);
  if (s[open] == '(') return Point::periodic(prefix, FiniteWord(body));
  if (body.rfind("rho", 0) != 0 || body.size() < 4 || (body[3] != '0' && body[3] != '1'))
    throw Error(Errc::InvalidArgument, "Thue-Morse tail must be rho0 or rho1: " + s);
  std::uint64_t off = 0;
  if (body.size() > 4) {
    if (body[4] != '+') throw Error(Errc::InvalidArgument, "offset must be written rhoB+N: " + s);
    off = std::stoull(body.substr(5));
  }
  return Point::thueMorse(prefix, body[3] - '0', off);
}

FiniteWord randomWord(std::mt19937_64& rng, std::size_t n) {
  FiniteWord w;
  for (std::size_t i = 0; i < n; ++i) w.push_back(static_cast<int>(rng() & 1));
  return w;
}

// A generic point of level m: a non-right-special factor of length m, the
// digit leaving the language, then noise and a random periodic tail.
Point randomPointAtLevel(std::mt19937_64& rng, const Language& lang, int m) {
  const std::string& g = lang.generator();
  for (;;) {
    std::string w = g.substr(rng() % (g.size() - static_cast<std::size_t>(m)), static_cast<std::size_t>(m));
    int c = static_cast<int>(rng() & 1);
    if (lang.contains(w + char('0' + c))) c ^= 1;
    if (lang.contains(w + char('0' + c))) continue;
    FiniteWord pre(w + char('0' + c));
    pre += randomWord(rng, 256);
    return Point::periodic(pre, randomWord(rng, 1 + rng() % 31));
  }
}

struct PotentialArgs {
  std::string kind = "distance";
  double a = 1.0, c = 1.0, alpha = -1.0;
  std::string sign = "alpha_k_minus_1";
};

Potential makePotential(const PotentialArgs& p) {
  if (!p.kind.empty() && p.kind.front() == '{') return potentialFromJson(json::parse(p.kind));
  if (p.kind == "distance" || p.kind == "distance_power") return DistancePower{p.a};
  if (p.kind == "uc" || p.kind == "cylinder_uc") return CylinderUc{p.c};
  if (p.kind == "vu") return potentialFromJson({{"type", "vu"}, {"alpha", p.alpha}, {"sign", p.sign}});
  throw Error(Errc::InvalidArgument, "unknown potential " + p.kind + " (distance, uc, vu or a JSON object)");
}

void addPotentialOptions(CLI::App* sub, PotentialArgs& p) {
  sub->add_option("--potential", p.kind, "distance | uc | vu | JSON potential")->capture_default_str();
  sub->add_option("--a", p.a, "exponent of the distance potential")->capture_default_str();
  sub->add_option("--c", p.c, "constant of U_c")->capture_default_str();
  sub->add_option("--alpha", p.alpha, "alpha of V_u")->capture_default_str();
  sub->add_option("--vu-sign", p.sign, "alpha_k_minus_1 | alpha_1_minus_k")->capture_default_str();
}

// Writes the CSV rows to --out (stdout without it).
class Output {
 public:
  explicit Output(const Run& r) : run_(r) {}
  std::ostream& stream() { return buf_; }
  void flush() {
    if (run_.out.empty()) {
      std::cout << buf_.str();
      return;
    }
    std::ofstream f(run_.out, std::ios::binary);
    if (!f) throw Error(Errc::InvalidArgument, "cannot open " + run_.out);
    f << buf_.str();
  }

 private:
  const Run& run_;
  std::ostringstream buf_;
};

// ---- subcommands ---------------------------------------------------------

struct LanguageCmd {
  std::size_t maxLen = 64;
  void run(Run& r, std::ostream& os) {
    auto lang = Language::get(maxLen);
    r.languageHash = lang->contentHash();
    CsvWriter w(os);
    w.row({"n", "factors"});
    for (std::size_t n = 1; n <= maxLen; ++n) w.row({std::to_string(n), std::to_string(lang->count(n))});
    r.extra["generator_length"] = lang->generatorLength();
    r.extra["max_len"] = lang->maxLen();
  }
};

struct ComplexityCmd {
  std::size_t maxN = 64;
  void run(Run& r, std::ostream& os) {
    auto lang = Language::get(maxN + 1);
    r.languageHash = lang->contentHash();
    CsvWriter w(os);
    w.row({"n", "p", "formula", "match"});
    std::size_t bad = 0;
    for (std::size_t n = 1; n <= maxN; ++n) {
      std::size_t p = factorComplexity(*lang, n), f = complexityFormula(n);
      bad += p != f;
      w.row({std::to_string(n), std::to_string(p), std::to_string(f), p == f ? "1" : "0"});
    }
    r.extra["mismatches"] = bad;
    if (bad) r.fail("complexity differs from the closed form");
  }
};

struct SpecialWordsCmd {
  std::size_t nMax = 32;
  void run(Run& r, std::ostream& os) {
    auto lang = Language::get(nMax + 2);
    r.languageHash = lang->contentHash();
    CsvWriter w(os);
    w.row({"n", "word", "left", "right", "bispecial", "tau_shape"});
    std::size_t bi = 0, offShape = 0;
    for (std::size_t n = 1; n <= nMax; ++n) {
      auto s = specialWords(*lang, n);
      std::map<std::string, std::pair<bool, bool>> rows;
      for (const auto& x : s.left) rows[x.str()].first = true;
      for (const auto& x : s.right) rows[x.str()].second = true;
      for (const auto& [word, lr] : rows) {
        bool isBi = lr.first && lr.second;
        bool shape = isTauShape(FiniteWord(word));
        bi += isBi;
        offShape += isBi && !shape;
        w.row({std::to_string(n), word, lr.first ? "1" : "0", lr.second ? "1" : "0", isBi ? "1" : "0",
               shape ? "1" : "0"});
      }
    }
    r.extra["bispecial"] = bi;
    if (offShape) r.fail("bispecial word outside the tau family");
  }
};

struct AccidentsCmd {
  std::string point;
  int horizon = 200;
  int m = 10;
  void run(Run& r, std::ostream& os) {
    auto lang = Language::get(64);
    r.languageHash = lang->contentHash();
    std::mt19937_64 rng(r.seed);
    Point x = point.empty() ? randomPointAtLevel(rng, *lang, m) : parsePoint(point);
    CsvWriter w(os);
    w.row({"time", "b", "d_before", "d_after", "bispecial", "gap_form", "not_special", "b_bound"});
    auto recs = accidents(x, horizon);
    for (const auto& a : recs) {
      auto s = accidentShape(x, a);
      w.row({std::to_string(a.time), std::to_string(a.b), std::to_string(a.dBefore), std::to_string(a.dAfter),
             s.bispecial ? "1" : "0", s.gapForm ? "1" : "0", s.notSpecial ? "1" : "0", s.bBound ? "1" : "0"});
    }
    r.extra["point"] = x.describe();
    r.extra["level"] = admissibleLevel(x);
    r.extra["records"] = recs.size();
  }
};

struct DecompositionCmd {
  int kMax = 6;
  int overlapKMax = 8;
  void run(Run& r, std::ostream& os) {
    CsvWriter w(os);
    w.row({"k", "decomposition", "overlap", "overlap_bound"});
    for (int k = 1; k <= std::max(kMax, overlapKMax); ++k) {
      std::string dec = "", ov = "", bound = "";
      if (k <= kMax) {
        bool ok = disjointDecompositionCheck(k, std::size_t{8} << k);
        if (!ok) r.fail("decomposition fails at k=" + std::to_string(k));
        dec = ok ? "1" : "0";
      }
      if (k >= 2 && k <= overlapKMax) {
        int o = overlapBound(k);
        if (o > (1 << (k - 1))) r.fail("overlap bound exceeded at k=" + std::to_string(k));
        ov = std::to_string(o);
        bound = std::to_string(1 << (k - 1));
      }
      w.row({std::to_string(k), dec, ov, bound});
    }
  }
};

struct RenormCmd {
  PotentialArgs pot;
  std::string point;
  int nMax = 8;
  int m = 8;
  void run(Run& r, std::ostream& os) {
    auto lang = Language::get(64);
    r.languageHash = lang->contentHash();
    std::mt19937_64 rng(r.seed);
    Point x = point.empty() ? randomPointAtLevel(rng, *lang, m) : parsePoint(point);
    Potential V = makePotential(pot);
    CsvWriter w(os);
    w.row({"n", "value", "recursive", "difference"});
    double worst = 0.0;
    for (int n = 0; n <= nMax; ++n) {
      double v = renormApply(V, x, n).value;
      double rec = n <= 12 ? renormRecursive(V, x, n) : v;
      worst = std::max(worst, std::abs(v - rec) / std::max(1.0, std::abs(v)));
      w.row({std::to_string(n), formatDouble(v), n <= 12 ? formatDouble(rec) : "", formatDouble(v - rec)});
    }
    r.tolerances["recursive_rel"] = 1e-12;
    r.extra["point"] = x.describe();
    r.extra["potential"] = potentialToJson(V);
    if (worst > 1e-12) r.fail("direct and recursive renormalization disagree");
  }
};

struct CesaroCmd {
  std::vector<std::string> points;
  std::string mRange = "3:12";
  int perM = 4;
  int n = 12;
  double a = 1.0;
  double widen = 0.10;
  void run(Run& r, std::ostream& os) {
    auto lang = Language::get(64);
    r.languageHash = lang->contentHash();
    std::mt19937_64 rng(r.seed);
    std::vector<std::pair<std::string, Point>> xs;
    if (points.empty()) {
      auto [lo, hi] = parseRange(mRange);
      if (lo < 3) throw Error(Errc::InvalidArgument, "Cesaro bounds need level >= 3");
      for (int m = lo; m <= hi; ++m)
        for (int i = 0; i < perM; ++i) xs.push_back({"m" + std::to_string(m) + "_" + std::to_string(i), randomPointAtLevel(rng, *lang, m)});
    } else {
      for (std::size_t i = 0; i < points.size(); ++i) xs.push_back({points[i], parsePoint(points[i])});
    }
    std::vector<CesaroRow> rows;
    std::size_t outside = 0;
    for (const auto& [id, x] : xs) {
      int m = admissibleLevel(x);
      if (m == kLevelInfinity || m < 3) throw Error(Errc::InvalidArgument, "point " + id + " needs a finite level >= 3");
      double c = cesaroMean(DistancePower{a}, x, n);
      rows.push_back({n, id, m, c});
      if (a == 1.0 && (c < (1 - widen) / (2.0 * m) || c > (1 + widen) / (m - 1.0))) ++outside;
    }
    writeCesaroCsv(os, rows);
    r.tolerances["widen"] = widen;
    r.extra["outside"] = outside;
    if (outside) r.fail("Cesaro mean outside [1/2m, 1/(m-1)]");
  }
};

struct PowerScalingCmd {
  double a = 0.5;
  std::string point;
  int nMax = 12;
  int m = 6;
  double tol = 0.10;
  void run(Run& r, std::ostream& os) {
    auto lang = Language::get(64);
    r.languageHash = lang->contentHash();
    std::mt19937_64 rng(r.seed);
    Point x = point.empty() ? randomPointAtLevel(rng, *lang, m) : parsePoint(point);
    std::vector<int> ns;
    for (int k = 1; k <= nMax; ++k) ns.push_back(k);
    auto rows = powerScalingCheck(a, x, ns);
    const double expect = std::exp2(1.0 - a);
    CsvWriter w(os);
    w.row({"n", "value", "ratio", "expected_ratio"});
    for (const auto& row : rows)
      w.row({std::to_string(row.n), formatDouble(row.value), formatDouble(row.ratio), formatDouble(expect)});
    r.tolerances["ratio_rel"] = tol;
    r.extra["point"] = x.describe();
    if (rows.size() > 1 && std::abs(rows.back().ratio / expect - 1.0) > tol) r.fail("ratio far from 2^{1-a}");
  }
};

struct FixedResidualCmd {
  PotentialArgs pot{"uc"};
  int samples = 1000;
  void run(Run& r, std::ostream& os) {
    Potential V = makePotential(pot);
    std::mt19937_64 rng(r.seed);
    CsvWriter w(os);
    w.row({"sample", "point", "rv", "v", "residual"});
    double worst = 0.0;
    std::size_t skipped = 0;
    for (int i = 0; i < samples; ++i) {
      Point x = Point::periodic(randomWord(rng, 40), randomWord(rng, 1 + rng() % 16));
      try {
        double rv = renormApply(V, x, 1).value, v = evalPotential(V, x);
        worst = std::max(worst, std::abs(rv - v));
        w.row({std::to_string(i), x.describe(), formatDouble(rv), formatDouble(v), formatDouble(rv - v)});
      } catch (const Error& e) {
        if (e.code() != Errc::UndefinedPoint) throw;
        ++skipped;
      }
    }
    r.extra["potential"] = potentialToJson(V);
    r.extra["max_residual"] = worst;
    r.extra["undefined_skipped"] = skipped;
    r.tolerances["residual"] = 0.0;
    bool claimed = std::holds_alternative<CylinderUc>(V) || std::holds_alternative<UnboundedVu>(V);
    if (claimed && worst != 0.0) r.fail("R V != V on a sample");
  }
};

PressureCurve sweep(const ReturnSystem& rs, const Potential& V, const std::vector<double>& grid, unsigned threads) {
  return pressureCurve(rs, V, grid, threads);
}

struct PressureCmd {
  PotentialArgs pot;
  std::string grid = "0:5:0.25";
  int nmax = 64;
  std::string J = "000";
  void run(Run& r, std::ostream& os) {
    Potential V = makePotential(pot);
    auto rs = buildReturnSystem(FiniteWord(J), nmax);
    r.languageHash = rs.lang->contentHash();
    auto c = sweep(rs, V, parseGrid(grid), r.threads);
    writePressureCsv(os, c);
    auto k = checkCurve(c);
    r.extra["potential"] = potentialToJson(V);
    r.extra["nonincreasing"] = k.pressureNonincreasing;
    r.extra["convex"] = k.convex;
    r.extra["nonnegative"] = k.pressureNonnegative;
    r.extra["transition"] = c.transition ? json{c.transition->first, c.transition->second} : json(nullptr);
    r.tolerances["curve"] = 1e-7;
    if (!k.pressureNonincreasing || !k.pressureNonnegative || !k.convex) r.fail("pressure curve fails monotonicity/convexity");
  }
};

struct TransitionCmd {
  double a = 0.5;
  double gammaMax = 400.0;
  double step = 0.05;
  int nmax = 64;
  double tol = 1e-4;
  void run(Run& r, std::ostream& os) {
    if (!(step > 0) || !(gammaMax > step)) throw Error(Errc::InvalidArgument, "need 0 < step < gamma-max");
    auto rs = buildReturnSystem(FiniteWord("000"), nmax);
    r.languageHash = rs.lang->contentHash();
    DistancePower V{a};
    json j{{"a", a}, {"nmax", nmax}, {"gamma_max", gammaMax}};
    std::optional<std::pair<double, double>> br;
    double prev = 0.0;
    for (long i = 1;; ++i) {
      double g = std::min(gammaMax, static_cast<double>(i) * step);
      if (!pressureAt(rs, V, g).positive) {
        br = refineTransition(rs, V, prev, g, tol);
        break;
      }
      prev = g;
      if (g >= gammaMax) break;
    }
    j["found"] = br.has_value();
    if (br) {
      j["gamma_1_lo"] = br->first;
      j["gamma_1_hi"] = br->second;
    }
    if (a < 1.0) {
      auto cert = gammaCertificate(a);
      j["gamma_0"] = cert.gamma0;
      j["majorant"] = cert.majorant;
      if (br && br->second > cert.gamma0 + step) r.fail("transition above the certified gamma_0");
    }
    os << j.dump(2) << "\n";
    r.tolerances["bisection"] = tol;
    r.extra["result"] = j;
  }
};

struct ExcursionCmd {
  double a = 0.5;
  std::string grid = "10:200:10";
  void run(Run& r, std::ostream& os) {
    CsvWriter w(os);
    w.row({"gamma", "B0", "C0", "closed_B", "closed_valid", "converged"});
    for (double g : parseGrid(grid)) {
      auto e = excursionBounds(a, g);
      w.row({formatDouble(g), formatDouble(e.B0), formatDouble(e.C0), formatDouble(e.closedB), e.closedValid ? "1" : "0",
             e.converged ? "1" : "0"});
      if (e.closedValid && e.B0 > e.closedB * (1 + 1e-12)) r.fail("B0 above its closed-form bound");
    }
    auto cert = gammaCertificate(a);
    r.extra["gamma_0"] = cert.gamma0;
    r.extra["majorant"] = cert.majorant;
    r.extra["epsilon"] = cert.epsilon;
  }
};

struct VuCheckCmd {
  double alpha = -1.0;
  int samples = 1000;
  int orbit = 64;
  void run(Run& r, std::ostream& os) {
    UnboundedVu V{alpha};
    CsvWriter w(os);
    w.row({"n", "depth", "value", "prefix_depth"});
    for (int n = 0; n < orbit; ++n) {
      Point x = Point::thueMorse(FiniteWord(), 0, static_cast<std::uint64_t>(n));
      int d = vuDepth(x, V.kMax);
      w.row({std::to_string(n), std::to_string(d), formatDouble(V.atDepth(d) + 0.0), std::to_string(vuPrefixDepth(x, V.kMax))});
    }
    std::mt19937_64 rng(r.seed);
    std::vector<Point> xs;
    for (int i = 0; i < samples; ++i) {
      // tau_j-block words reach every depth up to 6.
      int j = static_cast<int>(rng() % 7);
      FiniteWord pre = randomWord(rng, 1), per;
      for (int b = 1 + static_cast<int>(rng() % 5); b > 0; --b) pre += tau(j, rng() & 1);
      for (int b = 1 + static_cast<int>(rng() % 3); b > 0; --b) per += tau(j, rng() & 1);
      Point x = Point::periodic(pre, per);
      // 0^inf and 1^inf lie outside the fixed-point identity.
      if (x.take(256) == FiniteWord(std::string(256, x.digit(0) ? '1' : '0'))) continue;
      xs.push_back(x);
    }
    double worst = 0.0;
    std::size_t skipped = 0;
    for (const auto& x : xs) {
      try {
        worst = std::max(worst, fixedPointResidual(V, {x}).residual);
      } catch (const Error& e) {
        if (e.code() != Errc::UndefinedPoint) throw;
        ++skipped;
      }
    }
    MuK mu(12, std::size_t{1} << 16);
    auto I = integralMuK(V, mu);
    r.extra["residual"] = worst;
    r.extra["undefined_skipped"] = skipped;
    r.extra["integral_mu_k"] = I.value;
    r.extra["integral_tail_bound"] = I.tailBound;
    r.tolerances["integral"] = 1e-12;
    if (worst != 0.0) r.fail("R V_u != V_u on a sample");
    if (std::abs(I.value) > 1e-12) r.fail("integral of V_u against mu_K is not 0");
  }
};

struct IntervalMapCmd {
  double a = 0.5;
  int depth = 16;
  std::size_t grid = 4096;
  double gamma1 = 0.0;
  std::string rule = "floor";
  int nmax = 64;
  void run(Run& r, std::ostream& os) {
    KCellRule k;
    if (rule == "floor")
      k = KCellRule::ResolutionFloor;
    else if (rule == "zero")
      k = KCellRule::Zero;
    else
      throw Error(Errc::InvalidArgument, "k-rule must be floor or zero");
    double g1 = gamma1;
    if (!(g1 > 0)) {
      auto rs = buildReturnSystem(FiniteWord("000"), nmax);
      r.languageHash = rs.lang->contentHash();
      std::vector<double> g;
      for (int i = 0; i <= 400; ++i) g.push_back(0.05 * i);
      auto c = pressureCurve(rs, DistancePower{a}, g, r.threads);
      if (!c.transition) throw Error(Errc::GridExhausted, "no transition on [0, 20]; pass --gamma1");
      g1 = 0.5 * (c.transition->first + c.transition->second);
    }
    auto W = buildW(a, depth, k);
    auto nu = conformalMeasure(W, g1);
    auto m = buildFa(nu, W, grid);
    auto dr = derivativeCheck(nu, W, g1, a > 1.0 ? std::log(nu.eigenvalue) : 0.0);
    writeMapCsv(os, m);
    r.extra["gamma_1"] = g1;
    r.extra["eigenvalue"] = nu.eigenvalue;
    r.extra["conformal_residual"] = nu.conformalResidual;
    r.extra["derivative_max_rel_err"] = dr.maxRelErrInterior;
    r.extra["min_slope"] = dr.minSlope;
    r.extra["interior_cells"] = dr.interiorCells;
    r.tolerances["eigenvalue"] = 1e-3;
    r.tolerances["derivative"] = 0.05;
    if (a < 1.0 && std::abs(nu.eigenvalue - 1.0) > 1e-3) r.fail("eigenvalue at gamma_1 differs from 1");
    if (dr.maxRelErrInterior > 0.05) r.fail("f' differs from e^{gamma W}");
  }
};

struct PiCodeCmd {
  std::vector<std::string> words;
  std::size_t rhoPrefix = 17;
  void run(Run& r, std::ostream& os) {
    CsvWriter w(os);
    w.row({"input", "pi"});
    std::vector<FiniteWord> in;
    for (const auto& s : words) in.emplace_back(s);
    if (in.empty()) in.push_back(fixedPointPrefix(0, rhoPrefix));
    const auto H = Substitution::thueMorse(), F = Substitution::feigenbaum();
    for (const auto& x : in) {
      auto p = slidingBlockPi(x);
      w.row({x.str(), p.str()});
      if (!substitutionApply(F, p, 1).isPrefixOf(slidingBlockPi(substitutionApply(H, x, 1))))
        r.fail("pi H != H_feig pi on " + x.str());
    }
  }
};

// Appends "--key value" for config keys the command line does not set.
std::vector<std::string> mergeConfig(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") path = args[i + 1];
  for (const auto& a : args)
    if (a.rfind("--config=", 0) == 0) path = a.substr(9);
  if (path.empty()) return args;
  std::ifstream f(path);
  if (!f) throw CLI::ValidationError("--config", "cannot read " + path);
  json cfg;
  try {
    cfg = json::parse(f);
  } catch (const json::exception& e) {
    throw CLI::ValidationError("--config", e.what());
  }
  if (!cfg.is_object()) throw CLI::ValidationError("--config", "config must be a JSON object");
  auto given = [&](const std::string& flag) {
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  std::vector<std::string> out = args;
  for (const auto& [key, val] : cfg.items()) {
    std::string flag = "--" + key;
    if (key == "config" || given(flag)) continue;
    auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (val.is_array()) {
      for (const auto& v : val) {
        out.push_back(flag);
        out.push_back(scalar(v));
      }
    } else if (val.is_boolean()) {
      if (val.get<bool>()) out.push_back(flag);
    } else {
      out.push_back(flag);
      out.push_back(scalar(val));
    }
  }
  return out;
}

json parameters(const CLI::App* sub) {
  json p = json::object();
  for (const auto* opt : sub->get_options()) {
    std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config" || name == "out") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      p[name] = res.size() == 1 ? json(res[0]) : json(res);
    } else {
      p[name] = opt->get_default_str();
    }
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thue-Morse renormalization and thermodynamic formalism experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Run run;

  LanguageCmd language;
  ComplexityCmd complexity;
  SpecialWordsCmd special;
  AccidentsCmd acc;
  DecompositionCmd decomp;
  RenormCmd renorm;
  CesaroCmd cesaro;
  PowerScalingCmd power;
  FixedResidualCmd fixedRes;
  PressureCmd pressure;
  TransitionCmd transition;
  ExcursionCmd excursion;
  VuCheckCmd vu;
  IntervalMapCmd imap;
  PiCodeCmd pi;

  std::map<CLI::App*, std::function<void(Run&, std::ostream&)>> actions;
  std::string configPath;
  auto common = [&](CLI::App* s) {
    s->add_option("--out", run.out, "output file (stdout if absent); manifest goes to <out>.manifest.json");
    s->add_option("--seed", run.seed, "seed of randomized suites")->capture_default_str();
    s->add_option("--threads", run.threads, "worker threads for gamma sweeps (0 = all cores)")->capture_default_str();
    s->add_option("--config", configPath, "JSON file whose keys mirror the flags; flags win");
  };
  auto add = [&](const char* name, const char* desc, auto& cmd) {
    CLI::App* s = app.add_subcommand(name, desc);
    common(s);
    actions[s] = [&cmd](Run& r, std::ostream& os) { cmd.run(r, os); };
    return s;
  };

  auto* s = add("language", "factor counts of the Thue-Morse language", language);
  s->add_option("--max-len", language.maxLen)->capture_default_str();
  s = add("complexity", "factor complexity against its closed form", complexity);
  s->add_option("--max-n", complexity.maxN)->capture_default_str();
  s = add("special-words", "left/right/bispecial factors", special);
  s->add_option("--n-max", special.nMax)->capture_default_str();
  s = add("accidents", "accident records along an orbit", acc);
  s->add_option("--point", acc.point, "e.g. 0110(01); random point of level --m if absent");
  s->add_option("--horizon", acc.horizon)->capture_default_str();
  s->add_option("--m", acc.m, "level of the random point")->capture_default_str();
  s = add("decomposition", "disjointness of the H^k shifts and overlap bounds", decomp);
  s->add_option("--k-max", decomp.kMax)->capture_default_str();
  s->add_option("--overlap-k-max", decomp.overlapKMax)->capture_default_str();
  s = add("renorm", "iterates R^n V at a point", renorm);
  addPotentialOptions(s, renorm.pot);
  s->add_option("--point", renorm.point);
  s->add_option("--n-max", renorm.nMax)->capture_default_str();
  s->add_option("--m", renorm.m)->capture_default_str();
  s = add("cesaro", "Cesaro means of R^k V_0", cesaro);
  s->add_option("--point", cesaro.points, "repeatable; random points per level if absent");
  s->add_option("--m-range", cesaro.mRange)->capture_default_str();
  s->add_option("--per-m", cesaro.perM)->capture_default_str();
  s->add_option("--n", cesaro.n)->capture_default_str();
  s->add_option("--a", cesaro.a)->capture_default_str();
  s->add_option("--widen", cesaro.widen)->capture_default_str();
  s = add("power-scaling", "R^n of n^{-a}: ratios against 2^{1-a}", power);
  s->add_option("--a", power.a)->capture_default_str();
  s->add_option("--point", power.point);
  s->add_option("--n-max", power.nMax)->capture_default_str();
  s->add_option("--m", power.m)->capture_default_str();
  s->add_option("--tol", power.tol)->capture_default_str();
  s = add("fixed-residual", "|R V - V| on random points", fixedRes);
  addPotentialOptions(s, fixedRes.pot);
  s->add_option("--samples", fixedRes.samples)->capture_default_str();
  s = add("pressure", "pressure curve over a gamma grid", pressure);
  addPotentialOptions(s, pressure.pot);
  s->add_option("--gamma-grid", pressure.grid, "lo:hi:step or a comma list")->capture_default_str();
  s->add_option("--nmax", pressure.nmax)->capture_default_str();
  s->add_option("--J", pressure.J, "return cylinder")->capture_default_str();
  s = add("transition", "phase transition bracket for n^{-a}", transition);
  s->add_option("--a", transition.a)->capture_default_str();
  s->add_option("--gamma-max", transition.gammaMax)->capture_default_str();
  s->add_option("--gamma-step", transition.step)->capture_default_str();
  s->add_option("--nmax", transition.nmax)->capture_default_str();
  s->add_option("--tol", transition.tol)->capture_default_str();
  s = add("excursion-bounds", "excursion series B0, C0 and the gamma_0 certificate", excursion);
  s->add_option("--a", excursion.a)->capture_default_str();
  s->add_option("--gamma-grid", excursion.grid)->capture_default_str();
  s = add("vu-check", "V_u depth table, fixed-point residual and mu_K integral", vu);
  s->add_option("--alpha", vu.alpha)->capture_default_str();
  s->add_option("--samples", vu.samples)->capture_default_str();
  s->add_option("--orbit", vu.orbit)->capture_default_str();
  s = add("interval-map", "conformal measure and the interval map f_a", imap);
  s->add_option("--a", imap.a)->capture_default_str();
  s->add_option("--depth", imap.depth)->capture_default_str();
  s->add_option("--grid", imap.grid)->capture_default_str();
  s->add_option("--gamma1", imap.gamma1, "0 = compute from the pressure curve")->capture_default_str();
  s->add_option("--k-rule", imap.rule, "floor | zero")->capture_default_str();
  s->add_option("--nmax", imap.nmax)->capture_default_str();
  s = add("pi-code", "sliding block code pi", pi);
  s->add_option("--word", pi.words, "repeatable; a rho_0 prefix if absent");
  s->add_option("--rho-prefix", pi.rhoPrefix)->capture_default_str();

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = mergeConfig(args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  auto t0 = std::chrono::steady_clock::now();
  try {
    Output out(run);
    actions.at(sub)(run, out.stream());
    out.flush();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!run.out.empty()) {
    json m{{"subcommand", sub->get_name()},
           {"parameters", parameters(sub)},
           {"language_hash", run.languageHash ? json(hex(run.languageHash)) : json(nullptr)},
           {"tolerances", run.tolerances},
           {"version", kVersion},
           {"wall_time_s", wall},
           {"results", run.extra},
           {"validation", run.failed ? json(run.failure) : json("ok")}};
    std::ofstream f(run.out + ".manifest.json", std::ios::binary);
    f << m.dump(2) << "\n";
  }
  if (run.failed) {
    std::cerr << "validation failed: " << run.failure << "\n";
    return 2;
  }
  return 0;
}
