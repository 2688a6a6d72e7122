#include "tmlab/renorm.hpp"

#include <cmath>

#include "tmlab/csv.hpp"
#include "tmlab/error.hpp"

namespace tmlab {

namespace {

void checkIterations(int n, const RenormOptions& opt) {
  if (n < 0 || n > opt.maxIterations)
    throw Error(Errc::OutOfRange, "iteration count outside [0, " + std::to_string(opt.maxIterations) + "]");
}

// Levels along sigma^j H^n x for j < 2^n, exact as long as the orbit stays
// below the language resolution; saturated entries are kLevelInfinity.
std::vector<int> orbitLevels(const Point& x, int n, const RenormOptions& opt) {
  const std::size_t need = renormRequiredResolution(x, n, opt);
  if (need > opt.maxLanguage)
    throw Error(Errc::InsufficientPrefix, "renormalization needs level resolution " + std::to_string(need) +
                                              " (limit " + std::to_string(opt.maxLanguage) + ")");
  auto lang = Language::get(need);
  const int cap = static_cast<int>(lang->maxLen());
  Point y = x.substitute(Substitution::thueMorse(), n);
  const std::size_t count = std::size_t{1} << n;
  std::string text = y.take(count + static_cast<std::size_t>(cap) + 1).str();
  return lang->levels(text, count, cap);
}

}  // namespace

std::size_t renormRequiredResolution(const Point& x, int n, const RenormOptions& opt) {
  int m = admissibleLevel(x, opt.levelCap);
  std::size_t base = m == kLevelInfinity ? static_cast<std::size_t>(opt.levelCap) : static_cast<std::size_t>(m);
  std::size_t need = (std::size_t{1} << n) * (base + 1) + 1;
  if (m == kLevelInfinity) need = std::min(need, opt.maxLanguage);
  return need;
}

RenormEvaluation renormApply(const Potential& V, const Point& x, int n, const RenormOptions& opt) {
  checkIterations(n, opt);
  RenormEvaluation ev;
  ev.x = x;
  ev.n = n;
  const std::size_t count = std::size_t{1} << n;
  if (const auto* dp = std::get_if<DistancePower>(&V)) {
    auto lv = orbitLevels(x, n, opt);
    int m = admissibleLevel(x, opt.levelCap);
    if (m != kLevelInfinity)
      for (int l : lv)
        if (l == kLevelInfinity) throw Error(Errc::InsufficientPrefix, "orbit level saturated the resolution");
    std::vector<double> vals(count);
    for (std::size_t j = 0; j < count; ++j) vals[j] = dp->atLevel(lv[j]);
    ev.value = pairwiseSum(vals);
    ev.accidentsSeen = accidentsFromLevels(lv);
    return ev;
  }
  Point y = x.substitute(Substitution::thueMorse(), n);
  ev.value = pairwiseSum(orbitValues(V, y, count, opt.levelCap));
  return ev;
}

double renormRecursive(const Potential& V, const Point& x, int n, const RenormOptions& opt) {
  checkIterations(n, opt);
  if (n == 0) return evalPotential(V, x, opt.levelCap);
  Point h = x.substitute(Substitution::thueMorse(), 1);
  if (std::holds_alternative<DistancePower>(V)) {
    // Deeper points need a finer cap; R^{n-1} at Hx holds levels up to
    // 2^{n-1}(2m+1).
    RenormOptions o = opt;
    int m = admissibleLevel(x, opt.levelCap);
    if (m != kLevelInfinity) o.levelCap = static_cast<int>(std::min<std::size_t>(opt.maxLanguage, 2 * m + 2));
    return renormRecursive(V, h.shift(1), n - 1, o) + renormRecursive(V, h, n - 1, o);
  }
  return renormRecursive(V, h.shift(1), n - 1, opt) + renormRecursive(V, h, n - 1, opt);
}

double cesaroMean(const Potential& V, const Point& x, int n, const RenormOptions& opt) {
  if (n < 1) throw Error(Errc::InvalidArgument, "Cesaro mean needs n >= 1");
  std::vector<double> vals;
  for (int k = 0; k < n; ++k) vals.push_back(renormApply(V, x, k, opt).value);
  return pairwiseSum(vals) / n;
}

std::vector<PowerScalingRow> powerScalingCheck(double a, const Point& x, const std::vector<int>& nRange,
                                               const RenormOptions& opt) {
  if (!(a > 0) || a == 1.0) throw Error(Errc::InvalidArgument, "power scaling needs a > 0, a != 1");
  std::vector<PowerScalingRow> out;
  Potential V = DistancePower{a};
  for (std::size_t i = 0; i < nRange.size(); ++i) {
    double v = renormApply(V, x, nRange[i], opt).value;
    double r = i == 0 ? 0.0 : v / out.back().value;
    out.push_back({nRange[i], v, r});
  }
  return out;
}

double weakStableLimit(const CylinderTable& g, const Point& x, int n, const RenormOptions& opt) {
  if (n < 1) throw Error(Errc::InvalidArgument, "n >= 1 required");
  std::vector<double> means;
  for (int k = 0; k < n; ++k) {
    checkIterations(k, opt);
    auto lv = orbitLevels(x, k, opt);
    const std::size_t count = std::size_t{1} << k;
    Point y = x.substitute(Substitution::thueMorse(), k);
    auto gv = orbitValues(g, y, count, opt.levelCap);
    std::vector<double> vals(count);
    for (std::size_t j = 0; j < count; ++j) vals[j] = lv[j] == kLevelInfinity ? 0.0 : gv[j] / lv[j];
    means.push_back(pairwiseSum(vals));
  }
  return pairwiseSum(means) / n;
}

FixedPointReport fixedPointResidual(const Potential& V, const std::vector<Point>& samples, const RenormOptions& opt) {
  FixedPointReport rep;
  for (const auto& x : samples) {
    double rv = renormApply(V, x, 1, opt).value;
    double v = evalPotential(V, x, opt.levelCap);
    rep.residual = std::max(rep.residual, std::abs(rv - v));
    ++rep.evaluated;
  }
  auto special = [&](const char* w, int seed) { return evalPotential(V, Point::thueMorse(FiniteWord(w), seed), opt.levelCap); };
  rep.identityRho0 = special("01", 0) + special("10", 0);
  rep.identityRho1 = special("01", 1) + special("10", 1);
  return rep;
}

void writeCesaroCsv(std::ostream& os, const std::vector<CesaroRow>& rows) {
  CsvWriter w(os);
  w.row({"n", "x_id", "value", "lower_bound", "upper_bound"});
  for (const auto& r : rows)
    w.row({std::to_string(r.n), r.xId, formatDouble(r.value), formatDouble(1.0 / (2.0 * r.level)),
           formatDouble(1.0 / (r.level - 1.0))});
}

}  // namespace tmlab
