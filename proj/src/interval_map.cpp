#include "tmlab/interval_map.hpp"

#include <cmath>

#include "tmlab/csv.hpp"
#include "tmlab/error.hpp"
#include "tmlab/language.hpp"

namespace tmlab {

ModifiedPotential buildW(double a, int depth, KCellRule rule) {
  if (depth < 2 || depth > 20) throw Error(Errc::OutOfRange, "depth outside [2,20]");
  if (!(a > 0)) throw Error(Errc::InvalidArgument, "a must be positive");
  ModifiedPotential W;
  W.a = a;
  W.depth = depth;
  W.rule = rule;
  const std::size_t n = W.cells();
  auto lang = Language::get(static_cast<std::size_t>(depth) + 1);
  const auto& st = lang->states();
  W.level.assign(n, 0);
  W.kFactor.assign(n, 0);
  W.base.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::int32_t v = 0;
    int l = 0;
    while (l < depth) {
      int d = static_cast<int>((i >> (depth - 1 - l)) & 1);
      v = st[v].next[d];
      if (v < 0) break;
      ++l;
    }
    W.level[i] = l;
    W.kFactor[i] = l == depth;
    if (l < depth)
      W.base[i] = std::pow(static_cast<double>(l), -a);
    else
      W.base[i] = rule == KCellRule::Zero ? 0.0 : std::pow(static_cast<double>(depth), -a);
  }
  // A dyadic boundary between cells c and c+1 keeps the common value when
  // both sides agree; otherwise it takes the value on the side closer to K
  // (the larger level, the smaller V), which moves the farther side by at
  // most the offset of a few digits.
  W.node.assign(n + 1, 0.0);
  W.node[0] = W.base[0];
  W.node[n] = W.base[n - 1];
  for (std::size_t i = 1; i < n; ++i) W.node[i] = std::min(W.base[i - 1], W.base[i]);
  W.cell.resize(static_cast<Eigen::Index>(n));
  W.modified.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    W.cell(static_cast<Eigen::Index>(i)) = 0.5 * (W.node[i] + W.node[i + 1]);
    W.modified[i] = W.node[i] != W.base[i] || W.node[i + 1] != W.base[i];
  }
  return W;
}

ModifiedPotential zeroW(int depth) {
  ModifiedPotential W = buildW(1.0, depth, KCellRule::Zero);
  std::fill(W.base.begin(), W.base.end(), 0.0);
  std::fill(W.node.begin(), W.node.end(), 0.0);
  W.cell.setZero();
  std::fill(W.modified.begin(), W.modified.end(), 0);
  return W;
}

namespace {

// nu(sigma c) for every depth-N cell c: sigma c is the depth-(N-1)
// cylinder c_1..c_{N-1}, the union of two depth-N cells.
Eigen::ArrayXd shiftedMass(const Eigen::ArrayXd& nu, int depth) {
  const Eigen::Index n = nu.size();
  const Eigen::Index mask = n - 1;
  Eigen::ArrayXd out(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index s = (c << 1) & mask;
    out(c) = nu(s) + nu(s | 1);
  }
  (void)depth;
  return out;
}

}  // namespace

ConformalMeasure conformalMeasure(const ModifiedPotential& W, double gamma1, int maxIterations, double tol) {
  if (!(gamma1 >= 0)) throw Error(Errc::InvalidArgument, "gamma1 must be nonnegative");
  ConformalMeasure m;
  m.depth = W.depth;
  m.gamma1 = gamma1;
  const Eigen::Index n = static_cast<Eigen::Index>(W.cells());
  const Eigen::ArrayXd damp = (-gamma1 * W.cell).exp();
  Eigen::ArrayXd nu = Eigen::ArrayXd::Constant(n, 1.0 / static_cast<double>(n));
  // Adjoint action: nu'(c) = e^{-g W(c)} nu(sigma c); the fixed point
  // satisfies nu(sigma c) = lambda e^{g W(c)} nu(c).
  for (int it = 1; it <= maxIterations; ++it) {
    Eigen::ArrayXd next = damp * shiftedMass(nu, W.depth);
    double lambda = next.sum();
    next /= lambda;
    double delta = (next - nu).abs().sum();
    nu = std::move(next);
    m.eigenvalue = lambda;
    m.iterations = it;
    m.finalDelta = delta;
    if (delta < tol) {
      m.converged = true;
      break;
    }
  }
  m.weights = nu;
  Eigen::ArrayXd lhs = shiftedMass(nu, W.depth);
  Eigen::ArrayXd rhs = m.eigenvalue * (gamma1 * W.cell).exp() * nu;
  m.conformalResidual = ((lhs - rhs).abs() / lhs.max(1e-300)).maxCoeff();
  return m;
}

SampledMap buildFa(const ConformalMeasure& nu, const ModifiedPotential& W, std::size_t gridSize) {
  const std::size_t n = W.cells();
  if (gridSize < 2 || gridSize > n || (gridSize & (gridSize - 1))) throw Error(Errc::InvalidArgument, "grid size must be a power of two <= 2^depth");
  SampledMap s;
  s.theta.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) s.theta[i + 1] = s.theta[i] + nu.weights(static_cast<Eigen::Index>(i));
  const double total = s.theta[n];
  for (double& v : s.theta) v /= total;
  s.theta[n] = 1.0;
  // f(theta(x)) = theta(sigma x): the left end of cell i maps to the left
  // end of cell 2i mod 2^N; the right end of the last cell of a branch maps
  // to 1.
  const std::size_t step = n / gridSize;
  auto image = [&](std::size_t node) {
    if (node == n / 2 || node == n) return 1.0;
    return s.theta[(2 * node) % n];
  };
  for (std::size_t g = 0; g < gridSize; ++g) {
    std::size_t lo = g * step, hi = lo + step;
    double flo = s.theta[(2 * lo) % n];
    double fhi = image(hi);
    double dt = s.theta[hi] - s.theta[lo];
    s.t.push_back(s.theta[lo]);
    s.f.push_back(flo);
    s.slope.push_back(dt > 0 ? (fhi - flo) / dt : 0.0);
    double wsum = 0.0;
    for (std::size_t c = lo; c < hi; ++c) wsum += W.cell(static_cast<Eigen::Index>(c));
    s.w.push_back(wsum / static_cast<double>(step));
  }
  return s;
}

DerivativeReport derivativeCheck(const ConformalMeasure& nu, const ModifiedPotential& W, double gamma1,
                                 double pressureOffset) {
  SampledMap s = buildFa(nu, W, W.cells());
  DerivativeReport r;
  r.minSlope = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < W.cells(); ++c) {
    double sl = s.slope[c];
    r.minSlope = std::min(r.minSlope, sl);
    if (W.kFactor[c]) r.maxKSlope = std::max(r.maxKSlope, sl);
    if (!W.modified[c]) {
      double expect = std::exp(gamma1 * W.cell(static_cast<Eigen::Index>(c)) + pressureOffset);
      r.maxRelErrInterior = std::max(r.maxRelErrInterior, std::abs(sl / expect - 1.0));
      ++r.interiorCells;
    }
  }
  return r;
}

void writeMapCsv(std::ostream& os, const SampledMap& m) {
  CsvWriter w(os);
  w.row({"t", "f_a", "slope", "w"});
  for (std::size_t i = 0; i < m.t.size(); ++i)
    w.row({formatDouble(m.t[i]), formatDouble(m.f[i]), formatDouble(m.slope[i]), formatDouble(m.w[i])});
}

}  // namespace tmlab
