#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "tmlab/csv.hpp"
#include "tmlab/error.hpp"
#include "tmlab/thermo.hpp"

namespace tmlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2 = 0.69314718055994530942;
}  // namespace

TailModel fitTail(const std::vector<double>& logA, int lo, int hi) {
  TailModel t;
  hi = std::min<int>(hi, static_cast<int>(logA.size()));
  t.nLast = static_cast<int>(logA.size());
  std::vector<int> ns;
  for (int n = std::max(lo, 1); n <= hi; ++n)
    if (std::isfinite(logA[n - 1])) ns.push_back(n);
  if (ns.size() < 2) return t;
  Eigen::MatrixXd A(ns.size(), 2);
  Eigen::VectorXd b(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = ns[i];
    b(i) = logA[ns[i] - 1];
  }
  Eigen::Vector2d x = A.colPivHouseholderQr().solve(b);
  t.valid = true;
  t.intercept = x(0);
  t.slope = x(1);
  return t;
}

double partitionValue(const std::vector<double>& logA, const TailModel& tail, double z) {
  double s = 0.0;
  for (std::size_t n = 1; n <= logA.size(); ++n)
    if (std::isfinite(logA[n - 1])) s += std::exp(logA[n - 1] - static_cast<double>(n) * z);
  if (!tail.valid) return s;
  if (z <= tail.slope) return kInf;
  const double r = tail.slope - z;
  s += std::exp(tail.intercept + r * (tail.nLast + 1)) / (-std::expm1(r));
  return s;
}

namespace {

// Distance potentials: loops that shadow K cost nothing in the limit, so the
// series diverges for every z < 0.  No such floor is known for V_u.
double zcFloorValue(const Potential& V) {
  return std::holds_alternative<DistancePower>(V) ? 0.0 : -kInf;
}

}  // namespace

ZcEstimate zcEstimate(const std::vector<double>& logA, const Potential& V) {
  ZcEstimate z;
  const int N = static_cast<int>(logA.size());
  TailModel full = fitTail(logA, N / 2, N);
  TailModel half = fitTail(logA, N / 4, N / 2);
  z.floor = zcFloorValue(V);
  if (!full.valid) {
    z.degenerate = true;
    z.rawSlope = -kInf;
    z.value = z.floor;
    z.stabilityDelta = kInf;
    return z;
  }
  z.rawSlope = full.slope;
  z.stabilityDelta = half.valid ? std::abs(full.slope - half.slope) : kInf;
  z.value = std::max(z.rawSlope, z.floor);
  return z;
}

RootResult pressureRoot(const std::vector<double>& logA, double zc, double margin) {
  RootResult r;
  const int N = static_cast<int>(logA.size());
  r.tail = fitTail(logA, N / 2, N);
  double lo = (std::isfinite(zc) ? zc : -1.0) + margin;
  r.zLow = lo;
  r.zAtLow = partitionValue(logA, r.tail, lo);
  if (r.zAtLow < 1.0) return r;
  // Z is decreasing in z; widen until it brackets.
  double hi = std::max(lo + 1.0, kLog2 + 1.0);
  for (int k = 0; partitionValue(logA, r.tail, hi) >= 1.0; ++k) {
    if (k == 60) return r;  // non-bracketing
    hi = lo + 2.0 * (hi - lo);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    double mid = 0.5 * (lo + hi);
    if (partitionValue(logA, r.tail, mid) >= 1.0)
      lo = mid;
    else
      hi = mid;
  }
  r.zStar = 0.5 * (lo + hi);
  return r;
}

namespace {

// Pressure from the coefficient series: the root where one exists, otherwise
// z_c (the loops avoiding J carry the growth rate); never below 0, the value
// of mu_K.
void fillPressure(PressurePoint& p, const std::vector<double>& logA, const Potential& V) {
  p.zc = zcEstimate(logA, V);
  p.zStar = pressureRoot(logA, p.zc.value).zStar;
  p.pressure = std::max(p.zStar.value_or(p.zc.value), 0.0);
  p.positive = p.pressure > 0.0;
}

}  // namespace

PressurePoint pressureAt(const ReturnSystem& rs, const Potential& V, double gamma) {
  PressurePoint p;
  p.gamma = gamma;
  p.nmax = rs.NMax;
  auto logA = returnLogCoefficients(rs, V, gamma);
  fillPressure(p, logA, V);
  std::vector<double> halfA(logA.begin(), logA.begin() + rs.NMax / 2);
  PressurePoint h;
  fillPressure(h, halfA, V);
  p.zStarHalf = h.zStar;
  p.pressureHalf = h.pressure;
  return p;
}

std::pair<double, double> refineTransition(const ReturnSystem& rs, const Potential& V, double lo, double hi,
                                           double tol) {
  auto positive = [&](double g) {
    PressurePoint p;
    fillPressure(p, returnLogCoefficients(rs, V, g), V);
    return p.positive;
  };
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (positive(mid))
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

PressureCurve pressureCurve(const ReturnSystem& rs, const Potential& V, const std::vector<double>& grid,
                            unsigned threads, double transitionTol) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw Error(Errc::InvalidArgument, "gamma grid must be strictly increasing");
  PressureCurve c;
  c.points.resize(grid.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, grid.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < grid.size();) c.points[i] = pressureAt(rs, V, grid[i]);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (std::size_t i = 1; i < c.points.size(); ++i) {
    if (c.points[i - 1].positive && !c.points[i].positive) {
      c.transition = refineTransition(rs, V, grid[i - 1], grid[i], transitionTol);
      break;
    }
  }
  return c;
}

CurveChecks checkCurve(const PressureCurve& c, double tol) {
  CurveChecks k;
  const auto& p = c.points;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].pressure < 0) k.pressureNonnegative = false;
    if (i > 0) {
      if (p[i].pressure > p[i - 1].pressure + tol) k.pressureNonincreasing = false;
    }
    if (i > 0 && i + 1 < p.size()) {
      double s1 = (p[i].pressure - p[i - 1].pressure) / (p[i].gamma - p[i - 1].gamma);
      double s2 = (p[i + 1].pressure - p[i].pressure) / (p[i + 1].gamma - p[i].gamma);
      k.worstConvexity = std::min(k.worstConvexity, s2 - s1);
      if (s2 - s1 < -tol) k.convex = false;
    }
  }
  return k;
}

void writePressureCsv(std::ostream& os, const PressureCurve& c) {
  CsvWriter w(os);
  w.row({"gamma", "z_star", "z_c", "pressure", "nmax", "stability_delta"});
  for (const auto& p : c.points)
    w.row({formatDouble(p.gamma), p.zStar ? formatDouble(*p.zStar) : "", formatDouble(p.zc.value),
           formatDouble(p.pressure), std::to_string(p.nmax), formatDouble(p.zc.stabilityDelta)});
}

}  // namespace tmlab
