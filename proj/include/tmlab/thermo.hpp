#pragma once

#include <array>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "tmlab/potential.hpp"

namespace tmlab {

// First-return structure of the cylinder [J], J not a K-factor.
struct ReturnSystem {
  FiniteWord J;
  int deltaJ = 0;  // common level of all points of [J]
  int NMax = 64;
  std::shared_ptr<const Language> lang;
  std::vector<std::array<int, 2>> kmp;  // J-matching automaton, state = matched length
};

ReturnSystem buildReturnSystem(const FiniteWord& J, int NMax = 64, int nmaxBound = 256);

// log a_n for n = 1..NMax (index n-1); -inf where a_n = 0.
std::vector<double> returnLogCoefficients(const ReturnSystem& rs, const Potential& V, double gamma);
std::vector<double> returnCoefficients(const ReturnSystem& rs, const Potential& V, double gamma);

// Oracle: all 2^n loop words, explicit first-return filtering, levels from a
// hash set of factors.  sums[n-1] lists S_n V over the accepted words.
std::vector<std::vector<double>> bruteForceBirkhoffSums(const ReturnSystem& rs, const Potential& V, int nLimit);
std::vector<double> bruteForceCoefficients(const ReturnSystem& rs, const Potential& V, double gamma, int nLimit);

struct TailModel {
  bool valid = false;
  double intercept = 0.0;
  double slope = 0.0;
  int nLast = 0;  // tail starts at nLast + 1
};
// Least-squares line through (n, log a_n) for n in [lo, hi].
TailModel fitTail(const std::vector<double>& logA, int lo, int hi);

// Z(z) = sum_{n <= N} a_n e^{-nz} + geometric tail; +inf where the tail
// diverges.
double partitionValue(const std::vector<double>& logA, const TailModel& tail, double z);

struct ZcEstimate {
  double value = 0.0;     // max(rawSlope, floor)
  double rawSlope = 0.0;  // slope on [N/2, N]
  double floor = 0.0;     // certified lower bound: 0 for distance potentials, -inf otherwise
  double stabilityDelta = 0.0;  // |slope[N/2,N] - slope[N/4,N/2]|
  bool degenerate = false;
};

ZcEstimate zcEstimate(const std::vector<double>& logA, const Potential& V);

struct RootResult {
  std::optional<double> zStar;
  double zLow = 0.0;   // lower end of the bracket that was tried
  double zAtLow = 0.0; // Z at zLow
  TailModel tail;
};
inline constexpr double kRootMargin = 1e-9;
RootResult pressureRoot(const std::vector<double>& logA, double zc, double margin = kRootMargin);

struct PressurePoint {
  double gamma = 0.0;
  std::optional<double> zStar;
  std::optional<double> zStarHalf;  // same with NMax/2
  ZcEstimate zc;
  double pressure = 0.0;      // max(z* if it exists else z_c, 0)
  double pressureHalf = 0.0;  // same with NMax/2
  bool positive = false;
  int nmax = 0;
};

PressurePoint pressureAt(const ReturnSystem& rs, const Potential& V, double gamma);

struct PressureCurve {
  std::vector<PressurePoint> points;
  std::optional<std::pair<double, double>> transition;  // gamma_1 bracket
};

PressureCurve pressureCurve(const ReturnSystem& rs, const Potential& V, const std::vector<double>& grid,
                            unsigned threads = 0, double transitionTol = 1e-4);

// Bisection in gamma on PressurePoint::positive between lo (true) and hi (false).
std::pair<double, double> refineTransition(const ReturnSystem& rs, const Potential& V, double lo, double hi,
                                           double tol);

struct CurveChecks {
  bool pressureNonincreasing = true;
  bool pressureNonnegative = true;
  bool convex = true;
  double worstConvexity = 0.0;  // most negative slope increment
};
CurveChecks checkCurve(const PressureCurve& c, double tol = 1e-7);

void writePressureCsv(std::ostream& os, const PressureCurve& c);

// Excursion series of the a < 1 argument.
struct ExcursionBounds {
  double B0 = 0.0;
  double C0 = 0.0;
  double closedB = 0.0;  // sum_k (1 + 3/(p_k - 1)) (2/3)^{p_k}, p_k = gamma 2^{k(1-a)}
  bool closedValid = false;
  bool converged = true;
};
ExcursionBounds excursionBounds(double a, double gamma, double z = 0.0);

struct CertificateOptions {
  int freePathLevel = 6;  // epsilon = freePathLevel^{-a}
  double epsilon0 = 0.0;  // o(n^{-a}) absorption: gamma -> gamma (1 - epsilon0)
  double gammaMin = 0.05;
  double gammaMax = 400.0;
  double gammaStep = 0.05;
};
struct GammaCertificate {
  double gamma0 = 0.0;
  double majorant = 0.0;
  double majorantBefore = 0.0;  // at the previous grid point (inf if unreported)
  double epsilon = 0.0;
};
// Full majorant 32 e^{-5 eps g}/(1 - 2e^{-eps g}) * sum_M r^M; +inf outside
// the domain of the geometric sums.
double certificateMajorant(double a, double gamma, const CertificateOptions& opt = {});
GammaCertificate gammaCertificate(double a, const CertificateOptions& opt = {});

}  // namespace tmlab
