#pragma once

#include <ostream>
#include <vector>

#include "tmlab/combinatorics.hpp"
#include "tmlab/potential.hpp"

namespace tmlab {

struct RenormOptions {
  int levelCap = kDefaultLevelCap;
  int maxIterations = 14;
  std::size_t maxLanguage = std::size_t{1} << 16;
};

struct RenormEvaluation {
  Point x;
  int n = 0;
  double value = 0.0;
  std::vector<AccidentRecord> accidentsSeen;  // distance potentials only
};

// (R^n V)(x) = sum_{j < 2^n} V(sigma^j H^n x).
RenormEvaluation renormApply(const Potential& V, const Point& x, int n, const RenormOptions& opt = {});
// n-fold application of V o sigma o H + V o H, for cross-checking.
double renormRecursive(const Potential& V, const Point& x, int n, const RenormOptions& opt = {});
// Level resolution that renormApply needs at x.
std::size_t renormRequiredResolution(const Point& x, int n, const RenormOptions& opt = {});

double cesaroMean(const Potential& V, const Point& x, int n, const RenormOptions& opt = {});

struct PowerScalingRow {
  int n;
  double value;
  double ratio;  // value_n / value_{n-1}; 0 for the first row
};
std::vector<PowerScalingRow> powerScalingCheck(double a, const Point& x, const std::vector<int>& nRange,
                                               const RenormOptions& opt = {});

// Cesaro mean of R^k(g / level) for a cylinder table g.
double weakStableLimit(const CylinderTable& g, const Point& x, int n, const RenormOptions& opt = {});

struct FixedPointReport {
  double residual = 0.0;         // max |R V - V| on the samples
  double identityRho0 = 0.0;     // V(01 rho_0) + V(10 rho_0)
  double identityRho1 = 0.0;     // V(01 rho_1) + V(10 rho_1)
  std::size_t evaluated = 0;
};
FixedPointReport fixedPointResidual(const Potential& V, const std::vector<Point>& samples,
                                    const RenormOptions& opt = {});

struct CesaroRow {
  int n;
  std::string xId;
  int level;
  double value;
};
void writeCesaroCsv(std::ostream& os, const std::vector<CesaroRow>& rows);

}  // namespace tmlab
