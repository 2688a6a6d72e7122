#pragma once

#include <Eigen/Core>
#include <ostream>
#include <vector>

namespace tmlab {

// How depth-N cylinders whose word is a K-factor are valued.  Zero is the
// literal "W vanishes on K" reading; ResolutionFloor assigns the smallest
// value a depth-N cell can resolve, N^{-a}.
enum class KCellRule { Zero, ResolutionFloor };

// Potential on depth-N cylinders.  Each cell carries a left and right node
// value (shared with its dyadic neighbours, hence continuous across every
// boundary) and the cell value used by the transfer action is their mean.
struct ModifiedPotential {
  double a = 0.5;
  int depth = 16;
  KCellRule rule = KCellRule::ResolutionFloor;
  std::vector<int> level;        // longest admissible prefix, depth if K-factor
  std::vector<char> kFactor;     // cell word is a K-factor
  std::vector<double> base;      // level^{-a} (or the K-cell rule)
  std::vector<double> node;      // node[i] = value at the left end of cell i; size 2^N + 1
  Eigen::ArrayXd cell;           // (node[i] + node[i+1]) / 2
  std::vector<char> modified;    // cell value differs from base

  std::size_t cells() const { return std::size_t{1} << depth; }
};

ModifiedPotential buildW(double a, int depth, KCellRule rule = KCellRule::ResolutionFloor);
ModifiedPotential zeroW(int depth);

struct ConformalMeasure {
  int depth = 0;
  Eigen::ArrayXd weights;
  double eigenvalue = 0.0;
  double gamma1 = 0.0;
  int iterations = 0;
  double finalDelta = 0.0;
  bool converged = false;
  double conformalResidual = 0.0;  // max relative |nu(sigma c) - lambda e^{gW} nu(c)|
};

ConformalMeasure conformalMeasure(const ModifiedPotential& W, double gamma1, int maxIterations = 200000,
                                  double tol = 1e-12);

struct SampledMap {
  std::vector<double> t;      // grid point theta at cylinder left ends
  std::vector<double> f;      // f_a(t)
  std::vector<double> slope;  // finite-difference slope over the grid cell
  std::vector<double> w;      // W on the grid cell
  std::vector<double> theta;  // full CDF at depth-N nodes, size 2^N + 1
};
SampledMap buildFa(const ConformalMeasure& nu, const ModifiedPotential& W, std::size_t gridSize);

struct DerivativeReport {
  double maxRelErrInterior = 0.0;  // |slope / e^{g W + P} - 1| on unmodified cells
  double minSlope = 0.0;
  double maxKSlope = 0.0;          // largest slope over K-factor cells
  std::size_t interiorCells = 0;
};
// pressureOffset = 0 for a < 1, log(eigenvalue) for the a > 1 variant.
DerivativeReport derivativeCheck(const ConformalMeasure& nu, const ModifiedPotential& W, double gamma1,
                                 double pressureOffset = 0.0);

void writeMapCsv(std::ostream& os, const SampledMap& m);

}  // namespace tmlab
