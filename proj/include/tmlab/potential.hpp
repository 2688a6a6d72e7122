#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "json.hpp"

#include "tmlab/language.hpp"

namespace tmlab {

// V = m^{-a} at level m, plus an optional perturbation of smaller order.
// The perturbation is coeff * m^{-power}; power > a is the decay certificate
// (perturbation(m) * m^a -> 0).
struct DistancePower {
  double a = 1.0;
  double perturbCoeff = 0.0;
  double perturbPower = 0.0;
  double atLevel(int m) const;
};

struct CylinderUc {
  double c = 0.0;
};

enum class VuSign { AlphaKMinusOne, AlphaOneMinusK };

// Constant alpha(k-1) on (sigma H)^k(Sigma) \ (sigma H)^{k+1}(Sigma).
struct UnboundedVu {
  double alpha = -1.0;
  int kMax = 30;
  VuSign sign = VuSign::AlphaKMinusOne;
  double atDepth(int k) const { return sign == VuSign::AlphaKMinusOne ? alpha * (k - 1) : alpha * (1 - k); }
};

// Values on depth-N cylinders, cell index = the N digits read as a binary
// number with x_0 most significant.
struct CylinderTable {
  int depth = 1;
  std::vector<double> values;
};

using Potential = std::variant<DistancePower, CylinderUc, UnboundedVu, CylinderTable>;

// Largest k with x in (sigma H)^k(Sigma): every 2^k-block of sigma x is
// tau_k or bar tau_k.  Throws UndefinedPoint on sigma^{-1}{rho_0, rho_1}.
int vuDepth(const Point& x, int kMax = 30);
// Largest k with x_1..x_{2^k} a rho prefix.  Only a necessary condition for
// depth k (first block only); kept for comparison.
int vuPrefixDepth(const Point& x, int kMax = 30);
double evalPotential(const Potential& V, const Point& x, int levelCap = kDefaultLevelCap);
// V(sigma^j x) for j < n, evaluated in one pass.
std::vector<double> orbitValues(const Potential& V, const Point& x, std::uint64_t n, int levelCap = kDefaultLevelCap);
double birkhoffSum(const Potential& V, const Point& x, std::uint64_t n, int levelCap = kDefaultLevelCap);

// Fixed-order pairwise summation, bit-stable for a given input order.
double pairwiseSum(const double* v, std::size_t n);
inline double pairwiseSum(const std::vector<double>& v) { return pairwiseSum(v.data(), v.size()); }

nlohmann::json potentialToJson(const Potential& V);
Potential potentialFromJson(const nlohmann::json& j);
std::string potentialName(const Potential& V);

}  // namespace tmlab
