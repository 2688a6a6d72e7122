#pragma once

#include <cstdint>
#include <vector>

#include "tmlab/potential.hpp"

namespace tmlab {

// Empirical cylinder frequencies of the unique invariant measure on K.
class MuK {
 public:
  explicit MuK(int depth = 20, std::size_t generatorLength = std::size_t{1} << 22);

  int depth() const { return depth_; }
  double cylinder(const FiniteWord& w) const;
  // Frequency change between the full generator and its first half.
  double uncertainty(const FiniteWord& w) const;
  // mu_K((sigma H)^k(Sigma)), exact.
  static double sigmaHFamily(int k);

 private:
  double freq(const std::vector<std::uint32_t>& pre, std::uint64_t total, const FiniteWord& w) const;

  int depth_;
  std::vector<std::uint32_t> prefixFull_, prefixHalf_;
  std::uint64_t totalFull_ = 0, totalHalf_ = 0;
};

struct Integral {
  double value = 0.0;
  double tailBound = 0.0;
};

Integral integralMuK(const Potential& V, const MuK& mu, int vuTerms = 50);

}  // namespace tmlab
