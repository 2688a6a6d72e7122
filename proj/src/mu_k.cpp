#include "tmlab/mu_k.hpp"

#include <cmath>

#include "tmlab/error.hpp"

namespace tmlab {

namespace {

// Prefix sums of window counts, indexed by the depth-D window value.
std::vector<std::uint32_t> windowPrefix(int D, std::size_t len, std::uint64_t& total) {
  const std::size_t cells = std::size_t{1} << D;
  std::vector<std::uint32_t> cnt(cells + 1, 0);
  std::uint64_t w = 0;
  const std::uint64_t mask = cells - 1;
  for (std::size_t i = 0; i < len; ++i) {
    w = ((w << 1) | static_cast<std::uint64_t>(thueMorseDigit(i))) & mask;
    if (i + 1 >= static_cast<std::size_t>(D)) ++cnt[w + 1];
  }
  for (std::size_t i = 1; i <= cells; ++i) cnt[i] += cnt[i - 1];
  total = len - static_cast<std::size_t>(D) + 1;
  return cnt;
}

}  // namespace

MuK::MuK(int depth, std::size_t generatorLength) : depth_(depth) {
  if (depth < 1 || depth > 24) throw Error(Errc::OutOfRange, "MuK depth outside [1,24]");
  if (generatorLength < 2 * (std::size_t{1} << depth)) throw Error(Errc::InvalidArgument, "generator too short");
  prefixFull_ = windowPrefix(depth, generatorLength, totalFull_);
  prefixHalf_ = windowPrefix(depth, generatorLength / 2, totalHalf_);
}

double MuK::freq(const std::vector<std::uint32_t>& pre, std::uint64_t total, const FiniteWord& w) const {
  if (static_cast<int>(w.size()) > depth_) throw Error(Errc::OutOfRange, "cylinder deeper than table");
  std::size_t lo = 0;
  for (std::size_t i = 0; i < w.size(); ++i) lo = (lo << 1) | static_cast<std::size_t>(w[i]);
  const int rest = depth_ - static_cast<int>(w.size());
  lo <<= rest;
  std::size_t hi = lo + (std::size_t{1} << rest);
  return static_cast<double>(pre[hi] - pre[lo]) / static_cast<double>(total);
}

double MuK::cylinder(const FiniteWord& w) const {
  double f = freq(prefixFull_, totalFull_, w);
  return f;  // non-factors have no window and hence mass exactly 0
}

double MuK::uncertainty(const FiniteWord& w) const {
  return std::abs(freq(prefixFull_, totalFull_, w) - freq(prefixHalf_, totalHalf_, w));
}

double MuK::sigmaHFamily(int k) { return std::ldexp(1.0, -k); }

Integral integralMuK(const Potential& V, const MuK& mu, int vuTerms) {
  return std::visit(
      [&](const auto& v) -> Integral {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, DistancePower>) {
          return {0.0, 0.0};  // V vanishes on K
        } else if constexpr (std::is_same_v<T, CylinderUc>) {
          double d = mu.cylinder(FiniteWord("01")) - mu.cylinder(FiniteWord("10"));
          double u = mu.uncertainty(FiniteWord("01")) + mu.uncertainty(FiniteWord("10"));
          return {v.c * d, std::abs(v.c) * u};
        } else if constexpr (std::is_same_v<T, UnboundedVu>) {
          // mu_K of depth exactly k is 2^{-k} - 2^{-(k+1)} = 2^{-(k+1)}.
          std::vector<double> terms;
          for (int k = 0; k < vuTerms; ++k) terms.push_back(v.atDepth(k) * std::ldexp(1.0, -(k + 1)));
          // |sum_{k>=K} (k-1) 2^{-(k+1)}| = K 2^{-K}.
          double tail = std::abs(v.alpha) * vuTerms * std::ldexp(1.0, -vuTerms);
          return {pairwiseSum(terms), tail};
        } else {
          if (v.depth > mu.depth()) throw Error(Errc::OutOfRange, "table deeper than MuK");
          std::vector<double> terms(v.values.size());
          double unc = 0.0;
          for (std::size_t i = 0; i < v.values.size(); ++i) {
            FiniteWord w;
            for (int b = v.depth - 1; b >= 0; --b) w.push_back(static_cast<int>((i >> b) & 1));
            terms[i] = v.values[i] * mu.cylinder(w);
            unc += std::abs(v.values[i]) * mu.uncertainty(w);
          }
          return {pairwiseSum(terms), unc};
        }
      },
      V);
}

}  // namespace tmlab
