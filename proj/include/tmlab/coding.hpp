#pragma once

#include <compare>

#include "tmlab/point.hpp"

namespace tmlab {

// pi(x)_k = 1 iff x_k != x_{k+1}; a word of length n maps to length n-1.
FiniteWord slidingBlockPi(const FiniteWord& w);
// Periodic tails only (pi of a Thue-Morse tail is not Thue-Morse).
Point slidingBlockPi(const Point& x);

// Parity-lexicographic order: compare at the first disagreement, reversed
// when the common prefix holds an odd number of 1s.
std::strong_ordering parityLexCompare(const FiniteWord& x, const FiniteWord& y);
std::strong_ordering lexCompare(const FiniteWord& x, const FiniteWord& y);

}  // namespace tmlab
