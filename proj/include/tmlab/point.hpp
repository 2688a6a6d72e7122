#pragma once

#include <cstdint>

#include "tmlab/word.hpp"

namespace tmlab {

// A point of the full shift: a finite prefix followed by a tail rule.  The
// tail is either a periodic word or a shifted Thue-Morse fixed point
// sigma^offset(rho_seed); the latter is needed to name points such as
// 1 rho_0 exactly.
class Point {
 public:
  enum class TailKind { Periodic, ThueMorse };

  Point();  // 0^infinity
  static Point periodic(FiniteWord prefix, FiniteWord tail);
  static Point thueMorse(FiniteWord prefix, int seed, std::uint64_t offset = 0);
  static Point constant(int d) { return periodic(FiniteWord(), FiniteWord(d ? "1" : "0")); }

  int digit(std::uint64_t i) const;
  FiniteWord take(std::size_t n) const;
  Point shift(std::uint64_t j) const;
  Point flipped() const;
  // Only the Thue-Morse substitution acts on Thue-Morse tails.
  Point substitute(const Substitution& s, int n) const;

  const FiniteWord& prefix() const { return prefix_; }
  TailKind tailKind() const { return kind_; }
  const FiniteWord& tail() const { return tail_; }
  int tailSeed() const { return seed_; }
  std::uint64_t tailOffset() const { return offset_; }
  std::string describe() const;

 private:
  FiniteWord prefix_;
  TailKind kind_ = TailKind::Periodic;
  FiniteWord tail_;
  int seed_ = 0;
  std::uint64_t offset_ = 0;
};

}  // namespace tmlab
