#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace tmlab {

// Binary word stored as a string of '0'/'1' characters.  Keeping the
// character form makes hashing, printing and suffix-automaton input trivial.
class FiniteWord {
 public:
  FiniteWord() = default;
  explicit FiniteWord(std::string_view bits);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  int operator[](std::size_t i) const { return bits_[i] - '0'; }
  const std::string& str() const { return bits_; }
  std::string_view view() const { return bits_; }

  FiniteWord substr(std::size_t pos, std::size_t len = std::string::npos) const;
  FiniteWord flipped() const;
  void push_back(int d) { bits_.push_back(d ? '1' : '0'); }
  void reserve(std::size_t n) { bits_.reserve(n); }
  bool isPrefixOf(const FiniteWord& other) const;
  int ones() const;

  FiniteWord& operator+=(const FiniteWord& o) {
    bits_ += o.bits_;
    return *this;
  }
  friend FiniteWord operator+(FiniteWord a, const FiniteWord& b) { return a += b; }
  auto operator<=>(const FiniteWord&) const = default;

 private:
  std::string bits_;
};

struct Substitution {
  FiniteWord image0;
  FiniteWord image1;

  Substitution(FiniteWord i0, FiniteWord i1);
  const FiniteWord& image(int d) const { return d ? image1 : image0; }
  bool isThueMorse() const;

  static Substitution thueMorse();   // 0 -> 01, 1 -> 10
  static Substitution feigenbaum();  // 0 -> 11, 1 -> 10
};

inline constexpr std::size_t kDefaultWordCap = std::size_t{1} << 26;

FiniteWord substitutionApply(const Substitution& s, const FiniteWord& w, int iterations,
                             std::size_t cap = kDefaultWordCap);

// Digit i of rho_0 is the parity of popcount(i); rho_1 is its flip.
inline int thueMorseDigit(std::uint64_t i, int seed = 0) {
  return (__builtin_popcountll(i) & 1) ^ (seed & 1);
}

FiniteWord fixedPointPrefix(int seed, std::size_t length);

// tau_k = H^k(0); bar = true gives H^k(1).
FiniteWord tau(int k, bool bar = false);

}  // namespace tmlab
