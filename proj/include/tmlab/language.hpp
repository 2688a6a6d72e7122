#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tmlab/point.hpp"
#include "tmlab/word.hpp"

namespace tmlab {

inline constexpr int kLevelInfinity = std::numeric_limits<int>::max();
inline constexpr int kDefaultLevelCap = 64;

// Factor language of the Thue-Morse subshift up to maxLen, held as a suffix
// automaton of a rho_0 prefix of length 32*maxLen.  Construction certifies
// that every maxLen-window of the 64*maxLen prefix is already present.
class Language {
 public:
  struct State {
    std::int32_t next[2];
    std::int32_t link;
    std::int32_t len;
  };

  explicit Language(std::size_t maxLen);

  // Shared, lazily built language with maxLen >= minLen (rounded up to a
  // power of two, at least 64).
  static std::shared_ptr<const Language> get(std::size_t minLen);

  std::size_t maxLen() const { return maxLen_; }
  std::size_t generatorLength() const { return generator_.size(); }
  const std::string& generator() const { return generator_; }
  std::uint64_t contentHash() const { return hash_; }

  bool contains(std::string_view w) const;
  bool contains(const FiniteWord& w) const { return contains(w.view()); }
  std::size_t count(std::size_t n) const;
  // Lexicographically sorted factors of length n.
  std::vector<FiniteWord> factors(std::size_t n) const;

  // Matching-statistics step: (state, len) is the longest suffix of the text
  // read so far that occurs in the generator.
  void step(std::int32_t& state, std::int32_t& len, int digit) const;
  const std::vector<State>& states() const { return st_; }

  // Longest admissible prefix of x, or kLevelInfinity when it reaches cap.
  int prefixLevel(const Point& x, int cap) const;
  int prefixLevel(std::string_view w, int cap) const;

  // Levels of positions 0..count-1 of text.  Levels >= cap are reported as
  // kLevelInfinity; a run that reaches the end of text below cap throws
  // insufficient-prefix.
  std::vector<int> levels(std::string_view text, std::size_t count, int cap) const;

 private:
  void extend(int c);

  std::size_t maxLen_;
  std::string generator_;
  std::vector<State> st_;
  std::int32_t last_ = 0;
  std::vector<std::size_t> counts_;
  std::uint64_t hash_ = 0;
};

int admissibleLevel(const Point& x, int cap = kDefaultLevelCap);

}  // namespace tmlab
