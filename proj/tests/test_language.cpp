#include <random>
#include <set>

#include "doctest.h"
#include "tmlab/error.hpp"
#include "tmlab/language.hpp"
#include "tmlab/point.hpp"

using namespace tmlab;

namespace {
// Oracle: windows of a long rho_0 prefix (closed under flip by symmetry).
std::set<std::string> windows(std::size_t n) {
  const std::string t = fixedPointPrefix(0, 1 << 13).str();
  std::set<std::string> s;
  for (std::size_t i = 0; i + n <= t.size(); ++i) s.insert(t.substr(i, n));
  return s;
}
}  // namespace

TEST_CASE("membership matches the window oracle") {
  auto lang = Language::get(16);
  CHECK(lang->maxLen() >= 64);
  for (std::size_t n = 1; n <= 12; ++n) {
    auto w = windows(n);
    CHECK(lang->count(n) == w.size());
    auto f = lang->factors(n);
    REQUIRE(f.size() == w.size());
    std::size_t i = 0;
    for (const auto& s : w) CHECK(f[i++].str() == s);  // lexicographic
  }
  CHECK(lang->contains("00"));
  CHECK_FALSE(lang->contains("000"));
  CHECK_FALSE(lang->contains("0110110"));  // overlap-free: no xwxwx
  CHECK_THROWS_AS(lang->contains(std::string(lang->maxLen() + 1, '0')), Error);
}

TEST_CASE("language cache shares instances") {
  auto a = Language::get(100), b = Language::get(128);
  CHECK(a.get() == b.get());
  CHECK(a->maxLen() == 128);
  CHECK(a->contentHash() == Language(128).contentHash());
  CHECK(a->contentHash() != Language::get(256)->contentHash());
}

TEST_CASE("admissible levels") {
  CHECK(admissibleLevel(Point::constant(0)) == 2);
  // (01)^inf: 0101 is a factor, 01010 is not (it is an overlap).
  CHECK(admissibleLevel(Point::periodic(FiniteWord(), FiniteWord("01"))) == 4);
  CHECK(admissibleLevel(Point::periodic(fixedPointPrefix(0, 40), FiniteWord("1")), 30) == kLevelInfinity);
  CHECK(admissibleLevel(Point::thueMorse(FiniteWord(), 1, 77)) == kLevelInfinity);
  CHECK(admissibleLevel(Point::periodic(FiniteWord("0110100110"), FiniteWord("0"))) == 11);
}

TEST_CASE("level scan equals per-position prefix levels") {
  auto lang = Language::get(64);
  std::mt19937_64 rng(3);
  const std::string rho = fixedPointPrefix(0, 4096).str();
  for (int t = 0; t < 20; ++t) {
    // Stretches of rho separated by noise.
    std::string text;
    while (text.size() < 600) {
      std::size_t s = rng() % 3000, len = 5 + rng() % 60;
      text += rho.substr(s, len);
      text += static_cast<char>('0' + (rng() & 1));
    }
    auto lv = lang->levels(text, 400, 64);
    for (std::size_t i = 0; i < 400; ++i) CHECK(lv[i] == lang->prefixLevel(std::string_view(text).substr(i), 64));
  }
}

TEST_CASE("level scan refuses short text") {
  auto lang = Language::get(64);
  std::string text = fixedPointPrefix(0, 50).str();
  CHECK_THROWS_AS(lang->levels(text, 10, 64), Error);
  try {
    lang->levels(text, 10, 64);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InsufficientPrefix);
  }
}
