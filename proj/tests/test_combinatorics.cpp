#include <random>

#include "doctest.h"
#include "tmlab/combinatorics.hpp"
#include "tmlab/error.hpp"

using namespace tmlab;

namespace {
Point levelPoint(std::mt19937_64& rng, const Language& lang, const std::string& base, int m) {
  std::string w = base.substr(0, static_cast<std::size_t>(m));
  char c = lang.contains(w + "0") ? '1' : '0';
  REQUIRE_FALSE(lang.contains(w + c));
  FiniteWord pre(w + c);
  for (int i = 0; i < 200; ++i) pre.push_back(static_cast<int>(rng() & 1));
  return Point::periodic(pre, FiniteWord(rng() & 1 ? "011" : "1"));
}
}  // namespace

TEST_CASE("factor complexity") {
  auto lang = Language::get(64);
  const std::size_t expect[] = {2, 4, 6, 10, 12, 16, 20, 22, 24, 28, 32, 36};
  for (std::size_t n = 1; n <= 12; ++n) {
    CHECK(factorComplexity(*lang, n) == expect[n - 1]);
    CHECK(complexityFormula(n) == expect[n - 1]);
  }
  for (std::size_t n = 13; n <= 64; ++n) CHECK(factorComplexity(*lang, n) == complexityFormula(n));
}

TEST_CASE("special words") {
  auto lang = Language::get(64);
  auto s3 = specialWords(*lang, 3);
  CHECK(s3.bi == std::vector<FiniteWord>{FiniteWord("010"), FiniteWord("101")});
  // Right-special count is p(n+1) - p(n).
  for (std::size_t n = 1; n < 30; ++n)
    CHECK(specialWords(*lang, n).right.size() == factorComplexity(*lang, n + 1) - factorComplexity(*lang, n));
  CHECK(specialWords(*lang, 8).bi.size() == 2);   // tau_3 shapes only
  CHECK(specialWords(*lang, 5).bi.size() == 0);
  CHECK(isTauShape(tau(3)));
  CHECK(isTauShape(tau(2, true) + tau(2) + tau(2, true)));
  CHECK_FALSE(isTauShape(FiniteWord("0110110")));
}

TEST_CASE("accident scans") {
  CHECK(accidents(Point::thueMorse(FiniteWord(), 0, 3), 100).empty());
  // The all-zero point: levels 2, 2, 2 ... each step is an accident with b = 1.
  auto z = accidents(Point::constant(0), 5);
  REQUIRE(z.size() == 5);
  CHECK(z[0].b == 1);
  CHECK(z[0].dBefore == 2);
  CHECK(accidentsFromLevels({5, 4, 3, 3, 2, 6}).size() == 2);
  auto r = accidentsFromLevels({5, 4, 3, 3, 2, 6});
  CHECK(r[0].time == 3);
  CHECK(r[0].b == 3);
  CHECK(r[1].time == 5);
  CHECK(r[1].b == 2);
  CHECK(r[1].dAfter == 6);
}

TEST_CASE("accident shape: bispecial middle word and gap form hold generically") {
  std::mt19937_64 rng(11);
  auto lang = Language::get(64);
  const std::string& g = lang->generator();
  std::size_t n = 0;
  for (int t = 0; t < 1500; ++t) {
    int m = 8 + static_cast<int>(rng() % 9);
    std::size_t s = rng() % (g.size() - 64);
    std::string base = g.substr(s, 64);
    if (lang->contains(base.substr(0, m) + "0") && lang->contains(base.substr(0, m) + "1")) continue;
    Point x = levelPoint(rng, *lang, base, m);
    for (const auto& rec : accidents(x, 120)) {
      auto sh = accidentShape(x, rec);
      CHECK(sh.bispecial);
      CHECK(sh.gapForm);
      ++n;
    }
  }
  CHECK(n > 1000);
}

TEST_CASE("accident shape: b-bound holds for points starting along rho") {
  std::mt19937_64 rng(5);
  auto lang = Language::get(64);
  int checked = 0;
  for (int t = 0; t < 800; ++t) {
    int m = 8 + static_cast<int>(rng() % 9);
    std::string base = fixedPointPrefix(static_cast<int>(rng() & 1), 64).str();
    if (lang->contains(base.substr(0, m) + "0") && lang->contains(base.substr(0, m) + "1")) continue;
    Point x = levelPoint(rng, *lang, base, m);
    auto recs = accidents(x, 64);
    if (recs.empty() || recs[0].b >= recs[0].dBefore) continue;
    auto sh = accidentShape(x, recs[0]);
    CHECK(sh.bBound);
    CHECK(sh.bispecial);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("disjoint decomposition") {
  CHECK(disjointDecompositionCheck(1, 16));
  CHECK(disjointDecompositionCheck(3, 64));
  CHECK_FALSE(disjointDecompositionCheck(1, 8, true));
  CHECK_THROWS_AS(disjointDecompositionCheck(7, 8), Error);
}

TEST_CASE("overlap bound") {
  CHECK(overlapBound(2) <= 2);
  CHECK(overlapBound(3) <= 4);
  CHECK(overlapBound(4) == 8);  // scan value; the bound 2^{k-1} is attained
}

TEST_CASE("sigma o H orbits converge to a rho_b / a-bar rho_b") {
  for (const char* w : {"00", "01", "10", "11"}) {
    Point x = Point::periodic(FiniteWord(w), FiniteWord("1101"));
    std::size_t prev = 0;
    for (int n = 1; n <= 10; ++n) {
      auto agree = sigmaHAgreement(x, n, 4096);
      CHECK(agree >= prev);
      prev = agree;
    }
    CHECK(prev >= 512);
  }
}
