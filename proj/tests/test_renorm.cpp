#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "tmlab/error.hpp"
#include "tmlab/renorm.hpp"

using namespace tmlab;

namespace {
// A point of level m: a generator window of length m followed by the digit
// that leaves the language, then noise.
Point levelPoint(std::mt19937_64& rng, const Language& lang, int m) {
  const std::string& g = lang.generator();
  for (;;) {
    std::string w = g.substr(rng() % (g.size() - 64), static_cast<std::size_t>(m));
    bool in0 = lang.contains(w + "0"), in1 = lang.contains(w + "1");
    if (in0 && in1) continue;
    FiniteWord pre(w + (in0 ? "1" : "0"));
    for (int i = 0; i < 64; ++i) pre.push_back(static_cast<int>(rng() & 1));
    return Point::periodic(pre, FiniteWord(rng() & 1 ? "1" : "01"));
  }
}
}  // namespace

TEST_CASE("single renormalization step of V_0") {
  // (R V)(x) = V(sigma H x) + V(H x); levels of H x and sigma H x are 2m and 2m - 1.
  auto lang = Language::get(64);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 40; ++t) {
    int m = 3 + static_cast<int>(rng() % 20);
    Point x = levelPoint(rng, *lang, m);
    REQUIRE(admissibleLevel(x) == m);
    double v = renormApply(DistancePower{1.0}, x, 1).value;
    CHECK(v == doctest::Approx(1.0 / (2 * m) + 1.0 / (2 * m - 1)));
  }
}

TEST_CASE("renormApply and renormRecursive agree") {
  std::mt19937_64 rng(9);
  auto lang = Language::get(64);
  const Potential pots[] = {DistancePower{0.5}, DistancePower{2.0, 1.0, 3.0}, CylinderUc{1.25},
                            CylinderTable{2, {0.5, -1.0, 2.0, 0.25}}};
  for (const auto& V : pots)
    for (int t = 0; t < 6; ++t) {
      Point x = levelPoint(rng, *lang, 4 + static_cast<int>(rng() % 8));
      for (int n = 0; n <= 5; ++n)
        CHECK(renormApply(V, x, n).value == doctest::Approx(renormRecursive(V, x, n)).epsilon(1e-12));
    }
  CHECK_THROWS_AS(renormApply(DistancePower{}, Point::constant(0), 40), Error);
}

TEST_CASE("fixed points") {
  std::mt19937_64 rng(10);
  std::vector<Point> xs;
  for (int i = 0; i < 200; ++i) {
    FiniteWord w;
    for (int j = 0; j < 12; ++j) w.push_back(static_cast<int>(rng() & 1));
    xs.push_back(Point::periodic(w, FiniteWord(rng() & 1 ? "0" : "011")));
  }
  auto r = fixedPointResidual(CylinderUc{2.0}, xs);
  CHECK(r.residual == 0.0);
  CHECK(r.evaluated == 200);
  CHECK(r.identityRho0 == 0.0);
  // V_0 is not fixed: R V_0 - V_0 = 1/(2m(2m-1)) at level m.
  CHECK(fixedPointResidual(DistancePower{1.0}, xs).residual > 0.0);
  // V_u is fixed away from the constant points, where R V - V = -alpha.
  std::vector<Point> ys;
  for (const auto& x : xs)
    if (x.take(40) != FiniteWord(std::string(40, x.digit(0) ? '1' : '0'))) ys.push_back(x);
  CHECK(fixedPointResidual(UnboundedVu{-1.5}, ys).residual == 0.0);
  CHECK(fixedPointResidual(UnboundedVu{-1.5}, {Point::constant(1)}).residual == doctest::Approx(1.5));
}

TEST_CASE("Cesaro means of V_0") {
  auto lang = Language::get(64);
  std::mt19937_64 rng(12);
  for (int m = 3; m <= 10; ++m) {
    Point x = levelPoint(rng, *lang, m);
    double c10 = cesaroMean(DistancePower{1.0}, x, 10);
    double c12 = cesaroMean(DistancePower{1.0}, x, 12);
    CHECK(c12 >= 1.0 / (2.0 * m) * 0.9);
    CHECK(c12 <= 1.0 / (m - 1.0) * 1.1);
    CHECK(std::abs(c12 - c10) < 0.15 / m);
  }
  CHECK_THROWS_AS(cesaroMean(DistancePower{}, Point::constant(0), 0), Error);
  std::ostringstream os;
  writeCesaroCsv(os, {{3, "x0", 4, 0.2}});
  CHECK(os.str().rfind("n,x_id,value,lower_bound,upper_bound\r\n3,x0,", 0) == 0);
}

TEST_CASE("power scaling ratio 2^{1-a}") {
  auto lang = Language::get(64);
  std::mt19937_64 rng(13);
  Point x = levelPoint(rng, *lang, 6);
  for (double a : {0.5, 1.5, 2.0}) {
    auto rows = powerScalingCheck(a, x, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    REQUIRE(rows.size() == 10);
    CHECK(rows[0].ratio == 0.0);
    CHECK(rows.back().ratio == doctest::Approx(std::exp2(1.0 - a)).epsilon(0.02));
  }
  // 1/m^2: R^n V decays like 2^{-n}.
  auto rows = powerScalingCheck(2.0, x, {8, 9, 10, 11});
  CHECK(rows.back().value < rows.front().value / 4);
}

TEST_CASE("weak stable limit") {
  auto lang = Language::get(64);
  std::mt19937_64 rng(14);
  Point x = levelPoint(rng, *lang, 5);
  // g = 1: the Cesaro mean of R^k(1/level).
  double one = weakStableLimit(CylinderTable{1, {1.0, 1.0}}, x, 10);
  double ind = weakStableLimit(CylinderTable{1, {1.0, 0.0}}, x, 10);
  CHECK(one > 0.0);
  // The indicator of [0] has mu_K-mass 1/2.
  CHECK(ind / one == doctest::Approx(0.5).epsilon(0.05));
}
