#include <cmath>
#include <sstream>

#include "doctest.h"
#include "tmlab/error.hpp"
#include "tmlab/interval_map.hpp"

using namespace tmlab;

TEST_CASE("zero potential gives the doubling map") {
  auto W = zeroW(8);
  auto nu = conformalMeasure(W, 1.0);
  CHECK(nu.converged);
  CHECK(nu.eigenvalue == 2.0);
  for (Eigen::Index i = 0; i < nu.weights.size(); ++i) CHECK(nu.weights[i] == std::ldexp(1.0, -8));
  auto m = buildFa(nu, W, 256);
  for (std::size_t i = 0; i < m.t.size(); ++i) {
    CHECK(m.f[i] == std::fmod(2.0 * m.t[i], 1.0));
    CHECK(m.slope[i] == 2.0);
  }
}

TEST_CASE("modified potential") {
  auto W = buildW(0.5, 10);
  REQUIRE(W.node.size() == W.cells() + 1);
  REQUIRE(static_cast<std::size_t>(W.cell.size()) == W.cells());
  for (std::size_t i = 0; i < W.cells(); ++i) {
    CHECK(W.cell[static_cast<Eigen::Index>(i)] == doctest::Approx(0.5 * (W.node[i] + W.node[i + 1])));
    CHECK(W.cell[static_cast<Eigen::Index>(i)] >= 0.0);
    CHECK(W.level[i] >= 2);
    if (!W.kFactor[i]) CHECK(W.base[i] == doctest::Approx(std::pow(W.level[i], -0.5)));
  }
  // 000 cells sit at level 2.
  CHECK(W.level[0] == 2);
  CHECK_FALSE(W.kFactor[0]);
  auto Z = buildW(0.5, 10, KCellRule::Zero);
  for (std::size_t i = 0; i < Z.cells(); ++i)
    if (Z.kFactor[i]) CHECK(Z.base[i] == 0.0);
  CHECK_THROWS_AS(buildW(0.5, 25), Error);
  CHECK_THROWS_AS(buildW(0.0, 8), Error);
}

TEST_CASE("conformal measure at a < 1") {
  auto W = buildW(0.5, 12);
  auto nu = conformalMeasure(W, 1.441064);
  CHECK(nu.converged);
  CHECK(nu.conformalResidual <= 1e-10);
  CHECK(nu.weights.sum() == doctest::Approx(1.0));
  CHECK((nu.weights > 0).all());
  CHECK(nu.eigenvalue == doctest::Approx(1.0).epsilon(5e-3));
  // Eigenvalue is decreasing in gamma.
  CHECK(conformalMeasure(W, 2.0).eigenvalue < nu.eigenvalue);

  auto m = buildFa(nu, W, 1024);
  // Two increasing branches, each mapping onto [0, 1).
  for (std::size_t i = 1; i < m.t.size(); ++i) {
    CHECK(m.t[i] > m.t[i - 1]);
    if (m.t[i] < 0.5 || m.t[i - 1] >= 0.5) CHECK(m.f[i] >= m.f[i - 1]);
  }
  CHECK(m.theta.front() == 0.0);
  CHECK(m.theta.back() == doctest::Approx(1.0));
  auto dr = derivativeCheck(nu, W, 1.441064);
  CHECK(dr.interiorCells > 0);
  CHECK(dr.minSlope > 1.0);

  std::ostringstream os;
  writeMapCsv(os, m);
  CHECK(os.str().rfind("t,", 0) == 0);
}
