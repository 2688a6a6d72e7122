#include <cmath>
#include <random>

#include "doctest.h"
#include "tmlab/error.hpp"
#include "tmlab/mu_k.hpp"
#include "tmlab/potential.hpp"

using namespace tmlab;

namespace {
int ctz(std::uint64_t u) { return __builtin_ctzll(u); }

// Brute-force set-reading depth on a window of sigma x.
int blockDepthOracle(const Point& x, int kCap, std::uint64_t window) {
  FiniteWord y = x.shift(1).take(window);
  int k = 0;
  for (int j = 1; j <= kCap; ++j) {
    std::size_t B = std::size_t{1} << j;
    for (std::size_t q = 0; q + B <= y.size(); q += B) {
      FiniteWord blk = y.substr(q, B);
      if (blk != tau(j) && blk != tau(j, true)) return k;
    }
    k = j;
  }
  return k;
}
}  // namespace

TEST_CASE("distance power and cylinder potentials") {
  DistancePower d{2.0, 0.0, 0.0};
  CHECK(d.atLevel(4) == doctest::Approx(1.0 / 16));
  Potential V = d;
  // Level of 0^inf is 2.
  CHECK(evalPotential(V, Point::constant(0)) == doctest::Approx(0.25));
  CHECK(evalPotential(V, Point::thueMorse(FiniteWord(), 0)) == 0.0);
  DistancePower p{1.0, 3.0, 2.0};
  CHECK(p.atLevel(3) == doctest::Approx(1.0 / 3 + 3.0 / 9));

  Potential U = CylinderUc{1.5};
  CHECK(evalPotential(U, Point::periodic(FiniteWord("01"), FiniteWord("0"))) == 1.5);
  CHECK(evalPotential(U, Point::periodic(FiniteWord("10"), FiniteWord("0"))) == -1.5);
  CHECK(evalPotential(U, Point::periodic(FiniteWord("11"), FiniteWord("0"))) == 0.0);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    FiniteWord w;
    for (int i = 0; i < 6; ++i) w.push_back(static_cast<int>(rng() & 1));
    Point x = Point::periodic(w, FiniteWord("1"));
    CHECK(evalPotential(U, x) == -evalPotential(U, x.flipped()));
  }

  Potential T = CylinderTable{2, {0.0, 1.0, 2.0, 3.0}};
  CHECK(evalPotential(T, Point::periodic(FiniteWord("10"), FiniteWord("0"))) == 2.0);
  CHECK(birkhoffSum(T, Point::periodic(FiniteWord(), FiniteWord("011")), 3) == doctest::Approx(1 + 3 + 2));
}

TEST_CASE("V_u along the orbit of rho_0 follows the ruler sequence") {
  // x = sigma^n rho_0: sigma x = sigma^{n+1} rho_0 is cut into tau_k blocks
  // exactly for k <= v, the 2-adic valuation of n+1.
  Potential V = UnboundedVu{-1.0, 30, VuSign::AlphaKMinusOne};
  const double table[] = {1, 0, 1, -1, 1, 0, 1, -2, 1, 0, 1, -1, 1, 0, 1, -3};
  for (std::uint64_t n = 0; n < 16; ++n)
    CHECK(evalPotential(V, Point::thueMorse(FiniteWord(), 0, n)) == table[n]);
  for (std::uint64_t n = 0; n < 3000; ++n) {
    Point x = Point::thueMorse(FiniteWord(), 0, n);
    CHECK(vuDepth(x) == ctz(n + 1));
    CHECK(vuPrefixDepth(x) >= ctz(n + 1));
  }
  // Over a full block the valuations sum to 2^k - 1, so S_{2^k} V = 1.
  for (int k = 1; k <= 8; ++k) {
    CHECK(birkhoffSum(V, Point::thueMorse(FiniteWord(), 0), 1u << k) == 1.0);
  }
  UnboundedVu flip{2.0, 30, VuSign::AlphaOneMinusK};
  CHECK(flip.atDepth(3) == -4.0);
}

TEST_CASE("V_u depth readings") {
  // sigma x = 1 1 0 ...: first block already fails -> depth 0.
  CHECK(vuDepth(Point::periodic(FiniteWord("011"), FiniteWord("0"))) == 0);
  // sigma x = 1001 1 ...: cylinder reading sees tau_2(1) once.
  Point x = Point::periodic(FiniteWord("010011"), FiniteWord("1"));
  CHECK(vuPrefixDepth(x) == 2);
  // Depth needs every block; "11" breaks it already at k = 1.
  CHECK(vuDepth(x) == 0);
  CHECK_THROWS_AS(vuDepth(Point::thueMorse(FiniteWord("1"), 0)), Error);
  CHECK_THROWS_AS(vuPrefixDepth(Point::thueMorse(FiniteWord("0"), 1)), Error);
  try {
    vuDepth(Point::thueMorse(FiniteWord("0"), 1));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UndefinedPoint);
  }
  CHECK_THROWS_AS(vuDepth(Point::constant(0), 0), Error);
  // Off K the shifts of the depth-k set overlap: half of the orbit of
  // (0011)^inf has depth 2, so its orbit measure gives it mass 1/2 > 1/4.
  int deep = 0;
  for (const char* p : {"0011", "0110", "1100", "1001"})
    deep += vuDepth(Point::periodic(FiniteWord(), FiniteWord(p))) >= 2;
  CHECK(deep == 2);
}

TEST_CASE("orbit depth agrees with a brute-force block oracle") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    int j = static_cast<int>(rng() % 5);
    FiniteWord body;
    int blocks = 1 + static_cast<int>(rng() % 6);
    for (int b = 0; b < blocks; ++b) body += tau(j, rng() & 1);
    FiniteWord per;
    int pblocks = 1 + static_cast<int>(rng() % 4);
    for (int b = 0; b < pblocks; ++b) per += tau(j, rng() & 1);
    FiniteWord pre(rng() & 1 ? "1" : "0");
    pre += body;
    Point x = Point::periodic(pre, per);
    CHECK(vuDepth(x) == blockDepthOracle(x, 9, 4096));
    CHECK(vuDepth(x) <= vuPrefixDepth(x));
  }
}

TEST_CASE("pairwise sum and JSON round trip") {
  std::vector<double> v(1000, 0.1);
  CHECK(pairwiseSum(v) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(pairwiseSum(nullptr, 0) == 0.0);
  const Potential all[] = {DistancePower{0.5, 1.0, 2.0}, CylinderUc{-0.75}, UnboundedVu{-1.0, 20, VuSign::AlphaOneMinusK},
                           CylinderTable{1, {3.0, 4.0}}};
  for (const auto& V : all) {
    auto j = potentialToJson(V);
    CHECK(potentialToJson(potentialFromJson(j)) == j);
  }
  CHECK(potentialName(all[2]) == "vu");
  CHECK_THROWS_AS(potentialFromJson(nlohmann::json{{"type", "nope"}}), Error);
  CHECK_THROWS_AS(potentialFromJson(nlohmann::json{{"type", "cylinder_table"}, {"depth", 2}, {"values", {1.0}}}),
                  Error);
}

TEST_CASE("invariant measure on K") {
  MuK mu(12, 1 << 16);
  CHECK(mu.cylinder(FiniteWord("0")) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(mu.cylinder(FiniteWord("000")) == 0.0);
  CHECK(mu.cylinder(FiniteWord("010")) == doctest::Approx(1.0 / 6).epsilon(1e-3));
  CHECK(mu.uncertainty(FiniteWord("0110")) < 1e-3);
  CHECK(MuK::sigmaHFamily(3) == 0.125);
  CHECK(integralMuK(CylinderUc{2.0}, mu).value == doctest::Approx(0.0).epsilon(1e-4));
  auto iv = integralMuK(UnboundedVu{-1.0}, mu);
  CHECK(std::abs(iv.value) < 1e-12);
  CHECK(iv.tailBound < 1e-12);
  CHECK(integralMuK(DistancePower{}, mu).value == 0.0);
}
