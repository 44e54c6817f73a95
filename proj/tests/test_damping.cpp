#include "doctest.h"

#include <cmath>

#include "pmlwave/damping.hpp"
#include "pmlwave/errors.hpp"
#include "pmlwave/grid.hpp"

using namespace pmlwave;

TEST_SUITE("damping") {

TEST_CASE("ramp frozen values") {
  CHECK(eval_zeta(0.525, 0.5, 0.1, 80.0) == 7.26760455264839);
  CHECK(eval_zeta(0.55, 0.5, 0.1, 80.0) == 40.00000000000007);
  CHECK(eval_zeta(0.6, 0.5, 0.1, 80.0) == 80.0);
  CHECK(eval_zeta(10.0, 0.5, 0.1, 80.0) == 80.0); // clamped past the edge
}

TEST_CASE("zero inside the interior") {
  CHECK(eval_zeta(0.0, 0.5, 0.1, 80.0) == 0.0);
  CHECK(eval_zeta(0.5, 0.5, 0.1, 80.0) == 0.0);
  CHECK(eval_zeta(-0.3, 0.5, 0.1, 80.0) == 0.0);
}

TEST_CASE("even in x") {
  CHECK(eval_zeta(-0.525, 0.5, 0.1, 80.0) == eval_zeta(0.525, 0.5, 0.1, 80.0));
  CHECK(eval_zeta(-0.58, 0.5, 0.1, 80.0) == eval_zeta(0.58, 0.5, 0.1, 80.0));
}

TEST_CASE("cubic liftoff at the interface") {
  // zeta ~ zeta_bar*(2 pi)^2 s^3/6 near s = 0, so halving the depth
  // divides the value by ~8
  double z1 = eval_zeta(0.5 + 0.002, 0.5, 0.1, 80.0);
  double z2 = eval_zeta(0.5 + 0.001, 0.5, 0.1, 80.0);
  CHECK(z1 / z2 == doctest::Approx(8.0).epsilon(0.02));
  CHECK(eval_zeta(0.501, 0.5, 0.1, 80.0) < 0.01 * 80.0);
}

TEST_CASE("monotone across the layer") {
  double prev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    double z = eval_zeta(0.5 + 0.1 * i / 20.0, 0.5, 0.1, 80.0);
    CHECK(z >= prev);
    prev = z;
  }
  CHECK(prev == 80.0);
}

TEST_CASE("strength from target reflection") {
  CHECK(zeta_bar_from_reflection(1e-3, 1.0, 0.1) == 69.07755278982137);
  CHECK(zeta_bar_from_reflection(1.0, 1.0, 0.1) == 0.0);
  CHECK_THROWS_AS(zeta_bar_from_reflection(0.0, 1.0, 0.1), ConfigError);
  CHECK_THROWS_AS(zeta_bar_from_reflection(1.5, 1.0, 0.1), ConfigError);
  CHECK_THROWS_AS(zeta_bar_from_reflection(1e-3, 1.0, 0.0), ConfigError);
}

TEST_CASE("sampled profile: interior exactly zero, classes match the layer") {
  GridSpec g = build_grid(2, {0.5, 0.5}, {0.1, 0.1}, {0.01, 0.01});
  DampingProfile p = sample_profile(g, {80.0, 80.0, 0.0});
  CHECK_FALSE(p.all_zero());

  for (int m = 0; m < 2; ++m) {
    REQUIRE(static_cast<int>(p.at_nodes[m].size()) == g.n[m]);
    REQUIRE(static_cast<int>(p.at_cells[m].size()) == g.n[m] - 1);
    for (int l = g.interior_lo(m); l <= g.interior_hi(m); ++l)
      CHECK(p.at_nodes[m][l] == 0.0);
    CHECK(p.at_nodes[m][0] == 80.0);
    CHECK(p.at_nodes[m][g.n[m] - 1] == 80.0);
    CHECK(p.at_nodes[m][g.interior_lo(m) - 1] > 0.0);

    CHECK(p.node_lo_end(m) == g.n_layer[m] - 1);
    CHECK(p.node_hi_start(m) == g.n[m] - g.n_layer[m]);
    CHECK(p.cell_lo_end(m) == g.n_layer[m] - 1);
    CHECK(p.cell_hi_start(m) == g.n[m] - 1 - g.n_layer[m]);
  }

  // mirror symmetry of the samples
  for (int l = 0; l < g.n[0]; ++l)
    CHECK(p.at_nodes[0][l] == p.at_nodes[0][g.n[0] - 1 - l]);
}

TEST_CASE("zero strength gives an all-zero profile") {
  GridSpec g = build_grid(2, {0.5, 0.5}, {0.1, 0.1}, {0.01, 0.01});
  DampingProfile p = sample_profile(g, {0.0, 0.0, 0.0});
  CHECK(p.all_zero());
  CHECK(p.cell_lo_end(0) == -1);
  CHECK(p.cell_hi_start(0) == g.n[0] - 1);
}

TEST_CASE("constant profile covers every sample") {
  GridSpec g = build_plain_grid(2, 0.5, 0.05);
  DampingProfile p = constant_profile(g, 2.0);
  CHECK_FALSE(p.all_zero());
  for (int m = 0; m < 2; ++m) {
    for (double v : p.at_nodes[m]) CHECK(v == 2.0);
    for (double v : p.at_cells[m]) CHECK(v == 2.0);
    CHECK(p.node_lo_end(m) == g.n[m] - 1);
    CHECK(p.cell_lo_end(m) == g.n[m] - 2);
  }
}

} // TEST_SUITE
