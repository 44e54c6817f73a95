#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pmlwave/config.hpp"
#include "pmlwave/errors.hpp"
#include "pmlwave/harness.hpp"

using namespace pmlwave;

namespace {

// Tiny source-driven layered box, cheap enough for exhaustive checks.
SimulationConfig small_source_cfg() {
  SimulationConfig cfg;
  cfg.grid = build_grid(2, {0.25, 0.25}, {0.05, 0.05}, {0.05, 0.05});
  cfg.zeta_bar = {40.0, 40.0, 0.0};
  cfg.source = SourceTerm{{0.0, 0.0, 0.0}, 10.0};
  cfg.t_end = 0.4;
  return cfg;
}

} // namespace

TEST_SUITE("harness") {

TEST_CASE("interior L2 norm of the constant-one field is the box volume root") {
  GridSpec g2 = build_plain_grid(2, 0.5, 1.0 / 128.0);
  ScalarField ones2(g2.n[0], g2.n[1], 1);
  ones2.fill(1.0);
  CHECK(std::abs(l2_norm_interior(g2, ones2) - 1.0) < 1e-13);

  GridSpec g3 = build_plain_grid(3, 0.5, 1.0 / 16.0);
  ScalarField ones3(g3.n[0], g3.n[1], g3.n[2]);
  ones3.fill(1.0);
  CHECK(std::abs(l2_norm_interior(g3, ones3) - 1.0) < 1e-13);

  // and the diff helper agrees with the norm on (f, 0)
  ScalarField zeros2(g2.n[0], g2.n[1], 1);
  CHECK(l2_diff_interior(g2, ones2, zeros2) == l2_norm_interior(g2, ones2));
}

TEST_CASE("reference slices do not depend on the enlargement factor") {
  SimulationConfig cfg = small_source_cfg();
  const std::vector<double> times{0.0, 0.2, 0.4};

  ReferenceRun r4 = reference_run(cfg, 4.0, times);
  ReferenceRun r8 = reference_run(cfg, 8.0, times);

  REQUIRE(r4.slices.size() == 3);
  REQUIRE(r8.slices.size() == 3);
  CHECK(r4.dt == r8.dt);
  CHECK(r4.times == r8.times);

  // 13 steps of a nearest-neighbor stencil cannot carry boundary influence
  // across the 15-node moat, so the restrictions agree bit for bit.
  for (std::size_t i = 0; i < r4.slices.size(); ++i) {
    REQUIRE(r4.slices[i].data == r8.slices[i].data);
  }

  // snapshot times are step-aligned
  const double dt = cfg.resolve_dt(1.0);
  CHECK(r4.dt == dt);
  CHECK(r4.times[0] == 0.0);
  CHECK(r4.times[1] == 6.0 * dt);
  CHECK(r4.times[2] == 13.0 * dt);
}

TEST_CASE("reference run rejects domains the boundary can contaminate") {
  SimulationConfig cfg = small_source_cfg();
  CHECK_THROWS_WITH_AS(reference_run(cfg, 4.0, {5.0}),
                       doctest::Contains("half-width"), ConfigError);
  CHECK_THROWS_AS(reference_run(cfg, 4.0, {}), ConfigError);
  CHECK_THROWS_AS(reference_run(cfg, 4.0, {-1.0}), ConfigError);

  SimulationConfig aniso = cfg;
  aniso.grid = build_grid(2, {0.25, 0.25}, {0.05, 0.05}, {0.05, 0.025});
  CHECK_THROWS_WITH_AS(reference_run(aniso, 4.0, {0.1}),
                       doctest::Contains("equal spacings"), ConfigError);
}

TEST_CASE("error series starts at exactly zero for quiescent data") {
  SimulationConfig cfg = small_source_cfg();
  const std::vector<double> times{0.0, 0.2, 0.4};
  ReferenceRun ref = reference_run(cfg, 4.0, times);
  ErrorSeries es = l2_error_series(cfg, ref);

  REQUIRE(es.e_l2.size() == 3);
  CHECK(es.e_l2[0] == 0.0);
  CHECK(es.e_rel[0] == 0.0);
  CHECK(es.normalization > 0.0);
  for (std::size_t i = 0; i < es.e_l2.size(); ++i) {
    CHECK(std::isfinite(es.e_l2[i]));
    CHECK(es.e_rel[i] == es.e_l2[i] / es.normalization);
  }

  // mismatched grids are refused
  SimulationConfig other = cfg;
  other.grid = build_grid(2, {0.25, 0.25}, {0.1, 0.1}, {0.05, 0.05});
  CHECK_THROWS_WITH_AS(l2_error_series(other, ref),
                       doctest::Contains("do not match"), ConfigError);
}

TEST_CASE("standing-mode study observes second order") {
  ConvergenceReport r2 = convergence_study(2, {0.1, 0.05, 0.025}, 0.25);
  REQUIRE(r2.errors.size() == 3);
  REQUIRE(r2.orders.size() == 2);
  CHECK_FALSE(r2.exact);
  CHECK(r2.errors[0] > r2.errors[1]);
  CHECK(r2.errors[1] > r2.errors[2]);
  for (double p : r2.orders) {
    CHECK(p > 1.95);
    CHECK(p < 2.05);
  }

  ConvergenceReport r3 = convergence_study(3, {0.1, 0.05}, 0.2);
  REQUIRE(r3.orders.size() == 1);
  CHECK(r3.orders[0] > 1.95);
  CHECK(r3.orders[0] < 2.05);
}

TEST_CASE("zero-length study run reproduces the initial data") {
  ConvergenceReport rep = convergence_study(2, {0.1, 0.05}, 0.0);
  CHECK(rep.exact);
  for (double e : rep.errors) CHECK(e < 1e-13);
}

TEST_CASE("convergence study input validation") {
  CHECK_THROWS_AS(convergence_study(4, {0.1, 0.05}, 0.1), ConfigError);
  CHECK_THROWS_AS(convergence_study(2, {0.1}, 0.1), ConfigError);
}

TEST_CASE("reflection sweep shares one reference across strengths") {
  SimulationConfig cfg = small_source_cfg();
  const std::vector<double> times{0.0, 0.2, 0.4};
  auto entries = reflection_sweep(cfg, {20.0, 80.0}, 4.0, times);

  REQUIRE(entries.size() == 2);
  CHECK(entries[0].zeta_bar == 20.0);
  CHECK(entries[1].zeta_bar == 80.0);
  for (const auto& e : entries) {
    REQUIRE(e.series.e_l2.size() == 3);
    CHECK(e.series.e_l2[0] == 0.0);
    CHECK(e.series.normalization == entries[0].series.normalization);
    for (double v : e.series.e_l2) CHECK(std::isfinite(v));
  }
  // different layer strengths produce genuinely different reflections
  CHECK(entries[0].series.e_l2[2] != entries[1].series.e_l2[2]);
}

} // TEST_SUITE
