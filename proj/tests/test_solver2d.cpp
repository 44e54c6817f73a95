#include "doctest.h"

#include <cmath>
#include <numbers>

#include "pmlwave/config.hpp"
#include "pmlwave/damping.hpp"
#include "pmlwave/errors.hpp"
#include "pmlwave/grid.hpp"
#include "pmlwave/media.hpp"
#include "pmlwave/solver2d.hpp"

using namespace pmlwave;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField sample2(const GridSpec& g, double (*f)(double, double)) {
  ScalarField u(g.n[0], g.n[1], 1);
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i)
      u(i, j) = f(g.coord(0, i), g.coord(1, j));
  return u;
}

double dirichlet_mode(double x, double y) {
  return std::sin(pi * (x + 0.5)) * std::sin(pi * (y + 0.5));
}

} // namespace

TEST_SUITE("solver2d") {

TEST_CASE("zero damping reproduces the plain kernel bit for bit") {
  GridSpec ga = build_grid(2, {0.3, 0.3}, {0.1, 0.1}, {0.05, 0.05});
  GridSpec gb = build_plain_grid(2, 0.4, 0.05);
  REQUIRE(ga.n[0] == gb.n[0]);

  double dt = cfl_timestep(ga, 1.0, 0.9);
  Stepper2D a(ga, constant_medium(ga, 1.0), sample_profile(ga, {0, 0, 0}), dt);
  Stepper2D b(gb, constant_medium(gb, 1.0), sample_profile(gb, {0, 0, 0}), dt);

  auto bump = [](double x, double y) {
    return std::exp(-30.0 * (x * x + y * y));
  };
  ScalarField u0(ga.n[0], ga.n[1], 1);
  for (int j = 0; j < ga.n[1]; ++j)
    for (int i = 0; i < ga.n[0]; ++i)
      u0(i, j) = bump(ga.coord(0, i), ga.coord(1, j));
  ScalarField v0(ga.n[0], ga.n[1], 1);

  a.set_initial(u0, v0);
  b.set_initial(u0, v0);
  for (int s = 0; s < 20; ++s) {
    a.step();
    b.step();
  }
  CHECK(a.state().u_curr.data == b.state().u_curr.data);
  CHECK(a.max_abs_u() > 0.0);
}

TEST_CASE("standing mode converges at second order") {
  // u = cos(sqrt(2) pi t) sin(pi (x+1/2)) sin(pi (y+1/2)) on the unit box
  double errs[2];
  double dxs[2] = {0.05, 0.025};
  for (int lev = 0; lev < 2; ++lev) {
    GridSpec g = build_plain_grid(2, 0.5, dxs[lev]);
    // integral step count to the shared final time, so both levels compare
    // the error at t = 0.5 and the observed ratio is a pure refinement
    int n = static_cast<int>(std::ceil(0.5 / cfl_timestep(g, 1.0, 0.9)));
    double dt = 0.5 / n;
    Stepper2D st(g, constant_medium(g, 1.0), sample_profile(g, {0, 0, 0}), dt);
    st.set_initial(sample2(g, dirichlet_mode), ScalarField(g.n[0], g.n[1], 1));
    for (int s = 0; s < n; ++s) st.step();
    double t = n * dt;
    double amp = std::cos(std::sqrt(2.0) * pi * t);
    double err = 0.0;
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i < g.n[0]; ++i)
        err = std::max(err, std::abs(st.state().u_curr(i, j) -
                                     amp * dirichlet_mode(g.coord(0, i),
                                                          g.coord(1, j))));
    errs[lev] = err;
  }
  double order = std::log2(errs[0] / errs[1]);
  CHECK(order == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("constant damping matches the exponentially damped mode") {
  // with zeta1 = zeta2 = z0 everywhere the layer system collapses to
  // u_tt + 2 z0 u_t + z0^2 u = c^2 lap u, solved by e^{-z0 t} w where
  // w_tt = c^2 lap w with w(0) = u0, w_t(0) = v0 + z0 u0
  GridSpec g = build_plain_grid(2, 0.5, 0.05);
  const double z0 = 2.0;
  double dt = 0.5 * cfl_timestep(g, 1.0, 0.9);
  Stepper2D st(g, constant_medium(g, 1.0), constant_profile(g, z0), dt);

  ScalarField u0 = sample2(g, dirichlet_mode);
  ScalarField v0 = u0;
  for (double& v : v0.data) v *= -z0; // w_t(0) = 0
  st.set_initial(u0, v0);

  int n = 32;
  for (int s = 0; s < n; ++s) st.step();
  double t = n * dt;
  double amp = std::exp(-z0 * t) * std::cos(std::sqrt(2.0) * pi * t);

  double worst = 0.0, worst_undamped = 0.0;
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i) {
      double mode = dirichlet_mode(g.coord(0, i), g.coord(1, j));
      worst = std::max(worst, std::abs(st.state().u_curr(i, j) - amp * mode));
      worst_undamped = std::max(
          worst_undamped,
          std::abs(st.state().u_curr(i, j) -
                   std::cos(std::sqrt(2.0) * pi * t) * mode));
    }
  CHECK(worst < 5e-3);
  CHECK(worst_undamped > 0.3); // the damping factor is really there

  // Gamma2 vanishes for equal axis damping, so phi never leaves zero
  for (const auto& blk : st.state().phi.blocks())
    for (double v : blk.data) CHECK(v == 0.0);
}

TEST_CASE("instability is detected with the step index") {
  GridSpec g = build_plain_grid(2, 0.5, 0.05);
  double dt = 2.0 * cfl_timestep(g, 1.0, 1.0);
  Stepper2D st(g, constant_medium(g, 1.0), sample_profile(g, {0, 0, 0}), dt);
  st.set_initial(sample2(g, dirichlet_mode), ScalarField(g.n[0], g.n[1], 1));

  long caught_step = -1;
  try {
    for (int s = 0; s < 500; ++s) {
      st.step();
      st.max_abs_u();
    }
  } catch (const InstabilityError& e) {
    caught_step = e.step();
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
  CHECK(caught_step > 0);
}

TEST_CASE("periodic axes: exact translation invariance and mirror sync") {
  GridSpec g = build_plain_grid(2, 0.5, 1.0 / 16.0);
  int nu = g.n[0] - 1; // unique nodes
  double dt = cfl_timestep(g, 1.0, 0.9);
  std::array<bool, 3> per{true, true, false};
  DampingProfile zero = sample_profile(g, {0, 0, 0});
  MediumModel med = constant_medium(g, 1.0);

  auto wave = [](double x, double y) {
    return std::sin(2.0 * pi * x) * std::cos(2.0 * pi * y) +
           0.3 * std::cos(4.0 * pi * x);
  };
  ScalarField u0 = sample2(g, wave);
  for (int j = 0; j < g.n[1]; ++j) u0(g.n[0] - 1, j) = u0(0, j);
  for (int i = 0; i < g.n[0]; ++i) u0(i, g.n[1] - 1) = u0(i, 0);

  // shifted copy along x1, built from the same bits
  ScalarField u0s(g.n[0], g.n[1], 1);
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < nu; ++i)
      u0s((i + 1) % nu, j) = u0(i, j);
  for (int j = 0; j < g.n[1]; ++j) u0s(g.n[0] - 1, j) = u0s(0, j);

  Stepper2D a(g, med, zero, dt, per);
  Stepper2D b(g, med, zero, dt, per);
  ScalarField v0(g.n[0], g.n[1], 1);
  a.set_initial(u0, v0);
  b.set_initial(u0s, v0);
  for (int s = 0; s < 25; ++s) {
    a.step();
    b.step();
  }

  for (int j = 0; j < nu; ++j)
    for (int i = 0; i < nu; ++i)
      CHECK(b.state().u_curr((i + 1) % nu, j) == a.state().u_curr(i, j));

  // mirror plane stays an exact copy
  for (int j = 0; j < g.n[1]; ++j)
    CHECK(a.state().u_curr(g.n[0] - 1, j) == a.state().u_curr(0, j));
  for (int i = 0; i < g.n[0]; ++i)
    CHECK(a.state().u_curr(i, g.n[1] - 1) == a.state().u_curr(i, 0));
}

TEST_CASE("run driver: summary bookkeeping and snapshot scheduling") {
  SimulationConfig cfg;
  cfg.grid = build_grid(2, {0.3, 0.3}, {0.1, 0.1}, {0.02, 0.02});
  cfg.zeta_bar = {80.0, 80.0, 0.0};
  SourceTerm src;
  src.location = {0.0, 0.0, 0.0};
  src.f0 = 10.0;
  cfg.source = src;
  cfg.t_end = 0.5;

  const double dt_expected = cfg.resolve_dt(1.0);
  int calls = 0;
  long last_step = -1;
  RunSummary sum = run2d(
      cfg,
      [&](long step, double t, const Stepper2D& st) {
        ++calls;
        last_step = step;
        CHECK(t == doctest::Approx(step * dt_expected).epsilon(1e-12));
        CHECK(st.grid().n[0] == cfg.grid.n[0]);
      },
      {0.1, 0.2});

  CHECK(sum.dt == dt_expected);
  CHECK(calls == 2);
  CHECK(sum.steps == static_cast<long>(std::ceil(0.5 / sum.dt - 1e-9)));
  CHECK(static_cast<long>(sum.max_abs.size()) == sum.steps + 1);
  CHECK(sum.max_abs[0] == 0.0); // source-driven, zero initial data
  CHECK(sum.run_max > 0.0);
  CHECK(sum.run_max_interior <= sum.run_max);
  CHECK(sum.final_l2 > 0.0);
  for (std::size_t s = 0; s < sum.max_abs.size(); ++s)
    CHECK(sum.max_abs_interior[s] <= sum.max_abs[s]);
  CHECK(last_step > 0);
}

TEST_CASE("t_end zero takes no steps") {
  SimulationConfig cfg;
  cfg.grid = build_grid(2, {0.3, 0.3}, {0.1, 0.1}, {0.02, 0.02});
  cfg.zeta_bar = {80.0, 80.0, 0.0};
  cfg.initial.kind = InitialCondition::Kind::zero;
  cfg.t_end = 0.0;
  RunSummary sum = run2d(cfg);
  CHECK(sum.steps == 0);
  CHECK(sum.max_abs.size() == 1);
  CHECK(sum.final_l2 == 0.0);
}

TEST_CASE("source node must be interior") {
  GridSpec g = build_grid(2, {0.3, 0.3}, {0.1, 0.1}, {0.02, 0.02});
  Stepper2D st(g, constant_medium(g, 1.0), sample_profile(g, {80, 80, 0}),
               cfl_timestep(g, 1.0, 0.9));
  SourceTerm src;
  src.location = {5.0, 0.0, 0.0}; // clamps to the boundary node
  CHECK_THROWS_AS(st.set_source(src), ConfigError);
}

TEST_CASE("periodic axis with damping is rejected") {
  GridSpec g = build_grid(2, {0.3, 0.3}, {0.1, 0.1}, {0.02, 0.02});
  CHECK_THROWS_AS(Stepper2D(g, constant_medium(g, 1.0),
                            sample_profile(g, {80, 80, 0}),
                            cfl_timestep(g, 1.0, 0.9), {true, false, false}),
                  ConfigError);
}

} // TEST_SUITE
