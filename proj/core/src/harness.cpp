#include "pmlwave/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmlwave/damping.hpp"
#include "pmlwave/errors.hpp"
#include "pmlwave/media.hpp"
#include "pmlwave/solver2d.hpp"
#include "pmlwave/solver3d.hpp"

namespace pmlwave {

namespace {

double trap_weight(int p, int np) {
  return (p == 0 || p == np - 1) ? 0.5 : 1.0;
}

std::array<int, 3> interior_counts(const GridSpec& g) {
  std::array<int, 3> ni{1, 1, 1};
  for (int m = 0; m < g.dim; ++m) ni[m] = g.interior_hi(m) - g.interior_lo(m) + 1;
  return ni;
}

double cell_volume(const GridSpec& g) {
  double v = 1.0;
  for (int m = 0; m < g.dim; ++m) v *= g.dx[m];
  return v;
}

/// Snapshot capture plan: requested times mapped to steps of a run at a
/// fixed dt, with one interior-box slice stored per requested time.
struct CapturePlan {
  std::vector<long> steps;
  std::vector<ScalarField>* out = nullptr;
  std::array<int, 3> base{};
  std::array<int, 3> ni{1, 1, 1};
  int dim = 2;

  void init(const GridSpec& omega, const std::vector<double>& times, double dt,
            long n_steps, const std::array<int, 3>& base_idx,
            std::vector<ScalarField>& slices) {
    dim = omega.dim;
    ni = interior_counts(omega);
    base = base_idx;
    out = &slices;
    slices.assign(times.size(), ScalarField(ni[0], ni[1], ni[2]));
    steps.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
      steps[i] = std::clamp(std::lround(times[i] / dt), 0L, n_steps);
  }

  void capture(long s, const ScalarField& u) {
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (steps[i] != s) continue;
      ScalarField& dst = (*out)[i];
      for (int r = 0; r < ni[2]; ++r)
        for (int q = 0; q < ni[1]; ++q)
          for (int p = 0; p < ni[0]; ++p)
            dst(p, q, r) = u(p + base[0], q + base[1], dim == 3 ? r + base[2] : 0);
    }
  }
};

long step_count(double t_end, double dt) {
  return (t_end > 0.0) ? std::lround(std::ceil(t_end / dt - 1e-9)) : 0;
}

} // namespace

double l2_norm_interior(const GridSpec& grid, const ScalarField& slice) {
  const std::array<int, 3> ni = interior_counts(grid);
  double sum = 0.0;
  for (int r = 0; r < ni[2]; ++r) {
    const double wr = grid.dim == 3 ? trap_weight(r, ni[2]) : 1.0;
    for (int q = 0; q < ni[1]; ++q) {
      const double wq = wr * trap_weight(q, ni[1]);
      for (int p = 0; p < ni[0]; ++p) {
        const double v = slice(p, q, r);
        sum += wq * trap_weight(p, ni[0]) * v * v;
      }
    }
  }
  return std::sqrt(sum * cell_volume(grid));
}

double l2_diff_interior(const GridSpec& grid, const ScalarField& a,
                        const ScalarField& b) {
  const std::array<int, 3> ni = interior_counts(grid);
  double sum = 0.0;
  for (int r = 0; r < ni[2]; ++r) {
    const double wr = grid.dim == 3 ? trap_weight(r, ni[2]) : 1.0;
    for (int q = 0; q < ni[1]; ++q) {
      const double wq = wr * trap_weight(q, ni[1]);
      for (int p = 0; p < ni[0]; ++p) {
        const double v = a(p, q, r) - b(p, q, r);
        sum += wq * trap_weight(p, ni[0]) * v * v;
      }
    }
  }
  return std::sqrt(sum * cell_volume(grid));
}

ReferenceRun reference_run(const SimulationConfig& cfg, double enlargement_factor,
                           const std::vector<double>& times) {
  const int dim = cfg.grid.dim;
  if (times.empty())
    throw ConfigError("reference run needs at least one snapshot time");
  for (double t : times)
    if (!(t >= 0.0)) throw ConfigError("reference snapshot times must be >= 0");
  for (int m = 1; m < dim; ++m)
    if (cfg.grid.dx[m] != cfg.grid.dx[0])
      throw ConfigError("reference runs require equal spacings on all axes");

  double a_max = 0.0;
  for (int m = 0; m < dim; ++m) a_max = std::max(a_max, cfg.grid.a[m]);
  const double A = enlargement_factor * a_max;
  const double dx = cfg.grid.dx[0];

  const MediumModel omega_medium = cfg.make_medium();
  const double c_max = omega_medium.c_max;
  const double t_max = *std::max_element(times.begin(), times.end());

  if ((A - a_max) / c_max < t_max * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "reference domain too small: boundary influence reaches the "
           "interior box before t = "
        << t_max << "; half-width " << A << " < minimal admissible "
        << a_max + c_max * t_max;
    throw ConfigError(msg.str());
  }

  SimulationConfig rcfg = cfg;
  rcfg.grid = build_plain_grid(dim, A, dx);
  rcfg.zeta_bar = {0.0, 0.0, 0.0};
  rcfg.t_end = t_max;
  rcfg.snapshot_times.clear();

  std::array<int, 3> base{};
  for (int m = 0; m < dim; ++m) {
    const double shift = A - (cfg.grid.a[m] + cfg.grid.L[m]);
    const long off = std::lround(shift / dx);
    if (std::abs(off * dx - shift) > 1e-9 * std::max(1.0, A))
      throw ConfigError(
          "reference domain is not node-aligned with the layered grid");
    base[m] = cfg.grid.interior_lo(m) + static_cast<int>(off);
  }

  const double dt = cfg.resolve_dt(c_max);
  rcfg.dt = dt;
  const long n_steps = step_count(t_max, dt);

  ReferenceRun out;
  out.omega_grid = cfg.grid;
  out.dt = dt;

  CapturePlan plan;
  plan.init(cfg.grid, times, dt, n_steps, base, out.slices);
  out.times.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    out.times[i] = static_cast<double>(plan.steps[i]) * dt;

  if (dim == 2) {
    run2d(rcfg,
          [&](long s, double, const Stepper2D& st) {
            plan.capture(s, st.state().u_curr);
          },
          times);
  } else {
    run3d(rcfg,
          [&](long s, double, const Stepper3D& st) {
            plan.capture(s, st.state().u_curr);
          },
          times);
  }
  return out;
}

ErrorSeries l2_error_series(const SimulationConfig& cfg, const ReferenceRun& ref) {
  const int dim = cfg.grid.dim;
  for (int m = 0; m < dim; ++m)
    if (cfg.grid.n[m] != ref.omega_grid.n[m] ||
        cfg.grid.n_layer[m] != ref.omega_grid.n_layer[m])
      throw ConfigError("reference slices do not match the run grid");

  SimulationConfig rcfg = cfg;
  rcfg.dt = ref.dt;
  rcfg.t_end = *std::max_element(ref.times.begin(), ref.times.end());
  rcfg.snapshot_times.clear();
  const long n_steps = step_count(rcfg.t_end, ref.dt);

  std::array<int, 3> base{};
  for (int m = 0; m < dim; ++m) base[m] = cfg.grid.interior_lo(m);

  std::vector<ScalarField> slices;
  CapturePlan plan;
  plan.init(cfg.grid, ref.times, ref.dt, n_steps, base, slices);

  if (dim == 2) {
    run2d(rcfg,
          [&](long s, double, const Stepper2D& st) {
            plan.capture(s, st.state().u_curr);
          },
          ref.times);
  } else {
    run3d(rcfg,
          [&](long s, double, const Stepper3D& st) {
            plan.capture(s, st.state().u_curr);
          },
          ref.times);
  }

  ErrorSeries series;
  series.times = ref.times;
  series.e_l2.resize(ref.times.size());
  series.e_rel.resize(ref.times.size());
  for (std::size_t i = 0; i < ref.times.size(); ++i) {
    series.e_l2[i] = l2_diff_interior(cfg.grid, slices[i], ref.slices[i]);
    series.normalization =
        std::max(series.normalization, l2_norm_interior(cfg.grid, ref.slices[i]));
  }
  for (std::size_t i = 0; i < ref.times.size(); ++i)
    series.e_rel[i] = series.normalization > 0.0
                          ? series.e_l2[i] / series.normalization
                          : series.e_l2[i];
  return series;
}

ConvergenceReport convergence_study(int dim, const std::vector<double>& dxs,
                                    double t_end, double c, double safety) {
  if (dim != 2 && dim != 3)
    throw ConfigError("convergence study dimension must be 2 or 3");
  if (dxs.size() < 2)
    throw ConfigError("convergence study needs at least two spacings");

  const double pi = 3.14159265358979323846;
  const double omega = std::sqrt(static_cast<double>(dim)) * pi * c;

  ConvergenceReport rep;
  rep.dxs = dxs;

  for (double dx : dxs) {
    const GridSpec grid = build_plain_grid(dim, 0.5, dx);
    const MediumModel medium = constant_medium(grid, c);
    const DampingProfile damping = sample_profile(grid, {0.0, 0.0, 0.0});
    const double dt = cfl_timestep(grid, c, safety);
    const long n = step_count(t_end, dt);
    const double T = static_cast<double>(n) * dt;

    auto mode = [&](int i, int j, int k) {
      double v = std::sin(pi * (grid.coord(0, i) + 0.5)) *
                 std::sin(pi * (grid.coord(1, j) + 0.5));
      if (dim == 3) v *= std::sin(pi * (grid.coord(2, k) + 0.5));
      return v;
    };

    ScalarField u0(grid.n[0], grid.n[1], grid.n[2]);
    ScalarField v0(grid.n[0], grid.n[1], grid.n[2]);
    ScalarField exact(grid.n[0], grid.n[1], grid.n[2]);
    const double phase = std::cos(omega * T);
    for (int k = 0; k < grid.n[2]; ++k)
      for (int j = 0; j < grid.n[1]; ++j)
        for (int i = 0; i < grid.n[0]; ++i) {
          u0(i, j, k) = mode(i, j, k);
          exact(i, j, k) = phase * mode(i, j, k);
        }

    ScalarField u_final;
    if (dim == 2) {
      Stepper2D st(grid, medium, damping, dt);
      st.set_initial(u0, v0);
      for (long s = 0; s < n; ++s) st.step();
      u_final = st.state().u_curr;
    } else {
      Stepper3D st(grid, medium, damping, dt);
      st.set_initial(u0, v0);
      for (long s = 0; s < n; ++s) st.step();
      u_final = st.state().u_curr;
    }
    rep.errors.push_back(l2_diff_interior(grid, u_final, exact));
  }

  for (std::size_t i = 1; i < dxs.size(); ++i) {
    const double num = std::log(rep.errors[i - 1] / rep.errors[i]);
    const double den = std::log(dxs[i - 1] / dxs[i]);
    rep.orders.push_back(num / den);
  }
  rep.exact = std::all_of(rep.errors.begin(), rep.errors.end(),
                          [](double e) { return e < 1e-13; });
  return rep;
}

std::vector<SweepEntry> reflection_sweep(const SimulationConfig& base,
                                         const std::vector<double>& zeta_bars,
                                         double enlargement_factor,
                                         const std::vector<double>& times) {
  const ReferenceRun ref = reference_run(base, enlargement_factor, times);
  std::vector<SweepEntry> entries;
  entries.reserve(zeta_bars.size());
  for (double z : zeta_bars) {
    SimulationConfig cfg = base;
    for (int m = 0; m < cfg.grid.dim; ++m) cfg.zeta_bar[m] = z;
    entries.push_back(SweepEntry{z, l2_error_series(cfg, ref)});
  }
  return entries;
}

} // namespace pmlwave
