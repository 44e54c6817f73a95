#pragma once

#include "pmlwave/config.hpp"
#include "pmlwave/field.hpp"
#include "pmlwave/grid.hpp"

#include <string>
#include <vector>

namespace pmlwave {

/// Reference solution restricted to the interior node set of the layered
/// grid, at the requested snapshot times.
struct ReferenceRun {
  GridSpec omega_grid;              // the layered grid the slices align with
  std::vector<double> times;        // actual snapshot times (step-aligned)
  std::vector<ScalarField> slices;  // u on the interior node box of omega_grid
  double dt = 0.0;
};

/// Plain wave-equation run (zero damping, Dirichlet far boundary) on an
/// enlarged domain of half-width `enlargement_factor * a`, restricted to the
/// interior nodes of `cfg.grid` at the given times. The enlarged half-width
/// must keep boundary influence away from the interior box for the whole
/// run: (A - a)/c_max >= t_end; otherwise ConfigError reports the minimal
/// admissible half-width.
ReferenceRun reference_run(const SimulationConfig& cfg,
                           double enlargement_factor,
                           const std::vector<double>& times);

/// Discrete L2 error series between a run of `cfg` and a reference,
/// sqrt(sum_trapezoid (u - u_ref)^2 * dx1*dx2[*dx3]) over the interior box.
/// e_rel divides by the peak reference L2 norm over the series.
struct ErrorSeries {
  std::vector<double> times;
  std::vector<double> e_l2;
  std::vector<double> e_rel;
  double normalization = 0.0; // peak reference L2 norm
};

ErrorSeries l2_error_series(const SimulationConfig& cfg,
                            const ReferenceRun& ref);

/// Fixed-time L2 norm pair on precomputed slices (helper for custom flows).
double l2_norm_interior(const GridSpec& grid, const ScalarField& slice);
double l2_diff_interior(const GridSpec& grid, const ScalarField& a,
                        const ScalarField& b);

/// Observed-order study on the standing Dirichlet mode of the unit box
/// [-1/2, 1/2]^dim: u = cos(sqrt(dim)*pi*c*t) * prod(sin(pi*(x_m + 1/2))).
struct ConvergenceReport {
  std::vector<double> dxs;
  std::vector<double> errors;   // L2 error at t_end per level
  std::vector<double> orders;   // log2(e[i-1]/e[i])
  bool exact = false;           // all errors at rounding level (zero data)
};

ConvergenceReport convergence_study(int dim, const std::vector<double>& dxs,
                                    double t_end, double c = 1.0,
                                    double safety = 0.9);

/// Error series for each layer strength, sharing one reference run.
struct SweepEntry {
  double zeta_bar;
  ErrorSeries series;
};

std::vector<SweepEntry> reflection_sweep(const SimulationConfig& base,
                                         const std::vector<double>& zeta_bars,
                                         double enlargement_factor,
                                         const std::vector<double>& times);

} // namespace pmlwave
