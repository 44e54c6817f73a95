#pragma once

#include "pmlwave/grid.hpp"

#include <array>
#include <vector>

namespace pmlwave {

/// Damping coefficient at coordinate x for a layer of width L starting at
/// |x| = a: zero inside |x| <= a, and
///   zeta_bar * (s - sin(2*pi*s)/(2*pi)),  s = (|x| - a)/L in (0, 1],
/// inside the layer. The ramp is C^2 at the interface (cubic leading term)
/// and reaches zeta_bar at the outer edge.
double eval_zeta(double x, double a, double L, double zeta_bar);

/// Layer strength giving theoretical plane-wave reflection R at normal
/// incidence: zeta_bar = (c/L) * log(1/R). Requires 0 < R <= 1, c > 0, L > 0.
double zeta_bar_from_reflection(double reflection, double c, double L);

/// Per-axis damping samples on a grid: zeta at integer nodes and at
/// half-offset (cell) positions. Interior samples are exactly 0.0 (the ramp
/// depth is computed from index arithmetic, not coordinate comparison).
struct DampingProfile {
  std::array<double, 3> zeta_bar{};
  std::array<std::vector<double>, 3> at_nodes;  // size n[m]
  std::array<std::vector<double>, 3> at_cells;  // size n[m]-1

  /// True if every sample on every axis is zero (plain wave equation).
  bool all_zero() const;
  /// Largest index of the nonzero prefix of at_cells[m] (-1 if none).
  int cell_lo_end(int m) const;
  /// Smallest index of the nonzero suffix of at_cells[m] (size if none).
  int cell_hi_start(int m) const;
  int node_lo_end(int m) const;
  int node_hi_start(int m) const;
};

/// Sample the ramp profile on a grid, one strength per axis.
DampingProfile sample_profile(const GridSpec& grid,
                              const std::array<double, 3>& zeta_bar);

/// Spatially constant damping on every axis (analysis/testing aid; the
/// damped wave equation with constant zeta has a closed-form relation to
/// the undamped one).
DampingProfile constant_profile(const GridSpec& grid, double zeta0);

} // namespace pmlwave
