#pragma once

#include <array>
#include <vector>

namespace pmlwave {

/// Tensor-product node mesh for the box [-(a+L), a+L]^dim with an absorbing
/// layer of width L[m] on each side of the interior box |x_m| < a[m].
/// Nodes on axis m sit at x = -(a+L) + l*dx, l = 0 .. n[m]-1; the layer
/// interface |x| = a falls exactly on a node (L[m] is an integral multiple
/// of dx[m]). L[m] == 0 denotes a plain grid with no layer on that axis.
struct GridSpec {
  int dim = 2;
  std::array<double, 3> a{};        // interior half-widths
  std::array<double, 3> L{};        // layer widths (0 for plain axes)
  std::array<double, 3> dx{};       // node spacings
  std::array<int, 3> n{1, 1, 1};    // nodes per axis
  std::array<int, 3> n_layer{};     // layer cells per axis (L/dx)

  double x_min(int m) const { return -(a[m] + L[m]); }
  double coord(int m, int l) const { return x_min(m) + l * dx[m]; }
  /// Index of the node nearest to coordinate x on axis m.
  int nearest_node(int m, double x) const;
  /// Interior node range [first, last] on axis m (|x| <= a inclusive).
  int interior_lo(int m) const { return n_layer[m]; }
  int interior_hi(int m) const { return n[m] - 1 - n_layer[m]; }
  long total_nodes() const {
    return static_cast<long>(n[0]) * n[1] * (dim == 3 ? n[2] : 1);
  }
};

/// Build and validate a PML grid. Requires per axis: dx > 0, L > 0 with
/// L/dx integral (1e-9 relative tolerance), and a >= dx with 2a/dx integral,
/// so the layer interface and the box extents land on nodes. Throws
/// ConfigError naming the offending axis otherwise.
GridSpec build_grid(int dim, const std::vector<double>& a,
                    const std::vector<double>& L,
                    const std::vector<double>& dx);

/// Plain (layer-free) grid on [-half_width, half_width]^dim, used for
/// reference runs and convergence studies.
GridSpec build_plain_grid(int dim, double half_width, double dx);

/// Leapfrog time step dt = safety * min(dx) / (c_max * sqrt(dim)).
/// Requires 0 < safety <= 1 and c_max > 0.
double cfl_timestep(const GridSpec& grid, double c_max, double safety);

} // namespace pmlwave
