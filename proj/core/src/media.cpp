#include "pmlwave/media.hpp"

#include "pmlwave/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pmlwave {

MediumModel sample_medium(const GridSpec& grid,
                          const std::function<double(double, double, double)>& speed) {
  MediumModel mm;
  mm.c_max = 0.0;
  mm.c_min = 0.0;
  bool first = true;
  for (int m = 0; m < grid.dim; ++m) {
    int d1 = grid.n[0], d2 = grid.n[1], d3 = grid.dim == 3 ? grid.n[2] : 1;
    if (m == 0) d1 -= 1;
    if (m == 1) d2 -= 1;
    if (m == 2) d3 -= 1;
    mm.c2[m] = ScalarField(d1, d2, d3);
    for (int k = 0; k < d3; ++k) {
      for (int j = 0; j < d2; ++j) {
        for (int i = 0; i < d1; ++i) {
          double x[3] = {grid.coord(0, i), grid.coord(1, j),
                         grid.dim == 3 ? grid.coord(2, k) : 0.0};
          x[m] += 0.5 * grid.dx[m];
          // constant extension of the interior medium into the layer
          for (int q = 0; q < grid.dim; ++q)
            x[q] = std::clamp(x[q], -grid.a[q], grid.a[q]);
          double c = speed(x[0], x[1], x[2]);
          if (!(c > 0.0))
            throw ConfigError("medium: wave speed must be positive everywhere");
          mm.c2[m](i, j, k) = c * c;
          if (first) {
            mm.c_max = mm.c_min = c;
            first = false;
          } else {
            mm.c_max = std::max(mm.c_max, c);
            mm.c_min = std::min(mm.c_min, c);
          }
        }
      }
    }
  }
  return mm;
}

MediumModel constant_medium(const GridSpec& grid, double c) {
  if (!(c > 0.0)) throw ConfigError("medium: wave speed must be positive");
  return sample_medium(grid, [c](double, double, double) { return c; });
}

double layered_speed(double x2, double b) {
  if (!(b > 0.0)) throw ConfigError("medium: transition half-width b must be positive");
  if (x2 <= -b) return 0.5;
  if (x2 >= b) return 1.5;
  return 1.0 + x2 / (2.0 * b) +
         std::sin(std::numbers::pi * x2 / b) / (2.0 * std::numbers::pi);
}

MediumModel layered_medium(const GridSpec& grid, double b) {
  return sample_medium(
      grid, [b](double, double x2, double) { return layered_speed(x2, b); });
}

double source_amplitude(double t, double f0) {
  double arg = f0 * t - 1.0;
  double pi2 = std::numbers::pi * std::numbers::pi;
  return -2.0 * pi2 * f0 * arg * std::exp(-pi2 * arg * arg);
}

std::array<int, 3> SourceTerm::node(const GridSpec& grid) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int m = 0; m < grid.dim; ++m) idx[m] = grid.nearest_node(m, location[m]);
  return idx;
}

double SourceTerm::value(const GridSpec& grid, double t) const {
  double cell = 1.0;
  for (int m = 0; m < grid.dim; ++m) cell *= grid.dx[m];
  return source_amplitude(t, f0) / cell;
}

double bump_initial(double x1, double x2) {
  if (x1 <= -0.4 || x1 >= 0.4) return 0.0;
  if (x2 <= -1.0 || x2 >= 1.0) return 0.0;
  double q = 4.0 * (x1 + 0.4) * (0.4 - x1);
  return q * q * q * std::sin(3.0 * std::numbers::pi * x2);
}

void InitialCondition::sample_u0(const GridSpec& grid, ScalarField& u0) const {
  u0 = ScalarField(grid.n[0], grid.n[1], grid.dim == 3 ? grid.n[2] : 1);
  if (kind == Kind::zero) return;
  if (grid.dim != 2)
    throw ConfigError("initial: bump2d is only defined for dim = 2");
  for (int j = 0; j < grid.n[1]; ++j)
    for (int i = 0; i < grid.n[0]; ++i)
      u0(i, j) = bump_initial(grid.coord(0, i), grid.coord(1, j));
}

} // namespace pmlwave
