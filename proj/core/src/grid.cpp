#include "pmlwave/grid.hpp"

#include "pmlwave/errors.hpp"

#include <cmath>
#include <sstream>

namespace pmlwave {

namespace {

const char* axis_name(int m) {
  static const char* names[3] = {"x1", "x2", "x3"};
  return names[m];
}

// Nearest integer if q is integral to 1e-12 relative tolerance, else -1.
long integral_ratio(double q) {
  double r = std::round(q);
  if (std::abs(q - r) <= 1e-12 * std::max(1.0, std::abs(q))) return std::lround(r);
  return -1;
}

} // namespace

int GridSpec::nearest_node(int m, double x) const {
  long l = std::lround((x - x_min(m)) / dx[m]);
  if (l < 0) l = 0;
  if (l > n[m] - 1) l = n[m] - 1;
  return static_cast<int>(l);
}

GridSpec build_grid(int dim, const std::vector<double>& a,
                    const std::vector<double>& L,
                    const std::vector<double>& dx) {
  if (dim != 2 && dim != 3)
    throw ConfigError("grid: dim must be 2 or 3, got " + std::to_string(dim));
  if (static_cast<int>(a.size()) != dim || static_cast<int>(L.size()) != dim ||
      static_cast<int>(dx.size()) != dim)
    throw ConfigError("grid: a, L, dx must each have one entry per axis");

  GridSpec g;
  g.dim = dim;
  for (int m = 0; m < dim; ++m) {
    std::ostringstream err;
    if (!(dx[m] > 0.0)) {
      err << "grid axis " << axis_name(m) << ": dx must be positive, got " << dx[m];
      throw ConfigError(err.str());
    }
    if (!(L[m] > 0.0)) {
      err << "grid axis " << axis_name(m) << ": layer width L must be positive, got "
          << L[m];
      throw ConfigError(err.str());
    }
    if (!(a[m] > 0.0)) {
      err << "grid axis " << axis_name(m) << ": interior half-width a must be positive, got "
          << a[m];
      throw ConfigError(err.str());
    }
    long nl = integral_ratio(L[m] / dx[m]);
    if (nl < 1) {
      err << "grid axis " << axis_name(m) << ": layer width L = " << L[m]
          << " is not an integral multiple of dx = " << dx[m]
          << " (L/dx = " << L[m] / dx[m] << ")";
      throw ConfigError(err.str());
    }
    long ni = integral_ratio(2.0 * a[m] / dx[m]);
    if (ni < 2) {
      err << "grid axis " << axis_name(m) << ": interior width 2a = " << 2.0 * a[m]
          << " must span an integral number (>= 2) of cells of dx = " << dx[m];
      throw ConfigError(err.str());
    }
    g.a[m] = a[m];
    g.L[m] = L[m];
    g.dx[m] = dx[m];
    g.n_layer[m] = static_cast<int>(nl);
    g.n[m] = static_cast<int>(ni + 2 * nl + 1);
  }
  return g;
}

GridSpec build_plain_grid(int dim, double half_width, double dx) {
  if (dim != 2 && dim != 3)
    throw ConfigError("grid: dim must be 2 or 3, got " + std::to_string(dim));
  if (!(dx > 0.0)) throw ConfigError("grid: dx must be positive");
  long nc = integral_ratio(2.0 * half_width / dx);
  if (nc < 2)
    throw ConfigError("grid: width " + std::to_string(2.0 * half_width) +
                      " must span an integral number (>= 2) of cells of dx = " +
                      std::to_string(dx));
  GridSpec g;
  g.dim = dim;
  for (int m = 0; m < dim; ++m) {
    g.a[m] = half_width;
    g.L[m] = 0.0;
    g.dx[m] = dx;
    g.n_layer[m] = 0;
    g.n[m] = static_cast<int>(nc + 1);
  }
  return g;
}

double cfl_timestep(const GridSpec& grid, double c_max, double safety) {
  if (!(safety > 0.0 && safety <= 1.0))
    throw ConfigError("cfl: safety factor must satisfy 0 < safety <= 1, got " +
                      std::to_string(safety));
  if (!(c_max > 0.0))
    throw ConfigError("cfl: c_max must be positive, got " + std::to_string(c_max));
  double h = grid.dx[0];
  for (int m = 1; m < grid.dim; ++m) h = std::min(h, grid.dx[m]);
  return safety * h / (c_max * std::sqrt(static_cast<double>(grid.dim)));
}

} // namespace pmlwave
