#include "pmlwave/damping.hpp"

#include "pmlwave/errors.hpp"

#include <cmath>
#include <numbers>

namespace pmlwave {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Ramp shape on s in [0, 1]: s - sin(2*pi*s)/(2*pi); 0 at the interface,
// 1 at the outer edge, with vanishing first and second derivative at 0.
double ramp(double s) { return s - std::sin(two_pi * s) / two_pi; }

} // namespace

double eval_zeta(double x, double a, double L, double zeta_bar) {
  if (!(a > 0.0) || !(L > 0.0))
    throw ConfigError("eval_zeta: a and L must be positive");
  if (zeta_bar < 0.0) throw ConfigError("eval_zeta: zeta_bar must be >= 0");
  double d = std::abs(x) - a;
  if (d <= 0.0) return 0.0;
  double s = d / L;
  if (s > 1.0) s = 1.0;
  return zeta_bar * ramp(s);
}

double zeta_bar_from_reflection(double reflection, double c, double L) {
  if (!(reflection > 0.0) || reflection > 1.0)
    throw ConfigError("damping: reflection coefficient must lie in (0, 1], got " +
                      std::to_string(reflection));
  if (!(c > 0.0) || !(L > 0.0))
    throw ConfigError("damping: c and L must be positive");
  return (c / L) * std::log(1.0 / reflection);
}

bool DampingProfile::all_zero() const {
  for (int m = 0; m < 3; ++m) {
    for (double v : at_nodes[m])
      if (v != 0.0) return false;
    for (double v : at_cells[m])
      if (v != 0.0) return false;
  }
  return true;
}

namespace {

int nonzero_prefix_end(const std::vector<double>& v) {
  int e = -1;
  while (e + 1 < static_cast<int>(v.size()) && v[e + 1] != 0.0) ++e;
  return e;
}

int nonzero_suffix_start(const std::vector<double>& v, int prefix_end) {
  int n = static_cast<int>(v.size());
  if (prefix_end == n - 1) return n; // whole axis active: treat as prefix only
  int s = n;
  while (s - 1 > prefix_end && v[s - 1] != 0.0) --s;
  return s;
}

} // namespace

int DampingProfile::cell_lo_end(int m) const {
  return nonzero_prefix_end(at_cells[m]);
}
int DampingProfile::cell_hi_start(int m) const {
  return nonzero_suffix_start(at_cells[m], cell_lo_end(m));
}
int DampingProfile::node_lo_end(int m) const {
  return nonzero_prefix_end(at_nodes[m]);
}
int DampingProfile::node_hi_start(int m) const {
  return nonzero_suffix_start(at_nodes[m], node_lo_end(m));
}

DampingProfile sample_profile(const GridSpec& grid,
                              const std::array<double, 3>& zeta_bar) {
  DampingProfile p;
  p.zeta_bar = zeta_bar;
  for (int m = 0; m < 3; ++m) {
    int n = m < grid.dim ? grid.n[m] : 1;
    int nl = m < grid.dim ? grid.n_layer[m] : 0;
    double zb = m < grid.dim ? zeta_bar[m] : 0.0;
    if (zb < 0.0) throw ConfigError("damping: zeta_bar must be >= 0");
    p.at_nodes[m].assign(n, 0.0);
    p.at_cells[m].assign(n > 1 ? n - 1 : 0, 0.0);
    if (nl == 0 || zb == 0.0) continue;
    // depth below the interface in cells, computed from indices so that
    // interior samples are exactly zero
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      if (l < nl)
        s = static_cast<double>(nl - l) / nl;
      else if (l > n - 1 - nl)
        s = static_cast<double>(l - (n - 1 - nl)) / nl;
      else
        continue;
      p.at_nodes[m][l] = zb * ramp(s);
    }
    for (int l = 0; l + 1 < n; ++l) {
      double s = 0.0;
      if (l <= nl - 1)
        s = (static_cast<double>(nl - l) - 0.5) / nl;
      else if (l >= n - 1 - nl)
        s = (static_cast<double>(l - (n - 1 - nl)) + 0.5) / nl;
      else
        continue;
      p.at_cells[m][l] = zb * ramp(s);
    }
  }
  return p;
}

DampingProfile constant_profile(const GridSpec& grid, double zeta0) {
  if (zeta0 < 0.0) throw ConfigError("damping: zeta0 must be >= 0");
  DampingProfile p;
  for (int m = 0; m < 3; ++m) {
    int n = m < grid.dim ? grid.n[m] : 1;
    double v = m < grid.dim ? zeta0 : 0.0;
    p.zeta_bar[m] = v;
    p.at_nodes[m].assign(n, v);
    p.at_cells[m].assign(n > 1 ? n - 1 : 0, v);
  }
  return p;
}

} // namespace pmlwave
