#pragma once

#include "pmlwave/field.hpp"
#include "pmlwave/grid.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>

namespace pmlwave {

/// Squared wave speed sampled at the half-offset positions used by the
/// flux-form Laplacian: c2[m] lives at (x_m + dx/2) on axis m and at integer
/// nodes on the others. Inside the layer the speed is extended constantly
/// along the normal (evaluation coordinates are clamped to the interior box).
struct MediumModel {
  std::array<ScalarField, 3> c2; // c2[0]: (n1-1, n2, n3), c2[1]: (n1, n2-1, n3), ...
  double c_max = 0.0;
  double c_min = 0.0;
};

/// Sample a speed function c(x1, x2, x3) on a grid (clamped to the interior
/// box before evaluation). The function must return c > 0.
MediumModel sample_medium(const GridSpec& grid,
                          const std::function<double(double, double, double)>& speed);

MediumModel constant_medium(const GridSpec& grid, double c);

/// Two-layer speed profile with a smooth transition band |x2| < b:
/// 0.5 below, 1 + x2/(2b) + sin(pi*x2/b)/(2*pi) inside, 1.5 above.
double layered_speed(double x2, double b);

MediumModel layered_medium(const GridSpec& grid, double b);

/// Time signature of the point source: derivative of a Gaussian pulse,
///   h(t) = -2*pi^2*f0*(f0*t - 1) * exp(-pi^2*(f0*t - 1)^2).
double source_amplitude(double t, double f0);

/// Point source at a fixed location, injected at the nearest node with
/// amplitude h(t) / (dx1*dx2[*dx3]) (discrete delta normalization).
struct SourceTerm {
  std::array<double, 3> location{};
  double f0 = 10.0;

  std::array<int, 3> node(const GridSpec& grid) const;
  /// Injection value at time t: h(t) / prod(dx).
  double value(const GridSpec& grid, double t) const;
};

/// Separable polynomial bump times a transverse sine, supported on
/// -0.4 < x1 < 0.4 (zero outside):
///   (4*(x1+0.4)*(0.4-x1))^3 * sin(3*pi*x2).
double bump_initial(double x1, double x2);

/// Initial data selector.
struct InitialCondition {
  enum class Kind { zero, bump2d };
  Kind kind = Kind::zero;

  void sample_u0(const GridSpec& grid, ScalarField& u0) const;
};

} // namespace pmlwave
