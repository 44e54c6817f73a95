#pragma once

#include "pmlwave/damping.hpp"
#include "pmlwave/grid.hpp"
#include "pmlwave/media.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace pmlwave {

/// Complete, validated description of one simulation.
struct SimulationConfig {
  GridSpec grid;

  // damping strength per axis (already resolved if given as a reflection
  // coefficient)
  std::array<double, 3> zeta_bar{};

  enum class MediumKind { constant, layered };
  MediumKind medium_kind = MediumKind::constant;
  double c = 1.0;        // constant medium speed
  double b = 0.95;       // layered transition half-width

  std::optional<SourceTerm> source;
  InitialCondition initial;

  std::optional<double> dt; // explicit time step; otherwise CFL formula
  double safety = 0.9;      // CFL safety factor for automatic dt
  double t_end = 1.0;

  std::vector<double> snapshot_times;
  std::string output_dir = ".";

  MediumModel make_medium() const;
  double resolve_dt(double c_max) const;
};

/// Built-in scenarios. "point2d": unit-speed square with a Gaussian-derivative
/// point source at the origin. "hetero2d": layered medium excited by a
/// polynomial bump. "point3d": unit-speed cube with the point source.
SimulationConfig preset_config(const std::string& name);

/// Validate cross-field constraints (snapshot times within [0, t_end],
/// explicit dt against the CFL bound, positive speeds, source inside the
/// interior box). Throws ConfigError naming each violated constraint.
void validate_config(const SimulationConfig& cfg);

} // namespace pmlwave
