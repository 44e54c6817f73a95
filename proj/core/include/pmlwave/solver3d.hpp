#pragma once

#include "pmlwave/config.hpp"
#include "pmlwave/damping.hpp"
#include "pmlwave/field.hpp"
#include "pmlwave/grid.hpp"
#include "pmlwave/media.hpp"
#include "pmlwave/solver2d.hpp" // RunSummary

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace pmlwave {

/// Diagonal coupling coefficients of the 3D layer:
///   Gamma1 = diag(-z1, -z2, -z3),
///   Gamma2 = diag(z2+z3-z1, z3+z1-z2, z1+z2-z3),
///   Gamma3 = diag(z2*z3, z3*z1, z1*z2).
struct Gamma3D {
  double g1[3];
  double g2[3];
  double g3[3];
};

Gamma3D gamma_3d(double zeta1, double zeta2, double zeta3);

struct FieldState3D {
  ScalarField u_curr;
  ScalarField u_prev;
  ScalarField u_next;
  BlockField phi; // 3 components on layer-affected cells
  BlockField psi; // midpoint time-integral of u, on layer-overlap nodes
  long n = 0;
};

/// 3D counterpart of Stepper2D with the extra scalar psi = integral of u,
/// stored (like phi) only where the damping overlap makes it enter the
/// update stencils. Step order: psi to the next half level, then u, then phi.
class Stepper3D {
public:
  Stepper3D(const GridSpec& grid, const MediumModel& medium,
            const DampingProfile& damping, double dt,
            std::array<bool, 3> periodic = {false, false, false});

  /// Install (or clear) the point source; the node must be interior.
  void set_source(const std::optional<SourceTerm>& src);
  void set_initial(const ScalarField& u0, const ScalarField& v0);

  void step();

  void step_psi(); // psi += dt * u_curr on the stored region
  void step_u();   // writes u_next, injects source
  void step_phi();
  void rotate();

  const GridSpec& grid() const { return grid_; }
  double dt() const { return dt_; }
  double time() const { return state_.n * dt_; }
  long step_index() const { return state_.n; }

  FieldState3D& state() { return state_; }
  const FieldState3D& state() const { return state_; }

  double max_abs_u() const;
  double max_abs_u_interior() const;

  const std::vector<double>& zeta_nodes(int m) const { return zn_[m]; }
  const std::vector<double>& zeta_cells(int m) const { return zc_[m]; }
  const Box& plain_box() const { return plain_box_; }
  const std::vector<Box>& frame_boxes() const { return frame_boxes_; }

private:
  void sync_mirror(ScalarField& f) const;

  GridSpec grid_;
  MediumModel medium_;
  std::array<bool, 3> periodic_;
  double dt_;
  std::optional<SourceTerm> source_;

  std::array<std::vector<double>, 3> zn_, zc_;
  std::array<std::vector<int>, 3> node_m_, node_p_, cell_m_;
  Box plain_box_;
  std::vector<Box> frame_boxes_;
  std::array<AxisClasses, 3> cell_classes_, psi_classes_;

  FieldState3D state_;
};

using SnapshotCallback3D =
    std::function<void(long step, double t, const Stepper3D&)>;

RunSummary run3d(const SimulationConfig& cfg,
                 const SnapshotCallback3D& on_snapshot = nullptr,
                 const std::vector<double>& extra_snapshot_times = {});

} // namespace pmlwave
