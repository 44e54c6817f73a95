#include "pmlwave/solver2d.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "pmlwave/errors.hpp"
#include "threads.hpp"

namespace pmlwave {

Gamma2D gamma_2d(double zeta1, double zeta2) {
  Gamma2D g;
  g.g1[0] = -zeta1;
  g.g1[1] = -zeta2;
  g.g2[0] = zeta2 - zeta1;
  g.g2[1] = zeta1 - zeta2;
  return g;
}

namespace {

bool axis_has_damping(const DampingProfile& d, int m) {
  if (d.zeta_bar[m] != 0.0) return true;
  for (double z : d.at_nodes[m])
    if (z != 0.0) return true;
  for (double z : d.at_cells[m])
    if (z != 0.0) return true;
  return false;
}

} // namespace

Stepper2D::Stepper2D(const GridSpec& grid, const MediumModel& medium,
                     const DampingProfile& damping, double dt,
                     std::array<bool, 3> periodic)
    : grid_(grid), medium_(medium), periodic_(periodic), dt_(dt) {
  if (grid_.dim != 2) throw ConfigError("Stepper2D requires a 2D grid");
  if (!(dt_ > 0.0)) throw ConfigError("time step must be positive");
  detail::apply_thread_cap();

  const int n1 = grid_.n[0];
  const int n2 = grid_.n[1];

  state_.u_curr = ScalarField(n1, n2);
  state_.u_prev = ScalarField(n1, n2);
  state_.u_next = ScalarField(n1, n2);
  state_.n = 0;

  int plain_lo[3] = {0, 0, 0};
  int plain_hi[3] = {0, 0, 0};
  int upd_lo[3] = {0, 0, 0};
  int upd_hi[3] = {0, 0, 0};

  for (int m = 0; m < 3; ++m) {
    if (m >= 2) {
      zn_[m] = {0.0};
      zc_[m] = {0.0};
      node_m_[m] = {0};
      node_p_[m] = {0};
      cell_m_[m] = {0};
      cell_classes_[m] = AxisClasses{1, -1, 1};
      continue;
    }
    const int nn = grid_.n[m];
    const int nc = nn - 1;
    zn_[m] = damping.at_nodes[m];
    zc_[m] = damping.at_cells[m];
    if (periodic_[m] && axis_has_damping(damping, m))
      throw ConfigError("periodic axes require zero damping");

    node_m_[m].resize(nn);
    node_p_[m].resize(nn);
    cell_m_[m].resize(nn);
    for (int i = 0; i < nn; ++i) {
      node_m_[m][i] = (i == 0) ? (periodic_[m] ? nn - 2 : 0) : i - 1;
      node_p_[m][i] = (i == nn - 1) ? i : i + 1;
      cell_m_[m][i] = (i == 0) ? (periodic_[m] ? nc - 1 : 0) : i - 1;
    }

    const int cle = damping.cell_lo_end(m);
    const int chs = damping.cell_hi_start(m);
    const int nle = damping.node_lo_end(m);
    const int nhs = damping.node_hi_start(m);
    cell_classes_[m] = AxisClasses{nc, cle, chs};

    upd_lo[m] = periodic_[m] ? 0 : 1;
    upd_hi[m] = nn - 2;
    if (periodic_[m]) {
      plain_lo[m] = 0;
      plain_hi[m] = nn - 2;
    } else {
      plain_lo[m] = std::max({1, nle + 1, cle + 2});
      plain_hi[m] = std::min({nn - 2, nhs - 1, chs - 1});
    }
  }

  plain_box_ = Box{{plain_lo[0], plain_lo[1], 0}, {plain_hi[0], plain_hi[1], 0}};

  for (int a1 = 0; a1 < 3; ++a1)
    for (int a2 = 0; a2 < 3; ++a2) {
      if (a1 == 1 && a2 == 1) continue;
      Box b;
      const int cls[2] = {a1, a2};
      bool ok = true;
      for (int m = 0; m < 2; ++m) {
        int lo, hi;
        if (cls[m] == 0) {
          lo = upd_lo[m];
          hi = std::min(plain_lo[m] - 1, upd_hi[m]);
        } else if (cls[m] == 1) {
          lo = std::max(plain_lo[m], upd_lo[m]);
          hi = std::min(plain_hi[m], upd_hi[m]);
        } else {
          lo = std::max(plain_hi[m] + 1, upd_lo[m]);
          hi = upd_hi[m];
        }
        b.lo[m] = lo;
        b.hi[m] = hi;
        if (lo > hi) ok = false;
      }
      b.lo[2] = 0;
      b.hi[2] = 0;
      if (ok) frame_boxes_.push_back(b);
    }

  state_.phi = BlockField(2, cell_classes_, 1);
}

void Stepper2D::set_source(const std::optional<SourceTerm>& src) {
  source_ = src;
  if (!source_) return;
  const std::array<int, 3> sn = source_->node(grid_);
  if (sn[0] < 1 || sn[0] > grid_.n[0] - 2 || sn[1] < 1 || sn[1] > grid_.n[1] - 2)
    throw ConfigError("source location falls outside the interior mesh");
}

void Stepper2D::set_initial(const ScalarField& u0, const ScalarField& v0) {
  const int n1 = grid_.n[0];
  const int n2 = grid_.n[1];
  if (u0.n1 != n1 || u0.n2 != n2 || v0.n1 != n1 || v0.n2 != n2)
    throw ConfigError("initial fields do not match the grid");

  state_.u_curr.data = u0.data;
  ScalarField& uc = state_.u_curr;
  ScalarField& up = state_.u_prev;

  for (int m = 0; m < 2; ++m) {
    if (periodic_[m]) continue;
    const int nn = grid_.n[m];
    for (int l = 0; l < grid_.n[1 - m]; ++l) {
      if (m == 0) {
        uc(0, l) = 0.0;
        uc(nn - 1, l) = 0.0;
      } else {
        uc(l, 0) = 0.0;
        uc(l, nn - 1) = 0.0;
      }
    }
  }
  sync_mirror(uc);

  const double dt2 = dt_ * dt_;
  const double inv_dx1_sq = 1.0 / (grid_.dx[0] * grid_.dx[0]);
  const double inv_dx2_sq = 1.0 / (grid_.dx[1] * grid_.dx[1]);
  const double* c2x = medium_.c2[0].data.data();
  const double* c2y = medium_.c2[1].data.data();
  const int cx_n1 = medium_.c2[0].n1;
  const int cy_n1 = medium_.c2[1].n1;

  up.fill(0.0);
  const int jlo = periodic_[1] ? 0 : 1;
  const int jhi = n2 - 2;
  const int ilo = periodic_[0] ? 0 : 1;
  const int ihi = n1 - 2;
  for (int j = jlo; j <= jhi; ++j) {
    const int jm = node_m_[1][j];
    const int cjm = cell_m_[1][j];
    const double z2 = zn_[1][j];
    for (int i = ilo; i <= ihi; ++i) {
      const int im = node_m_[0][i];
      const int cim = cell_m_[0][i];
      const double z1 = zn_[0][i];
      const double u = uc(i, j);
      const double v = v0(i, j);
      const double lapx = (c2x[i + cx_n1 * j] * uc(i + 1, j) -
                           (c2x[i + cx_n1 * j] + c2x[cim + cx_n1 * j]) * u +
                           c2x[cim + cx_n1 * j] * uc(im, j)) *
                          inv_dx1_sq;
      const double lapy = (c2y[i + cy_n1 * j] * uc(i, j + 1) -
                           (c2y[i + cy_n1 * j] + c2y[i + cy_n1 * cjm]) * u +
                           c2y[i + cy_n1 * cjm] * uc(i, jm)) *
                          inv_dx2_sq;
      const double lap = lapx + lapy;
      // backward Taylor with the full initial acceleration, damping included
      const double S = z1 + z2;
      const double Q = z1 * z2;
      const double acc = (lap - S * v) - Q * u;
      up(i, j) = u - dt_ * v + (0.5 * dt2) * acc;
    }
  }
  if (source_) {
    const std::array<int, 3> sn = source_->node(grid_);
    up(sn[0], sn[1]) += (0.5 * dt2) * source_->value(grid_, 0.0);
  }
  sync_mirror(up);

  state_.u_next.fill(0.0);
  state_.phi.fill(0.0);
  state_.n = 0;
}

void Stepper2D::sync_mirror(ScalarField& f) const {
  const int n1 = grid_.n[0];
  const int n2 = grid_.n[1];
  if (periodic_[0])
    for (int j = 0; j < n2; ++j) f(n1 - 1, j) = f(0, j);
  if (periodic_[1])
    for (int i = 0; i < n1; ++i) f(i, n2 - 1) = f(i, 0);
}

void Stepper2D::step_u() {
  const int n1 = grid_.n[0];
  const double inv_dt2 = 1.0 / (dt_ * dt_);
  const double half_inv_dt = 0.5 / dt_;
  const double dt2 = dt_ * dt_;
  const double inv_dx1 = 1.0 / grid_.dx[0];
  const double inv_dx2 = 1.0 / grid_.dx[1];
  const double inv_dx1_sq = inv_dx1 * inv_dx1;
  const double inv_dx2_sq = inv_dx2 * inv_dx2;

  const double* uc = state_.u_curr.data.data();
  const double* um = state_.u_prev.data.data();
  double* un = state_.u_next.data.data();
  const double* c2x = medium_.c2[0].data.data();
  const double* c2y = medium_.c2[1].data.data();
  const int cx_n1 = medium_.c2[0].n1;
  const int cy_n1 = medium_.c2[1].n1;

  const Box& pb = plain_box_;
  if (!pb.empty()) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = pb.lo[1]; j <= pb.hi[1]; ++j) {
      const int jm = node_m_[1][j];
      const int jp = node_p_[1][j];
      const int cjm = cell_m_[1][j];
      for (int i = pb.lo[0]; i <= pb.hi[0]; ++i) {
        const int im = node_m_[0][i];
        const int ip = node_p_[0][i];
        const int cim = cell_m_[0][i];
        const double u = uc[i + n1 * j];
        const double lapx = (c2x[i + cx_n1 * j] * uc[ip + n1 * j] -
                             (c2x[i + cx_n1 * j] + c2x[cim + cx_n1 * j]) * u +
                             c2x[cim + cx_n1 * j] * uc[im + n1 * j]) *
                            inv_dx1_sq;
        const double lapy = (c2y[i + cy_n1 * j] * uc[i + n1 * jp] -
                             (c2y[i + cy_n1 * j] + c2y[i + cy_n1 * cjm]) * u +
                             c2y[i + cy_n1 * cjm] * uc[i + n1 * jm]) *
                            inv_dx2_sq;
        const double lap = lapx + lapy;
        un[i + n1 * j] = 2.0 * u - um[i + n1 * j] + dt2 * lap;
      }
    }
  }

  const BlockField& phi = state_.phi;
  for (const Box& fb : frame_boxes_) {
    for (int j = fb.lo[1]; j <= fb.hi[1]; ++j) {
      const int jm = node_m_[1][j];
      const int jp = node_p_[1][j];
      const int cjm = cell_m_[1][j];
      const double z2 = zn_[1][j];
      for (int i = fb.lo[0]; i <= fb.hi[0]; ++i) {
        const int im = node_m_[0][i];
        const int ip = node_p_[0][i];
        const int cim = cell_m_[0][i];
        const double z1 = zn_[0][i];
        const double S = z1 + z2;
        const double Q = z1 * z2;
        const double u = uc[i + n1 * j];
        const double lapx = (c2x[i + cx_n1 * j] * uc[ip + n1 * j] -
                             (c2x[i + cx_n1 * j] + c2x[cim + cx_n1 * j]) * u +
                             c2x[cim + cx_n1 * j] * uc[im + n1 * j]) *
                            inv_dx1_sq;
        const double lapy = (c2y[i + cy_n1 * j] * uc[i + n1 * jp] -
                             (c2y[i + cy_n1 * j] + c2y[i + cy_n1 * cjm]) * u +
                             c2y[i + cy_n1 * cjm] * uc[i + n1 * jm]) *
                            inv_dx2_sq;
        const double lap = lapx + lapy;

        const double p1_pp = 0.5 * (phi.value(0, i, cjm, 0) + phi.value(0, i, j, 0));
        const double p1_mp = 0.5 * (phi.value(0, cim, cjm, 0) + phi.value(0, cim, j, 0));
        const double p2_pp = 0.5 * (phi.value(1, cim, j, 0) + phi.value(1, i, j, 0));
        const double p2_mp = 0.5 * (phi.value(1, cim, cjm, 0) + phi.value(1, i, cjm, 0));
        const double divx = (p1_pp - p1_mp) * inv_dx1;
        const double divy = (p2_pp - p2_mp) * inv_dx2;
        const double div = divx + divy;

        double rhs = lap + div;
        rhs -= Q * u;
        const double numer =
            (2.0 * u - um[i + n1 * j]) * inv_dt2 + S * half_inv_dt * um[i + n1 * j] + rhs;
        const double denom = inv_dt2 + S * half_inv_dt;
        un[i + n1 * j] = numer / denom;
      }
    }
  }

  if (source_) {
    const double t = static_cast<double>(state_.n) * dt_;
    const double val = source_->value(grid_, t);
    const std::array<int, 3> sn = source_->node(grid_);
    const double S = zn_[0][sn[0]] + zn_[1][sn[1]];
    const double denom = inv_dt2 + S * half_inv_dt;
    un[sn[0] + n1 * sn[1]] += val / denom;
  }

  sync_mirror(state_.u_next);
}

void Stepper2D::step_phi() {
  const double inv_dt = 1.0 / dt_;
  const double inv_dx1 = 1.0 / grid_.dx[0];
  const double inv_dx2 = 1.0 / grid_.dx[1];
  const int n1 = grid_.n[0];

  const double* un = state_.u_next.data.data();
  const double* uc = state_.u_curr.data.data();
  const double* c2x = medium_.c2[0].data.data();
  const double* c2y = medium_.c2[1].data.data();
  const int cx_n1 = medium_.c2[0].n1;
  const int cy_n1 = medium_.c2[1].n1;

  for (BlockField::Block& blk : state_.phi.blocks()) {
    const Box& b = blk.box;
    const int bn1 = blk.n1;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int cj = b.lo[1]; cj <= b.hi[1]; ++cj) {
      const double z2h = zc_[1][cj];
      double* p1 = blk.data.data() + (cj - b.lo[1]) * bn1 - b.lo[0];
      double* p2 = p1 + blk.comp_stride;
      for (int ci = b.lo[0]; ci <= b.hi[0]; ++ci) {
        const double z1h = zc_[0][ci];

        const double tun_i = 0.5 * (un[ci + n1 * cj] + un[ci + n1 * (cj + 1)]);
        const double tun_ip = 0.5 * (un[(ci + 1) + n1 * cj] + un[(ci + 1) + n1 * (cj + 1)]);
        const double tuc_i = 0.5 * (uc[ci + n1 * cj] + uc[ci + n1 * (cj + 1)]);
        const double tuc_ip = 0.5 * (uc[(ci + 1) + n1 * cj] + uc[(ci + 1) + n1 * (cj + 1)]);
        const double D1u = 0.5 * ((tun_ip - tun_i) + (tuc_ip - tuc_i)) * inv_dx1;
        const double c2c1 = 0.5 * (c2x[ci + cx_n1 * cj] + c2x[ci + cx_n1 * (cj + 1)]);
        const double g2_1 = z2h - z1h;
        const double drive1 = (g2_1 * c2c1) * D1u;
        p1[ci] = ((inv_dt - 0.5 * z1h) * p1[ci] + drive1) / (inv_dt + 0.5 * z1h);

        const double tvn_j = 0.5 * (un[ci + n1 * cj] + un[(ci + 1) + n1 * cj]);
        const double tvn_jp = 0.5 * (un[ci + n1 * (cj + 1)] + un[(ci + 1) + n1 * (cj + 1)]);
        const double tvc_j = 0.5 * (uc[ci + n1 * cj] + uc[(ci + 1) + n1 * cj]);
        const double tvc_jp = 0.5 * (uc[ci + n1 * (cj + 1)] + uc[(ci + 1) + n1 * (cj + 1)]);
        const double D2u = 0.5 * ((tvn_jp - tvn_j) + (tvc_jp - tvc_j)) * inv_dx2;
        const double c2c2 = 0.5 * (c2y[ci + cy_n1 * cj] + c2y[(ci + 1) + cy_n1 * cj]);
        const double g2_2 = z1h - z2h;
        const double drive2 = (g2_2 * c2c2) * D2u;
        p2[ci] = ((inv_dt - 0.5 * z2h) * p2[ci] + drive2) / (inv_dt + 0.5 * z2h);
      }
    }
  }
}

void Stepper2D::rotate() {
  std::swap(state_.u_prev.data, state_.u_curr.data);
  std::swap(state_.u_curr.data, state_.u_next.data);
  state_.n += 1;
}

void Stepper2D::step() {
  step_u();
  step_phi();
  rotate();
}

double Stepper2D::max_abs_u() const {
  double m = 0.0;
  for (double v : state_.u_curr.data) {
    if (!std::isfinite(v))
      throw InstabilityError("non-finite field value detected at step " +
                                 std::to_string(state_.n),
                             state_.n);
    m = std::max(m, std::abs(v));
  }
  // geometric blowup stays finite for a long time; catch it well past any
  // physical amplitude instead of waiting for overflow
  if (m > kBlowupLimit)
    throw InstabilityError("field magnitude " + std::to_string(m) +
                               " exceeds the blowup limit at step " +
                               std::to_string(state_.n),
                           state_.n);
  return m;
}

double Stepper2D::max_abs_u_interior() const {
  double m = 0.0;
  const ScalarField& u = state_.u_curr;
  for (int j = grid_.interior_lo(1); j <= grid_.interior_hi(1); ++j)
    for (int i = grid_.interior_lo(0); i <= grid_.interior_hi(0); ++i)
      m = std::max(m, std::abs(u(i, j)));
  return m;
}

RunSummary run2d(const SimulationConfig& cfg, const SnapshotCallback2D& on_snapshot,
                 const std::vector<double>& extra_snapshot_times) {
  const auto t0 = std::chrono::steady_clock::now();

  MediumModel medium = cfg.make_medium();
  DampingProfile damping = sample_profile(cfg.grid, cfg.zeta_bar);
  const double dt = cfg.resolve_dt(medium.c_max);

  Stepper2D stepper(cfg.grid, medium, damping, dt);
  stepper.set_source(cfg.source);

  ScalarField u0(cfg.grid.n[0], cfg.grid.n[1]);
  ScalarField v0(cfg.grid.n[0], cfg.grid.n[1]);
  cfg.initial.sample_u0(cfg.grid, u0);
  stepper.set_initial(u0, v0);

  const long n_steps =
      (cfg.t_end > 0.0) ? std::lround(std::ceil(cfg.t_end / dt - 1e-9)) : 0;

  std::set<long> snap_steps;
  auto add_snap = [&](double t) {
    long s = std::lround(t / dt);
    s = std::clamp(s, 0L, n_steps);
    snap_steps.insert(s);
  };
  if (on_snapshot) {
    for (double t : cfg.snapshot_times) add_snap(t);
    for (double t : extra_snapshot_times) add_snap(t);
  }

  const bool plain = cfg.grid.n_layer[0] == 0 && cfg.grid.n_layer[1] == 0;

  RunSummary sum;
  sum.dt = dt;
  sum.steps = n_steps;
  sum.max_abs.reserve(n_steps + 1);
  sum.max_abs_interior.reserve(n_steps + 1);

  auto record = [&]() {
    const double m = stepper.max_abs_u();
    const double mi = plain ? m : stepper.max_abs_u_interior();
    sum.max_abs.push_back(m);
    sum.max_abs_interior.push_back(mi);
    sum.run_max = std::max(sum.run_max, m);
    sum.run_max_interior = std::max(sum.run_max_interior, mi);
  };

  record();
  if (snap_steps.count(0)) on_snapshot(0, 0.0, stepper);

  for (long s = 1; s <= n_steps; ++s) {
    stepper.step();
    record();
    if (snap_steps.count(s)) on_snapshot(s, static_cast<double>(s) * dt, stepper);
  }

  double l2 = 0.0;
  for (double v : stepper.state().u_curr.data) l2 += v * v;
  sum.final_l2 = std::sqrt(l2 * cfg.grid.dx[0] * cfg.grid.dx[1]);

  sum.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sum;
}

} // namespace pmlwave
