#include "pmlwave/solver3d.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "pmlwave/errors.hpp"
#include "threads.hpp"

namespace pmlwave {

Gamma3D gamma_3d(double zeta1, double zeta2, double zeta3) {
  Gamma3D g;
  g.g1[0] = -zeta1;
  g.g1[1] = -zeta2;
  g.g1[2] = -zeta3;
  g.g2[0] = zeta2 + zeta3 - zeta1;
  g.g2[1] = zeta3 + zeta1 - zeta2;
  g.g2[2] = zeta1 + zeta2 - zeta3;
  g.g3[0] = zeta2 * zeta3;
  g.g3[1] = zeta3 * zeta1;
  g.g3[2] = zeta1 * zeta2;
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

Stepper3D::Stepper3D(const GridSpec& grid, const MediumModel& medium,
                     const DampingProfile& damping, double dt,
                     std::array<bool, 3> periodic)
    : grid_(grid), medium_(medium), periodic_(periodic), dt_(dt) {
  if (grid_.dim != 3) throw ConfigError("Stepper3D requires a 3D grid");
  if (!(dt_ > 0.0)) throw ConfigError("time step must be positive");
  detail::apply_thread_cap();

  const int n1 = grid_.n[0];
  const int n2 = grid_.n[1];
  const int n3 = grid_.n[2];

  state_.u_curr = ScalarField(n1, n2, n3);
  state_.u_prev = ScalarField(n1, n2, n3);
  state_.u_next = ScalarField(n1, n2, n3);
  state_.n = 0;

  int plain_lo[3], plain_hi[3], upd_lo[3], upd_hi[3];

  for (int m = 0; m < 3; ++m) {
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
    psi_classes_[m] =
        AxisClasses{nn, cle < 0 ? -1 : cle + 1, chs >= nc ? nn : chs};

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

  plain_box_ = Box{{plain_lo[0], plain_lo[1], plain_lo[2]},
                   {plain_hi[0], plain_hi[1], plain_hi[2]}};

  for (int a1 = 0; a1 < 3; ++a1)
    for (int a2 = 0; a2 < 3; ++a2)
      for (int a3 = 0; a3 < 3; ++a3) {
        if (a1 == 1 && a2 == 1 && a3 == 1) continue;
        Box b;
        const int cls[3] = {a1, a2, a3};
        bool ok = true;
        for (int m = 0; m < 3; ++m) {
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
        if (ok) frame_boxes_.push_back(b);
      }

  state_.phi = BlockField(3, cell_classes_, 1);
  state_.psi = BlockField(1, psi_classes_, 2);
}

void Stepper3D::set_source(const std::optional<SourceTerm>& src) {
  source_ = src;
  if (!source_) return;
  const std::array<int, 3> sn = source_->node(grid_);
  if (sn[0] < 1 || sn[0] > grid_.n[0] - 2 || sn[1] < 1 ||
      sn[1] > grid_.n[1] - 2 || sn[2] < 1 || sn[2] > grid_.n[2] - 2)
    throw ConfigError("source location falls outside the interior mesh");
}

void Stepper3D::set_initial(const ScalarField& u0, const ScalarField& v0) {
  const int n1 = grid_.n[0];
  const int n2 = grid_.n[1];
  const int n3 = grid_.n[2];
  if (u0.n1 != n1 || u0.n2 != n2 || u0.n3 != n3 || v0.n1 != n1 ||
      v0.n2 != n2 || v0.n3 != n3)
    throw ConfigError("initial fields do not match the grid");

  state_.u_curr.data = u0.data;
  ScalarField& uc = state_.u_curr;
  ScalarField& up = state_.u_prev;

  for (int m = 0; m < 3; ++m) {
    if (periodic_[m]) continue;
    const int nn = grid_.n[m];
    for (int k = 0; k < (m == 2 ? 1 : n3); ++k)
      for (int j = 0; j < (m == 1 ? 1 : n2); ++j)
        for (int i = 0; i < (m == 0 ? 1 : n1); ++i) {
          if (m == 0) {
            uc(0, j, k) = 0.0;
            uc(nn - 1, j, k) = 0.0;
          } else if (m == 1) {
            uc(i, 0, k) = 0.0;
            uc(i, nn - 1, k) = 0.0;
          } else {
            uc(i, j, 0) = 0.0;
            uc(i, j, nn - 1) = 0.0;
          }
        }
  }
  sync_mirror(uc);

  const double dt2 = dt_ * dt_;
  const double inv_dx1_sq = 1.0 / (grid_.dx[0] * grid_.dx[0]);
  const double inv_dx2_sq = 1.0 / (grid_.dx[1] * grid_.dx[1]);
  const double inv_dx3_sq = 1.0 / (grid_.dx[2] * grid_.dx[2]);
  const ScalarField& cX = medium_.c2[0];
  const ScalarField& cY = medium_.c2[1];
  const ScalarField& cZ = medium_.c2[2];

  up.fill(0.0);
  const int klo = periodic_[2] ? 0 : 1, khi = n3 - 2;
  const int jlo = periodic_[1] ? 0 : 1, jhi = n2 - 2;
  const int ilo = periodic_[0] ? 0 : 1, ihi = n1 - 2;
  for (int k = klo; k <= khi; ++k) {
    const int km = node_m_[2][k];
    const int ckm = cell_m_[2][k];
    const double z3 = zn_[2][k];
    for (int j = jlo; j <= jhi; ++j) {
      const int jm = node_m_[1][j];
      const int cjm = cell_m_[1][j];
      const double z2 = zn_[1][j];
      for (int i = ilo; i <= ihi; ++i) {
        const int im = node_m_[0][i];
        const int cim = cell_m_[0][i];
        const double z1 = zn_[0][i];
        const double u = uc(i, j, k);
        const double v = v0(i, j, k);
        const double lapx = (cX(i, j, k) * uc(i + 1, j, k) -
                             (cX(i, j, k) + cX(cim, j, k)) * u +
                             cX(cim, j, k) * uc(im, j, k)) *
                            inv_dx1_sq;
        const double lapy = (cY(i, j, k) * uc(i, j + 1, k) -
                             (cY(i, j, k) + cY(i, cjm, k)) * u +
                             cY(i, cjm, k) * uc(i, jm, k)) *
                            inv_dx2_sq;
        const double lapz = (cZ(i, j, k) * uc(i, j, k + 1) -
                             (cZ(i, j, k) + cZ(i, j, ckm)) * u +
                             cZ(i, j, ckm) * uc(i, j, km)) *
                            inv_dx3_sq;
        const double lap = (lapx + lapy) + lapz;
        // backward Taylor with the full initial acceleration, damping included
        const double S = (z1 + z2) + z3;
        const double Q = (z1 * z2 + z2 * z3) + z3 * z1;
        const double acc = (lap - S * v) - Q * u;
        up(i, j, k) = u - dt_ * v + (0.5 * dt2) * acc;
      }
    }
  }
  if (source_) {
    const std::array<int, 3> sn = source_->node(grid_);
    up(sn[0], sn[1], sn[2]) += (0.5 * dt2) * source_->value(grid_, 0.0);
  }
  sync_mirror(up);

  state_.u_next.fill(0.0);
  state_.phi.fill(0.0);
  state_.psi.fill(0.0);
  state_.n = 0;
}

void Stepper3D::sync_mirror(ScalarField& f) const {
  const int n1 = grid_.n[0];
  const int n2 = grid_.n[1];
  const int n3 = grid_.n[2];
  if (periodic_[0])
    for (int k = 0; k < n3; ++k)
      for (int j = 0; j < n2; ++j) f(n1 - 1, j, k) = f(0, j, k);
  if (periodic_[1])
    for (int k = 0; k < n3; ++k)
      for (int i = 0; i < n1; ++i) f(i, n2 - 1, k) = f(i, 0, k);
  if (periodic_[2])
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) f(i, j, n3 - 1) = f(i, j, 0);
}

void Stepper3D::step_psi() {
  const ScalarField& uc = state_.u_curr;
  const double dt = dt_;
  for (BlockField::Block& blk : state_.psi.blocks()) {
    const Box& b = blk.box;
    const int bn1 = blk.n1;
    const int bn2 = blk.n2;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int k = b.lo[2]; k <= b.hi[2]; ++k) {
      for (int j = b.lo[1]; j <= b.hi[1]; ++j) {
        double* p = blk.data.data() +
                    static_cast<std::size_t>(bn1) *
                        ((j - b.lo[1]) + static_cast<std::size_t>(bn2) * (k - b.lo[2])) -
                    b.lo[0];
        for (int i = b.lo[0]; i <= b.hi[0]; ++i) p[i] += dt * uc(i, j, k);
      }
    }
  }
}

void Stepper3D::step_u() {
  const int n1 = grid_.n[0];
  const int n2 = grid_.n[1];
  const double inv_dt2 = 1.0 / (dt_ * dt_);
  const double half_inv_dt = 0.5 / dt_;
  const double dt2 = dt_ * dt_;
  const double inv_dx1 = 1.0 / grid_.dx[0];
  const double inv_dx2 = 1.0 / grid_.dx[1];
  const double inv_dx3 = 1.0 / grid_.dx[2];
  const double inv_dx1_sq = inv_dx1 * inv_dx1;
  const double inv_dx2_sq = inv_dx2 * inv_dx2;
  const double inv_dx3_sq = inv_dx3 * inv_dx3;

  const double* uc = state_.u_curr.data.data();
  const double* um = state_.u_prev.data.data();
  double* un = state_.u_next.data.data();
  const ScalarField& cX = medium_.c2[0];
  const ScalarField& cY = medium_.c2[1];
  const ScalarField& cZ = medium_.c2[2];
  const std::size_t sx = static_cast<std::size_t>(n1);
  const std::size_t sxy = static_cast<std::size_t>(n1) * n2;

  auto at = [&](int i, int j, int k) {
    return static_cast<std::size_t>(i) + sx * j + sxy * k;
  };

  const Box& pb = plain_box_;
  if (!pb.empty()) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int k = pb.lo[2]; k <= pb.hi[2]; ++k) {
      const int km = node_m_[2][k];
      const int kp = node_p_[2][k];
      const int ckm = cell_m_[2][k];
      for (int j = pb.lo[1]; j <= pb.hi[1]; ++j) {
        const int jm = node_m_[1][j];
        const int jp = node_p_[1][j];
        const int cjm = cell_m_[1][j];
        for (int i = pb.lo[0]; i <= pb.hi[0]; ++i) {
          const int im = node_m_[0][i];
          const int ip = node_p_[0][i];
          const int cim = cell_m_[0][i];
          const double u = uc[at(i, j, k)];
          const double lapx = (cX(i, j, k) * uc[at(ip, j, k)] -
                               (cX(i, j, k) + cX(cim, j, k)) * u +
                               cX(cim, j, k) * uc[at(im, j, k)]) *
                              inv_dx1_sq;
          const double lapy = (cY(i, j, k) * uc[at(i, jp, k)] -
                               (cY(i, j, k) + cY(i, cjm, k)) * u +
                               cY(i, cjm, k) * uc[at(i, jm, k)]) *
                              inv_dx2_sq;
          const double lapz = (cZ(i, j, k) * uc[at(i, j, kp)] -
                               (cZ(i, j, k) + cZ(i, j, ckm)) * u +
                               cZ(i, j, ckm) * uc[at(i, j, km)]) *
                              inv_dx3_sq;
          const double lap = (lapx + lapy) + lapz;
          un[at(i, j, k)] = 2.0 * u - um[at(i, j, k)] + dt2 * lap;
        }
      }
    }
  }

  const BlockField& phi = state_.phi;
  const BlockField& psi = state_.psi;
  for (const Box& fb : frame_boxes_) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int k = fb.lo[2]; k <= fb.hi[2]; ++k) {
      const int km = node_m_[2][k];
      const int kp = node_p_[2][k];
      const int ckm = cell_m_[2][k];
      const double z3 = zn_[2][k];
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
          const double S = (z1 + z2) + z3;
          const double Q = (z1 * z2 + z2 * z3) + z3 * z1;
          const double P = (z1 * z2) * z3;
          const double u = uc[at(i, j, k)];

          const double lapx = (cX(i, j, k) * uc[at(ip, j, k)] -
                               (cX(i, j, k) + cX(cim, j, k)) * u +
                               cX(cim, j, k) * uc[at(im, j, k)]) *
                              inv_dx1_sq;
          const double lapy = (cY(i, j, k) * uc[at(i, jp, k)] -
                               (cY(i, j, k) + cY(i, cjm, k)) * u +
                               cY(i, cjm, k) * uc[at(i, jm, k)]) *
                              inv_dx2_sq;
          const double lapz = (cZ(i, j, k) * uc[at(i, j, kp)] -
                               (cZ(i, j, k) + cZ(i, j, ckm)) * u +
                               cZ(i, j, ckm) * uc[at(i, j, km)]) *
                              inv_dx3_sq;
          const double lap = (lapx + lapy) + lapz;

          const double p1_pp =
              0.25 * ((phi.value(0, i, cjm, ckm) + phi.value(0, i, cjm, k)) +
                      (phi.value(0, i, j, ckm) + phi.value(0, i, j, k)));
          const double p1_mp =
              0.25 * ((phi.value(0, cim, cjm, ckm) + phi.value(0, cim, cjm, k)) +
                      (phi.value(0, cim, j, ckm) + phi.value(0, cim, j, k)));
          const double p2_pp =
              0.25 * ((phi.value(1, cim, j, ckm) + phi.value(1, cim, j, k)) +
                      (phi.value(1, i, j, ckm) + phi.value(1, i, j, k)));
          const double p2_mp =
              0.25 * ((phi.value(1, cim, cjm, ckm) + phi.value(1, cim, cjm, k)) +
                      (phi.value(1, i, cjm, ckm) + phi.value(1, i, cjm, k)));
          const double p3_pp =
              0.25 * ((phi.value(2, cim, cjm, k) + phi.value(2, cim, j, k)) +
                      (phi.value(2, i, cjm, k) + phi.value(2, i, j, k)));
          const double p3_mp =
              0.25 * ((phi.value(2, cim, cjm, ckm) + phi.value(2, cim, j, ckm)) +
                      (phi.value(2, i, cjm, ckm) + phi.value(2, i, j, ckm)));
          const double divx = (p1_pp - p1_mp) * inv_dx1;
          const double divy = (p2_pp - p2_mp) * inv_dx2;
          const double divz = (p3_pp - p3_mp) * inv_dx3;
          const double div = (divx + divy) + divz;

          double rhs = lap + div;
          if (P != 0.0) {
            const double psibar = psi.value(0, i, j, k) - (0.5 * dt_) * u;
            rhs -= P * psibar;
          }
          rhs -= Q * u;
          const double numer = (2.0 * u - um[at(i, j, k)]) * inv_dt2 +
                               S * half_inv_dt * um[at(i, j, k)] + rhs;
          const double denom = inv_dt2 + S * half_inv_dt;
          un[at(i, j, k)] = numer / denom;
        }
      }
    }
  }

  if (source_) {
    const double t = static_cast<double>(state_.n) * dt_;
    const double val = source_->value(grid_, t);
    const std::array<int, 3> sn = source_->node(grid_);
    const double S = (zn_[0][sn[0]] + zn_[1][sn[1]]) + zn_[2][sn[2]];
    const double denom = inv_dt2 + S * half_inv_dt;
    un[at(sn[0], sn[1], sn[2])] += val / denom;
  }

  sync_mirror(state_.u_next);
}

void Stepper3D::step_phi() {
  const double inv_dt = 1.0 / dt_;
  const double inv_dx1 = 1.0 / grid_.dx[0];
  const double inv_dx2 = 1.0 / grid_.dx[1];
  const double inv_dx3 = 1.0 / grid_.dx[2];
  const int n1 = grid_.n[0];
  const int n2 = grid_.n[1];

  const double* un = state_.u_next.data.data();
  const double* uc = state_.u_curr.data.data();
  const ScalarField& cX = medium_.c2[0];
  const ScalarField& cY = medium_.c2[1];
  const ScalarField& cZ = medium_.c2[2];
  const BlockField& psi = state_.psi;
  const std::size_t sx = static_cast<std::size_t>(n1);
  const std::size_t sxy = static_cast<std::size_t>(n1) * n2;

  auto at = [&](int i, int j, int k) {
    return static_cast<std::size_t>(i) + sx * j + sxy * k;
  };
  auto tavg_n = [&](const double* f, int i, int j0, int j1, int k0, int k1) {
    return 0.25 * ((f[at(i, j0, k0)] + f[at(i, j0, k1)]) +
                   (f[at(i, j1, k0)] + f[at(i, j1, k1)]));
  };

  for (BlockField::Block& blk : state_.phi.blocks()) {
    const Box& b = blk.box;
    const int bn1 = blk.n1;
    const int bn2 = blk.n2;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int ck = b.lo[2]; ck <= b.hi[2]; ++ck) {
      const double z3h = zc_[2][ck];
      const int ckp = ck + 1;
      for (int cj = b.lo[1]; cj <= b.hi[1]; ++cj) {
        const double z2h = zc_[1][cj];
        const int cjp = cj + 1;
        double* p1 = blk.data.data() +
                     static_cast<std::size_t>(bn1) *
                         ((cj - b.lo[1]) +
                          static_cast<std::size_t>(bn2) * (ck - b.lo[2])) -
                     b.lo[0];
        double* p2 = p1 + blk.comp_stride;
        double* p3 = p2 + blk.comp_stride;
        for (int ci = b.lo[0]; ci <= b.hi[0]; ++ci) {
          const double z1h = zc_[0][ci];
          const int cip = ci + 1;

          // phi_1: difference along x1 of the (x2, x3) face averages
          {
            const double tun_i = tavg_n(un, ci, cj, cjp, ck, ckp);
            const double tun_ip = tavg_n(un, cip, cj, cjp, ck, ckp);
            const double tuc_i = tavg_n(uc, ci, cj, cjp, ck, ckp);
            const double tuc_ip = tavg_n(uc, cip, cj, cjp, ck, ckp);
            const double D1u = 0.5 * ((tun_ip - tun_i) + (tuc_ip - tuc_i)) * inv_dx1;
            const double c2c = 0.25 * ((cX(ci, cj, ck) + cX(ci, cj, ckp)) +
                                       (cX(ci, cjp, ck) + cX(ci, cjp, ckp)));
            const double g2 = (z2h + z3h) - z1h;
            double drive = (g2 * c2c) * D1u;
            const double g3 = z2h * z3h;
            if (g3 != 0.0) {
              const double tps_i =
                  0.25 * ((psi.value(0, ci, cj, ck) + psi.value(0, ci, cj, ckp)) +
                          (psi.value(0, ci, cjp, ck) + psi.value(0, ci, cjp, ckp)));
              const double tps_ip =
                  0.25 * ((psi.value(0, cip, cj, ck) + psi.value(0, cip, cj, ckp)) +
                          (psi.value(0, cip, cjp, ck) + psi.value(0, cip, cjp, ckp)));
              const double D1psi = (tps_ip - tps_i) * inv_dx1;
              drive += (g3 * c2c) * D1psi;
            }
            p1[ci] = ((inv_dt - 0.5 * z1h) * p1[ci] + drive) / (inv_dt + 0.5 * z1h);
          }

          // phi_2: difference along x2 of the (x3, x1) face averages
          {
            const double tun_j = 0.25 * ((un[at(ci, cj, ck)] + un[at(ci, cj, ckp)]) +
                                         (un[at(cip, cj, ck)] + un[at(cip, cj, ckp)]));
            const double tun_jp = 0.25 * ((un[at(ci, cjp, ck)] + un[at(ci, cjp, ckp)]) +
                                          (un[at(cip, cjp, ck)] + un[at(cip, cjp, ckp)]));
            const double tuc_j = 0.25 * ((uc[at(ci, cj, ck)] + uc[at(ci, cj, ckp)]) +
                                         (uc[at(cip, cj, ck)] + uc[at(cip, cj, ckp)]));
            const double tuc_jp = 0.25 * ((uc[at(ci, cjp, ck)] + uc[at(ci, cjp, ckp)]) +
                                          (uc[at(cip, cjp, ck)] + uc[at(cip, cjp, ckp)]));
            const double D2u = 0.5 * ((tun_jp - tun_j) + (tuc_jp - tuc_j)) * inv_dx2;
            const double c2c = 0.25 * ((cY(ci, cj, ck) + cY(ci, cj, ckp)) +
                                       (cY(cip, cj, ck) + cY(cip, cj, ckp)));
            const double g2 = (z3h + z1h) - z2h;
            double drive = (g2 * c2c) * D2u;
            const double g3 = z3h * z1h;
            if (g3 != 0.0) {
              const double tps_j =
                  0.25 * ((psi.value(0, ci, cj, ck) + psi.value(0, ci, cj, ckp)) +
                          (psi.value(0, cip, cj, ck) + psi.value(0, cip, cj, ckp)));
              const double tps_jp =
                  0.25 * ((psi.value(0, ci, cjp, ck) + psi.value(0, ci, cjp, ckp)) +
                          (psi.value(0, cip, cjp, ck) + psi.value(0, cip, cjp, ckp)));
              const double D2psi = (tps_jp - tps_j) * inv_dx2;
              drive += (g3 * c2c) * D2psi;
            }
            p2[ci] = ((inv_dt - 0.5 * z2h) * p2[ci] + drive) / (inv_dt + 0.5 * z2h);
          }

          // phi_3: difference along x3 of the (x1, x2) face averages
          {
            const double tun_k = 0.25 * ((un[at(ci, cj, ck)] + un[at(ci, cjp, ck)]) +
                                         (un[at(cip, cj, ck)] + un[at(cip, cjp, ck)]));
            const double tun_kp = 0.25 * ((un[at(ci, cj, ckp)] + un[at(ci, cjp, ckp)]) +
                                          (un[at(cip, cj, ckp)] + un[at(cip, cjp, ckp)]));
            const double tuc_k = 0.25 * ((uc[at(ci, cj, ck)] + uc[at(ci, cjp, ck)]) +
                                         (uc[at(cip, cj, ck)] + uc[at(cip, cjp, ck)]));
            const double tuc_kp = 0.25 * ((uc[at(ci, cj, ckp)] + uc[at(ci, cjp, ckp)]) +
                                          (uc[at(cip, cj, ckp)] + uc[at(cip, cjp, ckp)]));
            const double D3u = 0.5 * ((tun_kp - tun_k) + (tuc_kp - tuc_k)) * inv_dx3;
            const double c2c = 0.25 * ((cZ(ci, cj, ck) + cZ(ci, cjp, ck)) +
                                       (cZ(cip, cj, ck) + cZ(cip, cjp, ck)));
            const double g2 = (z1h + z2h) - z3h;
            double drive = (g2 * c2c) * D3u;
            const double g3 = z1h * z2h;
            if (g3 != 0.0) {
              const double tps_k =
                  0.25 * ((psi.value(0, ci, cj, ck) + psi.value(0, ci, cjp, ck)) +
                          (psi.value(0, cip, cj, ck) + psi.value(0, cip, cjp, ck)));
              const double tps_kp =
                  0.25 * ((psi.value(0, ci, cj, ckp) + psi.value(0, ci, cjp, ckp)) +
                          (psi.value(0, cip, cj, ckp) + psi.value(0, cip, cjp, ckp)));
              const double D3psi = (tps_kp - tps_k) * inv_dx3;
              drive += (g3 * c2c) * D3psi;
            }
            p3[ci] = ((inv_dt - 0.5 * z3h) * p3[ci] + drive) / (inv_dt + 0.5 * z3h);
          }
        }
      }
    }
  }
}

void Stepper3D::rotate() {
  std::swap(state_.u_prev.data, state_.u_curr.data);
  std::swap(state_.u_curr.data, state_.u_next.data);
  state_.n += 1;
}

void Stepper3D::step() {
  step_psi();
  step_u();
  step_phi();
  rotate();
}

double Stepper3D::max_abs_u() const {
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

double Stepper3D::max_abs_u_interior() const {
  double m = 0.0;
  const ScalarField& u = state_.u_curr;
  for (int k = grid_.interior_lo(2); k <= grid_.interior_hi(2); ++k)
    for (int j = grid_.interior_lo(1); j <= grid_.interior_hi(1); ++j)
      for (int i = grid_.interior_lo(0); i <= grid_.interior_hi(0); ++i)
        m = std::max(m, std::abs(u(i, j, k)));
  return m;
}

RunSummary run3d(const SimulationConfig& cfg, const SnapshotCallback3D& on_snapshot,
                 const std::vector<double>& extra_snapshot_times) {
  const auto t0 = std::chrono::steady_clock::now();

  MediumModel medium = cfg.make_medium();
  DampingProfile damping = sample_profile(cfg.grid, cfg.zeta_bar);
  const double dt = cfg.resolve_dt(medium.c_max);

  Stepper3D stepper(cfg.grid, medium, damping, dt);
  stepper.set_source(cfg.source);

  ScalarField u0(cfg.grid.n[0], cfg.grid.n[1], cfg.grid.n[2]);
  ScalarField v0(cfg.grid.n[0], cfg.grid.n[1], cfg.grid.n[2]);
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

  const bool plain = cfg.grid.n_layer[0] == 0 && cfg.grid.n_layer[1] == 0 &&
                     cfg.grid.n_layer[2] == 0;

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
  sum.final_l2 = std::sqrt(l2 * cfg.grid.dx[0] * cfg.grid.dx[1] * cfg.grid.dx[2]);

  sum.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sum;
}

} // namespace pmlwave
