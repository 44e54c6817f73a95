#include "pmlwave/stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pmlwave/errors.hpp"

namespace pmlwave {

namespace {

void require_params(double c, const double* zeta, int count) {
  if (!(c > 0.0)) throw ConfigError("wave speed must be positive");
  for (int i = 0; i < count; ++i)
    if (zeta[i] < 0.0) throw ConfigError("damping coefficients must be nonnegative");
}

} // namespace

SymbolMatrices assemble_2d(double c, double zeta1, double zeta2) {
  const double z[2] = {zeta1, zeta2};
  require_params(c, z, 2);

  SymbolMatrices m;
  m.dim = 2;
  m.c = c;
  m.zeta = {zeta1, zeta2, 0.0};
  const double c2 = c * c;

  // State ordering (u, phi1, phi2, v1, v2) with v = velocity potential
  // gradient flux: u_t = -zeta2*u + div v, v_t = -zeta1*v + c^2 grad u + phi.
  m.A.n = m.B.n = m.C.n = m.D.n = 5;
  m.A.at(0, 3) = 1.0;
  m.A.at(1, 0) = c2 * (zeta2 - zeta1);
  m.A.at(3, 0) = c2;

  m.B.at(0, 4) = 1.0;
  m.B.at(2, 0) = c2 * (zeta1 - zeta2);
  m.B.at(4, 0) = c2;

  // Lower-order part: diagonal decay rates of (u, phi1, phi2, v1, v2).
  m.D.at(0, 0) = -zeta2;
  m.D.at(1, 1) = -zeta1;
  m.D.at(2, 2) = -zeta2;
  m.D.at(3, 3) = -zeta1;
  m.D.at(4, 4) = -zeta1;
  return m;
}

SymbolMatrices assemble_3d(double c, double zeta1, double zeta2, double zeta3) {
  const double z[3] = {zeta1, zeta2, zeta3};
  require_params(c, z, 3);

  SymbolMatrices m;
  m.dim = 3;
  m.c = c;
  m.zeta = {zeta1, zeta2, zeta3};
  const double c2 = c * c;

  // State ordering (u, phi1, phi2, phi3, v1, v2, v3, psi). The derivative
  // couplings carry the diagonal Gamma2 = diag(z2+z3-z1, ...) entries on the
  // phi rows (u column) and the Gamma3 = diag(z2*z3, ...) entries on the
  // phi rows (psi column).
  m.A.n = m.B.n = m.C.n = m.D.n = 8;
  m.A.at(0, 4) = 1.0;
  m.A.at(1, 0) = c2 * (zeta2 + zeta3 - zeta1);
  m.A.at(1, 7) = zeta2 * zeta3;
  m.A.at(4, 0) = c2;

  m.B.at(0, 5) = 1.0;
  m.B.at(2, 0) = c2 * (zeta3 + zeta1 - zeta2);
  m.B.at(2, 7) = zeta3 * zeta1;
  m.B.at(5, 0) = c2;

  m.C.at(0, 6) = 1.0;
  m.C.at(3, 0) = c2 * (zeta1 + zeta2 - zeta3);
  m.C.at(3, 7) = zeta1 * zeta2;
  m.C.at(6, 0) = c2;

  // Lower-order part, assembled row by row from the undifferentiated terms
  // of the first-order form:
  //   u_t   = -zeta2*u + div v - zeta3*psi   -> row u: -zeta2 (u), -zeta3 (psi)
  //   phi_t = Gamma1*phi + ...               -> rows phi_i: -zeta_i
  //   v_t   = -zeta1*v + ...                 -> rows v_i: -zeta1
  //   psi_t = u                              -> row psi: +1 (u)
  m.D.at(0, 0) = -zeta2;
  m.D.at(0, 7) = -zeta3;
  m.D.at(1, 1) = -zeta1;
  m.D.at(2, 2) = -zeta2;
  m.D.at(3, 3) = -zeta3;
  m.D.at(4, 4) = -zeta1;
  m.D.at(5, 5) = -zeta1;
  m.D.at(6, 6) = -zeta1;
  m.D.at(7, 0) = 1.0;
  return m;
}

EigenReport symbol_eigenvalues(const SymbolMatrices& m,
                               const std::array<double, 3>& k,
                               bool include_lower) {
  const int n = m.A.n;
  const std::complex<double> I(0.0, 1.0);

  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double real_part = k[0] * m.A.at(i, j) + k[1] * m.B.at(i, j);
      if (m.dim == 3) real_part += k[2] * m.C.at(i, j);
      P(i, j) = I * real_part;
      if (include_lower) P(i, j) += m.D.at(i, j);
    }

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(P, false);
  if (ces.info() != Eigen::Success)
    throw std::runtime_error("symbol eigendecomposition did not converge");

  EigenReport rep;
  rep.k = k;
  rep.include_lower = include_lower;
  rep.eigenvalues.assign(ces.eigenvalues().data(),
                         ces.eigenvalues().data() + n);

  const double knorm = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
  const double tol_cluster = 1e-8 * (1.0 + knorm * m.c);

  // Greedy clustering against running cluster means.
  std::vector<std::vector<std::complex<double>>> groups;
  for (const std::complex<double>& ev : rep.eigenvalues) {
    bool placed = false;
    for (auto& g : groups) {
      std::complex<double> mean(0.0, 0.0);
      for (const auto& v : g) mean += v;
      mean /= static_cast<double>(g.size());
      if (std::abs(ev - mean) <= tol_cluster) {
        g.push_back(ev);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({ev});
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd_p(P);
  const double p_norm = svd_p.singularValues().size() > 0
                            ? svd_p.singularValues()(0)
                            : 0.0;
  const double tol_rank = 1e-8 * p_norm;

  int geo_sum = 0;
  for (const auto& g : groups) {
    EigenCluster cl;
    std::complex<double> mean(0.0, 0.0);
    for (const auto& v : g) mean += v;
    mean /= static_cast<double>(g.size());
    cl.value = mean;
    cl.algebraic = static_cast<int>(g.size());

    Eigen::MatrixXcd shifted = P - mean * Eigen::MatrixXcd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > tol_rank) ++rank;
    cl.geometric = n - rank;
    geo_sum += cl.geometric;

    rep.max_re_clustered = std::max(rep.max_re_clustered, std::abs(mean.real()));
    rep.clusters.push_back(cl);
  }
  for (const auto& ev : rep.eigenvalues)
    rep.max_re = std::max(rep.max_re, std::abs(ev.real()));
  rep.complete = (geo_sum == n);
  return rep;
}

ScanResult stability_scan(int dim, int n_samples, double c, double zeta_max,
                          double k_max, std::uint64_t seed,
                          bool include_lower) {
  if (dim != 2 && dim != 3) throw ConfigError("scan dimension must be 2 or 3");
  if (n_samples <= 0) throw ConfigError("scan sample count must be positive");
  if (!(zeta_max >= 0.0)) throw ConfigError("scan zeta_max must be nonnegative");
  if (!(k_max > 0.0)) throw ConfigError("scan k_max must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> zdist(0.0, zeta_max);
  std::uniform_real_distribution<double> kdist(-k_max, k_max);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  ScanResult res;
  res.samples.reserve(n_samples);

  for (int s = 0; s < n_samples; ++s) {
    ScanSample sam;
    for (int m = 0; m < dim; ++m) {
      const double z = (coin(rng) < 0.25) ? 0.0 : zdist(rng);
      sam.zeta[m] = z;
      if (z > 0.0) ++sam.active_zetas;
    }
    double knorm = 0.0;
    do {
      for (int m = 0; m < dim; ++m) sam.k[m] = kdist(rng);
      knorm = std::sqrt(sam.k[0] * sam.k[0] + sam.k[1] * sam.k[1] +
                        sam.k[2] * sam.k[2]);
    } while (knorm < 0.1 * k_max);

    const SymbolMatrices m =
        dim == 2 ? assemble_2d(c, sam.zeta[0], sam.zeta[1])
                 : assemble_3d(c, sam.zeta[0], sam.zeta[1], sam.zeta[2]);
    const EigenReport rep = symbol_eigenvalues(m, sam.k, include_lower);

    sam.max_re_clustered = rep.max_re_clustered;
    sam.max_re = rep.max_re;
    sam.complete = rep.complete;

    res.worst_re_clustered =
        std::max(res.worst_re_clustered, rep.max_re_clustered / (c * knorm));

    const bool expect_complete = (dim == 2) || (sam.active_zetas <= 1);
    if (rep.complete != expect_complete) res.completeness_pattern_ok = false;

    res.samples.push_back(sam);
  }
  return res;
}

} // namespace pmlwave
