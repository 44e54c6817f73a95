#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

namespace pmlwave {

/// Small dense real matrix (up to 8x8), row-major.
struct SmallMatrix {
  int n = 0;
  std::array<double, 64> a{};

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// First-order-system matrices of the layer equations for one frozen
/// damping triple: U_t = A U_x1 + B U_x2 [+ C U_x3] + D U.
/// 2D state (u, phi1, phi2, v1, v2); 3D state (u, phi1, phi2, phi3,
/// v1, v2, v3, psi).
struct SymbolMatrices {
  int dim = 2;
  double c = 1.0;
  std::array<double, 3> zeta{};
  SmallMatrix A, B, C; // C unused in 2D
  SmallMatrix D;       // lower-order (undifferentiated) part
};

SymbolMatrices assemble_2d(double c, double zeta1, double zeta2);
SymbolMatrices assemble_3d(double c, double zeta1, double zeta2, double zeta3);

/// One eigenvalue cluster of the symbol: representative value (cluster
/// mean), algebraic multiplicity, geometric multiplicity (dimension minus
/// numerical rank of P - lambda*I).
struct EigenCluster {
  std::complex<double> value;
  int algebraic = 0;
  int geometric = 0;
};

struct EigenReport {
  std::array<double, 3> k{};
  bool include_lower = false;
  std::vector<std::complex<double>> eigenvalues; // raw solver output
  std::vector<EigenCluster> clusters;
  double max_re = 0.0;           // largest |Re| over raw eigenvalues
  double max_re_clustered = 0.0; // largest |Re| over cluster means
  bool complete = false;         // sum of geometric multiplicities == dim
};

/// Eigen-decompose the symbol P(ik) = i*(k1 A + k2 B [+ k3 C]) [+ D].
/// Clustering tolerance 1e-8*(1 + |k|*c); rank tolerance 1e-8*||P||_2.
EigenReport symbol_eigenvalues(const SymbolMatrices& m,
                               const std::array<double, 3>& k,
                               bool include_lower = false);

struct ScanSample {
  std::array<double, 3> zeta{};
  std::array<double, 3> k{};
  double max_re_clustered = 0.0;
  double max_re = 0.0;
  bool complete = false;
  int active_zetas = 0;
};

struct ScanResult {
  std::vector<ScanSample> samples;
  double worst_re_clustered = 0.0; // max over samples of |Re| cluster mean,
                                   // normalized by c*|k|
  // 2D: every sample complete. 3D: complete exactly when at most one
  // damping component is active (random k has no zero component).
  bool completeness_pattern_ok = true;
};

/// Randomized verification sweep of the principal symbol over
/// zeta in [0, zeta_max]^dim (each component zeroed with probability 1/4)
/// and k uniform in [-k_max, k_max]^dim (resampled if |k| < 0.1*k_max).
ScanResult stability_scan(int dim, int n_samples, double c, double zeta_max,
                          double k_max, std::uint64_t seed,
                          bool include_lower = false);

} // namespace pmlwave
