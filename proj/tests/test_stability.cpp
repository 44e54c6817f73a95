#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "pmlwave/errors.hpp"
#include "pmlwave/stability.hpp"

using namespace pmlwave;

namespace {

int nonzeros(const SmallMatrix& m) {
  int count = 0;
  for (int r = 0; r < m.n; ++r)
    for (int c = 0; c < m.n; ++c)
      if (m.at(r, c) != 0.0) ++count;
  return count;
}

std::vector<double> sorted_imag(const EigenReport& rep) {
  std::vector<double> v;
  for (const auto& ev : rep.eigenvalues) v.push_back(ev.imag());
  std::sort(v.begin(), v.end());
  return v;
}

} // namespace

TEST_SUITE("stability") {

TEST_CASE("undamped 2d symbol: eigenvalues 0 and +-i c |k|") {
  SymbolMatrices m = assemble_2d(1.0, 0.0, 0.0);
  EigenReport rep = symbol_eigenvalues(m, {3.0, 4.0, 0.0});
  REQUIRE(rep.eigenvalues.size() == 5);
  CHECK(rep.max_re < 1e-12);
  CHECK(rep.complete);

  // |k| = 5: clusters at -5i, 0, +5i
  std::vector<double> centers;
  for (const auto& cl : rep.clusters) centers.push_back(cl.value.imag());
  std::sort(centers.begin(), centers.end());
  REQUIRE(centers.size() == 3);
  CHECK(centers[0] == doctest::Approx(-5.0).epsilon(1e-10));
  CHECK(centers[1] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(centers[2] == doctest::Approx(5.0).epsilon(1e-10));

  int total = 0;
  for (const auto& cl : rep.clusters) total += cl.algebraic;
  CHECK(total == 5);
}

TEST_CASE("symbol matrices stay sparse") {
  SymbolMatrices m0 = assemble_2d(1.3, 0.0, 0.0);
  CHECK(nonzeros(m0.A) == 2);
  CHECK(nonzeros(m0.B) == 2);

  SymbolMatrices m1 = assemble_2d(1.3, 2.0, 5.0);
  CHECK(nonzeros(m1.A) <= 3);
  CHECK(nonzeros(m1.B) <= 3);

  SymbolMatrices m3 = assemble_3d(1.0, 0.0, 0.0, 0.0);
  CHECK(nonzeros(m3.A) == 2);
  SymbolMatrices m4 = assemble_3d(1.0, 1.0, 2.0, 3.0);
  CHECK(nonzeros(m4.A) <= 4);
  CHECK(nonzeros(m4.B) <= 4);
  CHECK(nonzeros(m4.C) <= 4);
}

TEST_CASE("completeness pattern follows the active damping count") {
  // 2d: complete for every admissible zeta
  CHECK(symbol_eigenvalues(assemble_2d(1.0, 3.0, 7.0), {2.0, -1.0, 0.0})
            .complete);
  CHECK(symbol_eigenvalues(assemble_2d(2.0, 0.0, 4.0), {1.0, 1.0, 0.0})
            .complete);

  // 3d: complete iff at most one component is active
  CHECK(symbol_eigenvalues(assemble_3d(1.0, 0.0, 0.0, 0.0), {1.0, 2.0, 3.0})
            .complete);
  CHECK(symbol_eigenvalues(assemble_3d(1.0, 5.0, 0.0, 0.0), {1.0, 2.0, 3.0})
            .complete);
  CHECK_FALSE(
      symbol_eigenvalues(assemble_3d(1.0, 5.0, 4.0, 0.0), {1.0, 2.0, 3.0})
          .complete);
  CHECK_FALSE(
      symbol_eigenvalues(assemble_3d(1.0, 5.0, 4.0, 3.0), {1.0, 2.0, 3.0})
          .complete);
}

TEST_CASE("purely imaginary spectrum for nonzero damping") {
  EigenReport rep =
      symbol_eigenvalues(assemble_2d(1.0, 6.0, 2.5), {-4.0, 7.0, 0.0});
  CHECK(rep.max_re_clustered < 1e-10 * std::hypot(-4.0, 7.0));

  EigenReport r3 =
      symbol_eigenvalues(assemble_3d(2.0, 1.0, 2.0, 3.0), {1.0, -2.0, 2.0});
  CHECK(r3.max_re_clustered < 1e-10 * 2.0 * 3.0);
  REQUIRE(r3.eigenvalues.size() == 8);
}

TEST_CASE("spectrum symmetric under lambda -> -conj(lambda)") {
  EigenReport rep =
      symbol_eigenvalues(assemble_3d(1.5, 2.0, 0.5, 1.0), {1.0, 2.0, -1.0});
  for (const auto& ev : rep.eigenvalues) {
    // the matrices are real, so -conj(lambda) is an eigenvalue too
    double best = 1e9;
    for (const auto& other : rep.eigenvalues)
      best = std::min(best, std::abs(other + std::conj(ev)));
    CHECK(best < 1e-9);
  }
}

TEST_CASE("eigenvalues scale linearly with k when undamped") {
  SymbolMatrices m = assemble_3d(1.0, 0.0, 0.0, 0.0);
  auto base = sorted_imag(symbol_eigenvalues(m, {1.0, 2.0, 2.0}));
  auto twice = sorted_imag(symbol_eigenvalues(m, {2.0, 4.0, 4.0}));
  REQUIRE(base.size() == twice.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(twice[i] == doctest::Approx(2.0 * base[i]).epsilon(1e-9));
  // |k| = 3 for the base sample
  CHECK(base.back() == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("lower-order term is optional and harmless at zero damping") {
  SymbolMatrices m = assemble_2d(1.0, 0.0, 0.0);
  auto plain = sorted_imag(symbol_eigenvalues(m, {3.0, 4.0, 0.0}, false));
  auto lower = sorted_imag(symbol_eigenvalues(m, {3.0, 4.0, 0.0}, true));
  REQUIRE(plain.size() == lower.size());
  for (std::size_t i = 0; i < plain.size(); ++i)
    CHECK(lower[i] == doctest::Approx(plain[i]).epsilon(1e-10));

  // with damping the lower-order term moves eigenvalues off the axis
  EigenReport damped =
      symbol_eigenvalues(assemble_2d(1.0, 3.0, 0.0), {2.0, 2.0, 0.0}, true);
  CHECK(damped.max_re > 0.1);
}

TEST_CASE("scan: imaginary spectrum and the completeness pattern") {
  ScanResult r2 = stability_scan(2, 150, 1.0, 100.0, 50.0, 42);
  CHECK(r2.samples.size() == 150);
  CHECK(r2.worst_re_clustered < 1e-12);
  CHECK(r2.completeness_pattern_ok);
  for (const auto& s : r2.samples) CHECK(s.complete);

  ScanResult r3 = stability_scan(3, 150, 2.0, 80.0, 40.0, 43);
  CHECK(r3.worst_re_clustered < 1e-12);
  CHECK(r3.completeness_pattern_ok);
  bool saw_defective = false, saw_complete_damped = false;
  for (const auto& s : r3.samples) {
    CHECK(s.complete == (s.active_zetas <= 1));
    if (!s.complete) saw_defective = true;
    if (s.complete && s.active_zetas == 1) saw_complete_damped = true;
  }
  CHECK(saw_defective);
  CHECK(saw_complete_damped);

  // reproducible for a fixed seed
  ScanResult again = stability_scan(3, 150, 2.0, 80.0, 40.0, 43);
  REQUIRE(again.samples.size() == r3.samples.size());
  for (std::size_t i = 0; i < again.samples.size(); ++i) {
    CHECK(again.samples[i].k == r3.samples[i].k);
    CHECK(again.samples[i].zeta == r3.samples[i].zeta);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(assemble_2d(0.0, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(assemble_2d(1.0, -1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(assemble_3d(1.0, 1.0, 1.0, -2.0), ConfigError);
  CHECK_THROWS_AS(stability_scan(4, 10, 1.0, 1.0, 1.0, 1), ConfigError);
  CHECK_THROWS_AS(stability_scan(2, 0, 1.0, 1.0, 1.0, 1), ConfigError);
}

} // TEST_SUITE
