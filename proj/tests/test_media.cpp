#include "doctest.h"

#include <cmath>

#include "pmlwave/errors.hpp"
#include "pmlwave/grid.hpp"
#include "pmlwave/media.hpp"

using namespace pmlwave;

TEST_SUITE("media") {

TEST_CASE("source amplitude frozen values") {
  CHECK(source_amplitude(0.0, 10.0) == 0.010209747723910213);
  CHECK(source_amplitude(0.1, 10.0) == 0.0); // zero crossing at t = 1/f0
  // antisymmetric about the crossing
  CHECK(source_amplitude(0.15, 10.0) ==
        doctest::Approx(-source_amplitude(0.05, 10.0)).epsilon(1e-12));
  // pulse is effectively over by t = 3/f0
  CHECK(std::abs(source_amplitude(0.3, 10.0)) < 1e-14);
}

TEST_CASE("point source delta normalization") {
  GridSpec g = build_grid(2, {0.5, 0.5}, {0.1, 0.1}, {0.002, 0.002});
  SourceTerm src;
  src.location = {0.0, 0.0, 0.0};
  src.f0 = 10.0;
  auto node = src.node(g);
  CHECK(node[0] == 300);
  CHECK(node[1] == 300);
  CHECK(src.value(g, 0.0) ==
        doctest::Approx(source_amplitude(0.0, 10.0) * 250000.0).epsilon(1e-12));

  GridSpec g3 = build_grid(3, {0.5, 0.5, 0.5}, {0.1, 0.1, 0.1},
                           {0.005, 0.005, 0.005});
  SourceTerm s3;
  s3.location = {0.0, 0.0, 0.0};
  CHECK(s3.value(g3, 0.0) ==
        doctest::Approx(source_amplitude(0.0, 10.0) / (0.005 * 0.005 * 0.005))
            .epsilon(1e-12));
}

TEST_CASE("layered speed frozen values") {
  CHECK(layered_speed(0.475, 0.95) == 1.4091549430918953);
  CHECK(layered_speed(-2.0, 0.95) == 0.5);
  CHECK(layered_speed(-0.95, 0.95) == 0.5);
  CHECK(layered_speed(0.95, 0.95) == 1.5);
  CHECK(layered_speed(7.0, 0.95) == 1.5);
  // continuous across the band edges
  CHECK(layered_speed(-0.95 + 1e-9, 0.95) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(layered_speed(0.95 - 1e-9, 0.95) == doctest::Approx(1.5).epsilon(1e-7));
  CHECK_THROWS_AS(layered_speed(0.0, 0.0), ConfigError);
}

TEST_CASE("bump frozen values") {
  CHECK(bump_initial(0.0, 1.0 / 6.0) == 0.26214400000000015);
  CHECK(bump_initial(0.4, 0.1) == 0.0);
  CHECK(bump_initial(-0.4, 0.1) == 0.0);
  CHECK(bump_initial(0.7, 0.1) == 0.0);
  CHECK(bump_initial(0.0, -1.0 / 6.0) == -bump_initial(0.0, 1.0 / 6.0));
}

TEST_CASE("constant medium") {
  GridSpec g = build_grid(2, {0.5, 0.5}, {0.1, 0.1}, {0.01, 0.01});
  MediumModel med = constant_medium(g, 2.0);
  CHECK(med.c_max == 2.0);
  CHECK(med.c_min == 2.0);
  CHECK(med.c2[0].n1 == g.n[0] - 1);
  CHECK(med.c2[0].n2 == g.n[1]);
  CHECK(med.c2[1].n1 == g.n[0]);
  CHECK(med.c2[1].n2 == g.n[1] - 1);
  CHECK(med.c2[0](17, 42) == 4.0);
  CHECK(med.c2[1](3, 100) == 4.0);
}

TEST_CASE("layered medium is constant along the layer normal") {
  GridSpec g = build_grid(2, {1.0, 1.0}, {0.2, 0.2}, {0.02, 0.02});
  MediumModel med = layered_medium(g, 0.95);
  CHECK(med.c_max == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(med.c_min == doctest::Approx(0.5).epsilon(1e-12));
  // evaluation clamps x2 to the interior box, so samples in the x2 layer
  // repeat the interface value
  int j_int = g.interior_hi(1);
  for (int j = j_int; j < g.n[1]; ++j)
    CHECK(med.c2[0](25, j) == med.c2[0](25, j_int));
}

TEST_CASE("initial data sampling") {
  GridSpec g = build_grid(2, {1.0, 1.0}, {0.2, 0.2}, {0.02, 0.02});
  InitialCondition ic;
  ic.kind = InitialCondition::Kind::bump2d;
  ScalarField u0;
  ic.sample_u0(g, u0);
  CHECK(u0.n1 == g.n[0]);
  int i0 = g.nearest_node(0, 0.0);
  int j6 = g.nearest_node(1, 1.0 / 6.0);
  CHECK(u0(i0, j6) ==
        doctest::Approx(bump_initial(0.0, g.coord(1, j6))).epsilon(1e-12));
  // supported strictly inside the interior box
  for (int j = 0; j < g.n[1]; ++j) {
    CHECK(u0(g.interior_lo(0), j) == 0.0);
    CHECK(u0(g.interior_hi(0), j) == 0.0);
  }

  ic.kind = InitialCondition::Kind::zero;
  ic.sample_u0(g, u0);
  for (double v : u0.data) CHECK(v == 0.0);
}

} // TEST_SUITE
