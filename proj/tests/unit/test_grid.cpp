#include <doctest.h>

#include <cmath>

#include "ra/grid.hpp"
#include "ra/rng.hpp"

using namespace ra;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TEST_CASE("cell centers of a three-cell unit interval") {
  Grid g = build_grid(Vec{{0.0}}, Vec{{1.0}}, VecI{{3}}, {false});
  CHECK(g.total_cells() == 3);
  CHECK(g.pitch[0] == doctest::Approx(1.0 / 3.0));
  CHECK(g.center(VecI{{0}})[0] == doctest::Approx(1.0 / 6.0));
  CHECK(g.center(VecI{{1}})[0] == doctest::Approx(0.5));
  CHECK(g.center(VecI{{2}})[0] == doctest::Approx(5.0 / 6.0));
  CHECK(g.nearest_flat(Vec{{0.32}}) == 0);
  CHECK(g.nearest_flat(Vec{{0.34}}) == 1);
}

TEST_CASE("flat index ordering: dimension 0 slowest") {
  Grid g = build_grid(Vec{{-1.0, 0.0}}, Vec{{2.0, 1.0}}, VecI{{7, 11}}, {false, false});
  CHECK(g.total_cells() == 77);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 11; ++j) {
      VecI idx{{i, j}};
      long flat = g.flat_index(idx);
      CHECK(flat == i * 11 + j);
      CHECK((g.multi_index(flat).array() == idx.array()).all());
    }
  CHECK_THROWS_AS(g.flat_index(VecI{{7, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(g.multi_index(77), std::invalid_argument);
}

TEST_CASE("nearest cell of each center is that cell") {
  Grid g = build_grid(Vec{{-1.0, 0.0, 2.0}}, Vec{{2.0, 1.0, 4.0}}, VecI{{7, 11, 5}},
                      {false, false, false});
  for (long c = 0; c < g.total_cells(); ++c) {
    bool oob = true;
    CHECK(g.nearest_flat(g.center(c), &oob) == c);
    CHECK(!oob);
  }
}

TEST_CASE("out-of-domain points clamp to the boundary cell and raise the flag") {
  Grid g = build_grid(Vec{{0.0}}, Vec{{1.0}}, VecI{{4}}, {false});
  bool oob = false;
  CHECK(g.nearest_flat(Vec{{-0.2}}, &oob) == 0);
  CHECK(oob);
  CHECK(g.nearest_flat(Vec{{1.2}}, &oob) == 3);
  CHECK(oob);
  CHECK(g.nearest_flat(Vec{{0.5}}, &oob) == 2);
  CHECK(!oob);
}

TEST_CASE("periodic dimension wraps instead of clamping") {
  Grid g = build_grid(Vec{{0.0}}, Vec{{kTwoPi}}, VecI{{60}}, {true});
  bool oob = true;
  CHECK(g.nearest_flat(Vec{{kTwoPi - 1e-9}}, &oob) == 59);
  CHECK(!oob);
  CHECK(g.nearest_flat(Vec{{kTwoPi + 0.01}}, &oob) == 0);
  CHECK(!oob);
  CHECK(g.nearest_flat(Vec{{-0.01}}, &oob) == 59);
  CHECK(!oob);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    double th = rng.uniform(0.0, kTwoPi);
    CHECK(g.nearest_flat(Vec{{th}}) == g.nearest_flat(Vec{{th + kTwoPi}}));
    CHECK(g.nearest_flat(Vec{{th}}) == g.nearest_flat(Vec{{th - kTwoPi}}));
  }
}

TEST_CASE("grid construction validation") {
  CHECK_THROWS_AS(build_grid(Vec{{0.0}}, Vec{{1.0}}, VecI{{0}}, {false}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_grid(Vec{{1.0}}, Vec{{0.0}}, VecI{{4}}, {false}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_grid(Vec{{0.0, 0.0}}, Vec{{1.0}}, VecI{{4}}, {false}),
                  std::invalid_argument);
}

TEST_CASE("value lookup: nearest cell and multilinear interpolation") {
  Grid g = build_grid(Vec{{0.0, -1.0}}, Vec{{2.0, 1.0}}, VecI{{8, 10}}, {false, false});
  ValueGrid vg{g, Eigen::ArrayXd(g.total_cells())};
  // An affine field is reproduced exactly by multilinear interpolation.
  auto f = [](const Vec& p) { return 2.0 * p[0] - 3.0 * p[1] + 0.5; };
  for (long c = 0; c < g.total_cells(); ++c) vg.values[c] = f(g.center(c));

  for (long c = 0; c < g.total_cells(); ++c) {
    CHECK(vg.at(g.center(c)) == vg.values[c]);
    CHECK(vg.interpolate(g.center(c)) == doctest::Approx(vg.values[c]).epsilon(1e-12));
  }
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    // Stay inside the center lattice where no clamping occurs.
    Vec p{{rng.uniform(0.0 + g.pitch[0] / 2, 2.0 - g.pitch[0] / 2),
           rng.uniform(-1.0 + g.pitch[1] / 2, 1.0 - g.pitch[1] / 2)}};
    CHECK(vg.interpolate(p) == doctest::Approx(f(p)).epsilon(1e-12));
  }
  // Outside the lattice the lookup clamps to the boundary value.
  CHECK(vg.interpolate(Vec{{-5.0, -5.0}}) ==
        doctest::Approx(f(g.center(VecI{{0, 0}}))));
  CHECK(std::isfinite(vg.at(Vec{{100.0, 100.0}})));
}

TEST_CASE("interpolation respects periodic wrapping") {
  Grid g = build_grid(Vec{{0.0}}, Vec{{kTwoPi}}, VecI{{36}}, {true});
  ValueGrid vg{g, Eigen::ArrayXd(g.total_cells())};
  for (long c = 0; c < g.total_cells(); ++c) vg.values[c] = std::cos(g.center(c)[0]);
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    double th = rng.uniform(0.0, kTwoPi);
    CHECK(vg.interpolate(Vec{{th}}) ==
          doctest::Approx(vg.interpolate(Vec{{th + kTwoPi}})).epsilon(1e-12));
  }
  // Within half a pitch of the seam, interpolation blends across it instead
  // of extrapolating, so the error stays second order.
  CHECK(vg.interpolate(Vec{{kTwoPi - 1e-3}}) == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("greedy Q-table lookups break ties toward the lowest action index") {
  Grid g = build_grid(Vec{{0.0}}, Vec{{1.0}}, VecI{{2}}, {false});
  QTable qt{g, Mat(2, 3)};
  qt.q.row(0) << 0.3, 0.1, 0.1;
  qt.q.row(1) << -0.5, 0.2, -0.5;
  CHECK(qt.greedy_value(0) == doctest::Approx(0.1));
  CHECK(qt.greedy_action(0) == 1);
  CHECK(qt.greedy_action(1) == 0);
}

TEST_CASE("membership mask is the closed zero sub-level set") {
  Grid g = build_grid(Vec{{0.0}}, Vec{{1.0}}, VecI{{3}}, {false});
  ValueGrid vg{g, Eigen::ArrayXd(3)};
  vg.values << -0.1, 0.0, 0.1;
  MaskArray m = extract_ra_mask(vg);
  CHECK(m[0]);
  CHECK(m[1]);
  CHECK(!m[2]);

  MaskArray wider(3), partial(3);
  wider << true, true, false;
  partial << true, false, false;
  CHECK(mask_subset(partial, wider));
  CHECK(mask_subset(wider, wider));
  CHECK(!mask_subset(wider, partial));
}
