#include <doctest.h>

#include <cmath>

#include "ra/geometry.hpp"
#include "ra/rng.hpp"

using namespace ra;

TEST_CASE("box margin is the signed L-infinity distance") {
  BoxSpec box{Vec{{0.0, 0.0}}, Vec{{2.0, 4.0}}};  // [-1,1] x [-2,2]
  CHECK(box_margin_linf(Vec{{0.0, 0.0}}, box) == doctest::Approx(-1.0));
  CHECK(box_margin_linf(Vec{{1.0, 0.0}}, box) == doctest::Approx(0.0));
  CHECK(box_margin_linf(Vec{{2.5, 0.0}}, box) == doctest::Approx(1.5));
  CHECK(box_margin_linf(Vec{{0.0, 3.0}}, box) == doctest::Approx(1.0));
  CHECK(box_margin_linf(Vec{{0.9, -1.9}}, box) == doctest::Approx(-0.1));
  // Off-center box.
  BoxSpec off{Vec{{1.0, -1.0}}, Vec{{1.0, 1.0}}};
  CHECK(box_margin_linf(Vec{{1.0, -1.0}}, off) == doctest::Approx(-0.5));
  CHECK(box_margin_linf(Vec{{2.0, -1.0}}, off) == doctest::Approx(0.5));
}

TEST_CASE("box margin sign agrees with containment") {
  BoxSpec box{Vec{{0.3, -0.2}}, Vec{{1.2, 0.8}}};
  Rng rng(7);
  for (int i = 0; i < 2000; ++i) {
    Vec p{{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)}};
    CHECK((box_margin_linf(p, box) <= 0.0) == box.contains(p));
  }
}

TEST_CASE("box Euclidean distance: faces, corners, interior") {
  BoxSpec box{Vec{{0.0, 0.0}}, Vec{{2.0, 2.0}}};  // [-1,1]^2
  CHECK(box_sdf_l2(Vec{{2.0, 0.0}}, box) == doctest::Approx(1.0));
  CHECK(box_sdf_l2(Vec{{2.0, 2.0}}, box) == doctest::Approx(std::sqrt(2.0)));
  CHECK(box_sdf_l2(Vec{{0.0, 0.0}}, box) == doctest::Approx(-1.0));
  CHECK(box_sdf_l2(Vec{{0.5, 0.0}}, box) == doctest::Approx(-0.5));
  CHECK(box_sdf_l2(Vec{{1.0, 0.3}}, box) == doctest::Approx(0.0));
  // Inside, the two signed distances coincide for a square.
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    Vec p{{rng.uniform(-0.99, 0.99), rng.uniform(-0.99, 0.99)}};
    CHECK(box_sdf_l2(p, box) == doctest::Approx(box_margin_linf(p, box)));
  }
}

TEST_CASE("segment distance") {
  Eigen::Vector2d a(-1.0, 0.0), b(1.0, 0.0);
  CHECK(segment_distance({0.0, 1.0}, a, b) == doctest::Approx(1.0));
  CHECK(segment_distance({0.3, 0.0}, a, b) == doctest::Approx(0.0));
  CHECK(segment_distance({2.0, 0.0}, a, b) == doctest::Approx(1.0));   // past b
  CHECK(segment_distance({-3.0, 4.0}, a, b) == doctest::Approx(std::sqrt(20.0)));
  // Degenerate segment = point distance.
  CHECK(segment_distance({3.0, 4.0}, {0.0, 0.0}, {0.0, 0.0}) == doctest::Approx(5.0));
}

TEST_CASE("polygon containment and signed distance on the unit square") {
  Polygon sq;
  sq.vertices = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  CHECK(polygon_contains(sq, {0.5, 0.5}));
  CHECK(!polygon_contains(sq, {1.5, 0.5}));
  CHECK(!polygon_contains(sq, {0.5, -0.1}));
  CHECK(polygon_sdf(sq, {0.5, 0.5}) == doctest::Approx(-0.5));
  CHECK(polygon_sdf(sq, {2.0, 0.5}) == doctest::Approx(1.0));
  CHECK(polygon_sdf(sq, {0.5, 1.2}) == doctest::Approx(0.2));
  CHECK(polygon_sdf(sq, {0.1, 0.3}) == doctest::Approx(-0.1));
  CHECK(polygon_sdf(sq, {2.0, 2.0}) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("polygon signed distance agrees with containment and is 1-Lipschitz") {
  // Non-convex L-shape.
  Polygon L;
  L.vertices = {{0.0, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {1.0, 1.0}, {1.0, 2.0}, {0.0, 2.0}};
  CHECK(polygon_contains(L, {0.5, 1.5}));
  CHECK(polygon_contains(L, {1.5, 0.5}));
  CHECK(!polygon_contains(L, {1.5, 1.5}));
  Rng rng(11);
  Eigen::Vector2d prev(0.5, 0.5);
  for (int i = 0; i < 3000; ++i) {
    Eigen::Vector2d p(rng.uniform(-1.0, 3.0), rng.uniform(-1.0, 3.0));
    double d = polygon_sdf(L, p);
    if (std::abs(d) > 1e-9) CHECK((d < 0.0) == polygon_contains(L, p));
    CHECK(std::abs(d - polygon_sdf(L, prev)) <= (p - prev).norm() + 1e-9);
    prev = p;
  }
}
