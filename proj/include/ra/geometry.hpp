#pragma once

#include <vector>

#include "ra/types.hpp"

namespace ra {

// Axis-aligned box given by center and side lengths.
struct BoxSpec {
  Vec center;
  Vec lengths;

  Vec lower() const { return center - lengths / 2.0; }
  Vec upper() const { return center + lengths / 2.0; }
  bool contains(const Vec& p) const {
    return ((p - center).cwiseAbs().array() <= (lengths / 2.0).array()).all();
  }
};

// Signed L-infinity distance to a box: max_i(|p_i - c_i| - L_i/2).
// Negative inside, positive outside, zero on the boundary.
double box_margin_linf(const Vec& p, const BoxSpec& box);

// Signed Euclidean distance to a box: negative inside, positive outside.
double box_sdf_l2(const Vec& p, const BoxSpec& box);

// Distance from point p to segment [a, b].
double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                        const Eigen::Vector2d& b);

// Simple polygon in the plane (closed; vertices in order, no repeat of the
// first vertex at the end).
struct Polygon {
  std::vector<Eigen::Vector2d> vertices;
};

bool polygon_contains(const Polygon& poly, const Eigen::Vector2d& p);

// Signed Euclidean distance to the polygon boundary: negative inside.
double polygon_sdf(const Polygon& poly, const Eigen::Vector2d& p);

}  // namespace ra
