#include "ra/geometry.hpp"

#include <stdexcept>

namespace ra {

double box_margin_linf(const Vec& p, const BoxSpec& box) {
  if (p.size() != box.center.size())
    throw std::invalid_argument("box_margin_linf: dimension mismatch");
  return ((p - box.center).cwiseAbs() - box.lengths / 2.0).maxCoeff();
}

double box_sdf_l2(const Vec& p, const BoxSpec& box) {
  if (p.size() != box.center.size())
    throw std::invalid_argument("box_sdf_l2: dimension mismatch");
  Vec q = (p - box.center).cwiseAbs() - box.lengths / 2.0;
  double outside = q.cwiseMax(0.0).norm();
  double inside = std::min(q.maxCoeff(), 0.0);
  return outside + inside;
}

double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                        const Eigen::Vector2d& b) {
  Eigen::Vector2d ab = b - a;
  double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool polygon_contains(const Polygon& poly, const Eigen::Vector2d& p) {
  // Even-odd ray cast.
  bool inside = false;
  const auto& v = poly.vertices;
  std::size_t n = v.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    bool crosses = (v[i].y() > p.y()) != (v[j].y() > p.y());
    if (crosses) {
      double x_at = v[j].x() +
                    (p.y() - v[j].y()) / (v[i].y() - v[j].y()) * (v[i].x() - v[j].x());
      if (p.x() < x_at) inside = !inside;
    }
  }
  return inside;
}

double polygon_sdf(const Polygon& poly, const Eigen::Vector2d& p) {
  if (poly.vertices.size() < 3)
    throw std::invalid_argument("polygon_sdf: polygon needs at least 3 vertices");
  double d = std::numeric_limits<double>::infinity();
  const auto& v = poly.vertices;
  std::size_t n = v.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    d = std::min(d, segment_distance(p, v[j], v[i]));
  return polygon_contains(poly, p) ? -d : d;
}

}  // namespace ra
