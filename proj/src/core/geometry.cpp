#include "mcmt/core/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace mcmt {

double intersection_area(const Rect& a, const Rect& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

double iou(const Rect& a, const Rect& b) {
  if (a == b) return 1.0;
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  // right() - x need not round back to w; keep the result inside [0, 1]
  return std::min(inter / (a.area() + b.area() - inter), 1.0);
}

double occlusion_rate(const DetBox& box, std::span<const DetBox> others) {
  double best = 0.0;
  const double own = box.rect.area();
  for (const auto& o : others) {
    if (o.frame == box.frame && o.det_id == box.det_id && o.rect == box.rect) continue;
    best = std::max(best, intersection_area(box.rect, o.rect) / own);
  }
  return std::min(best, 1.0);
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
  constexpr double eps = 1e-9;
  if (std::abs(cross(a, b, p)) > eps * std::max(1.0, std::hypot(b.x - a.x, b.y - a.y))) return false;
  return p.x >= std::min(a.x, b.x) - eps && p.x <= std::max(a.x, b.x) + eps &&
         p.y >= std::min(a.y, b.y) - eps && p.y <= std::max(a.y, b.y) + eps;
}

int sign(double v) { return (v > 0) - (v < 0); }

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int d1 = sign(cross(c, d, a)), d2 = sign(cross(c, d, b));
  const int d3 = sign(cross(a, b, c)), d4 = sign(cross(a, b, d));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  return (d1 == 0 && on_segment(a, c, d)) || (d2 == 0 && on_segment(b, c, d)) ||
         (d3 == 0 && on_segment(c, a, b)) || (d4 == 0 && on_segment(d, a, b));
}

}  // namespace

bool point_in_polygon(const Point& p, std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = polygon[i];
    const Point& b = polygon[j];
    if (on_segment(p, a, b)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool box_in_zone(const DetBox& box, const Zone& zone) {
  return point_in_polygon(box.rect.anchor(), zone.polygon);
}

bool polygon_is_simple(std::span<const Point> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      // adjacent edges share a vertex by construction
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(a, b, polygon[j], polygon[(j + 1) % n])) return false;
    }
  }
  return true;
}

}  // namespace mcmt
