#include "ricegrade/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ricegrade {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

std::vector<Point2> convex_hull(std::vector<Point2> points) {
  std::sort(points.begin(), points.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Point2& a, const Point2& b) {
                             return a.x == b.x && a.y == b.y;
                           }),
               points.end());
  const std::size_t n = points.size();
  if (n <= 2) return points;

  std::vector<Point2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {  // upper
    while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

MinAreaRect min_area_rect(const std::vector<Point2>& points) {
  if (points.empty()) {
    throw std::invalid_argument("min_area_rect: no points");
  }
  const std::vector<Point2> hull = convex_hull(points);

  if (hull.size() == 1) return {0.0, 0.0, 0.0, 0.0};
  if (hull.size() == 2) {
    const double dx = hull[1].x - hull[0].x;
    const double dy = hull[1].y - hull[0].y;
    return {std::hypot(dx, dy), 0.0, 0.0, std::atan2(dy, dx)};
  }

  MinAreaRect best;
  best.area = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2& a = hull[i];
    const Point2& b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len == 0.0) continue;
    const double ux = (b.x - a.x) / len;
    const double uy = (b.y - a.y) / len;

    double smin = std::numeric_limits<double>::infinity(), smax = -smin;
    double tmin = smin, tmax = -smin;
    for (const Point2& p : hull) {
      const double s = p.x * ux + p.y * uy;
      const double t = -p.x * uy + p.y * ux;
      smin = std::min(smin, s);
      smax = std::max(smax, s);
      tmin = std::min(tmin, t);
      tmax = std::max(tmax, t);
    }
    const double w = smax - smin;
    const double h = tmax - tmin;
    const double area = w * h;
    if (area < best.area) {
      best.area = area;
      best.long_side = std::max(w, h);
      best.short_side = std::min(w, h);
      best.angle_rad = w >= h ? std::atan2(uy, ux) : std::atan2(ux, -uy);
    }
  }
  return best;
}

}  // namespace ricegrade
