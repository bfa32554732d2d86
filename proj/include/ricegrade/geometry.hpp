#pragma once

#include <vector>

namespace ricegrade {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Convex hull (Andrew monotone chain), counter-clockwise, no collinear
/// points. Duplicates in the input are fine.
std::vector<Point2> convex_hull(std::vector<Point2> points);

struct MinAreaRect {
  double long_side = 0.0;
  double short_side = 0.0;
  double area = 0.0;
  double angle_rad = 0.0;  // direction of the long side
};

/// Minimum-area enclosing rectangle of a point set. One rectangle side is
/// collinear with a hull edge, so every hull edge is tried.
MinAreaRect min_area_rect(const std::vector<Point2>& points);

}  // namespace ricegrade
