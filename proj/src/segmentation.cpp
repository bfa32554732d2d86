#include "ricegrade/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ricegrade/geometry.hpp"
#include "ricegrade/imgproc.hpp"

namespace ricegrade {

std::vector<std::vector<std::int32_t>> label_components(const BinaryImage& img) {
  const int w = img.width;
  const int h = img.height;
  std::vector<std::uint8_t> visited(img.pixels.size(), 0);
  std::vector<std::vector<std::int32_t>> components;
  std::vector<std::int32_t> stack;

  for (std::int32_t start = 0; start < static_cast<std::int32_t>(img.pixels.size());
       ++start) {
    if (!img.pixels[start] || visited[start]) continue;
    std::vector<std::int32_t> component;
    stack.clear();
    stack.push_back(start);
    visited[start] = 1;
    while (!stack.empty()) {
      const std::int32_t idx = stack.back();
      stack.pop_back();
      component.push_back(idx);
      const int x = idx % w;
      const int y = idx / w;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::int32_t nidx = ny * w + nx;
          if (img.pixels[nidx] && !visited[nidx]) {
            visited[nidx] = 1;
            stack.push_back(nidx);
          }
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }

  // Order by bounding-box top-left corner, row-major; the smallest member
  // index settles the rare tie.
  struct Key {
    int min_y, min_x;
    std::int32_t first;
    std::size_t pos;
  };
  std::vector<Key> keys;
  keys.reserve(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) {
    int min_x = w, min_y = h;
    for (std::int32_t idx : components[i]) {
      min_x = std::min(min_x, idx % w);
      min_y = std::min(min_y, idx / w);
    }
    keys.push_back({min_y, min_x, components[i].front(), i});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    if (a.min_y != b.min_y) return a.min_y < b.min_y;
    if (a.min_x != b.min_x) return a.min_x < b.min_x;
    return a.first < b.first;
  });
  std::vector<std::vector<std::int32_t>> ordered;
  ordered.reserve(components.size());
  for (const Key& k : keys) ordered.push_back(std::move(components[k.pos]));
  return ordered;
}

namespace {

/// Corners of the pixel squares that can be extreme points: pixels missing
/// at least one 4-neighbour. Pixel (x, y) occupies [x, x+1] x [y, y+1].
std::vector<Point2> silhouette_corners(const std::vector<std::int32_t>& component,
                                       int image_width, int bx, int by, int bw,
                                       int bh) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(bw) * bh, 0);
  for (std::int32_t idx : component) {
    const int x = idx % image_width - bx;
    const int y = idx / image_width - by;
    mask[static_cast<std::size_t>(y) * bw + x] = 1;
  }
  auto filled = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= bw || y >= bh) return false;
    return mask[static_cast<std::size_t>(y) * bw + x] != 0;
  };
  std::vector<Point2> corners;
  for (int y = 0; y < bh; ++y) {
    for (int x = 0; x < bw; ++x) {
      if (!filled(x, y)) continue;
      if (filled(x - 1, y) && filled(x + 1, y) && filled(x, y - 1) &&
          filled(x, y + 1)) {
        continue;  // interior pixel, corners covered by its neighbours
      }
      const double px = bx + x;
      const double py = by + y;
      corners.push_back({px, py});
      corners.push_back({px + 1.0, py});
      corners.push_back({px, py + 1.0});
      corners.push_back({px + 1.0, py + 1.0});
    }
  }
  return corners;
}

/// Second-moment axes of the pixel centers. The within-pixel variance of
/// 1/12 is added back so an axis-aligned n-pixel row measures exactly n.
std::pair<double, double> pca_axes_px(const std::vector<std::int32_t>& component,
                                      int image_width) {
  const double n = static_cast<double>(component.size());
  double mx = 0.0, my = 0.0;
  for (std::int32_t idx : component) {
    mx += idx % image_width;
    my += idx / image_width;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::int32_t idx : component) {
    const double dx = idx % image_width - mx;
    const double dy = idx / image_width - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  sxx /= n;
  syy /= n;
  sxy /= n;
  const double mean = 0.5 * (sxx + syy);
  const double delta = std::sqrt(0.25 * (sxx - syy) * (sxx - syy) + sxy * sxy);
  const double l1 = mean + delta;
  const double l2 = std::max(mean - delta, 0.0);
  return {std::sqrt(12.0 * l1 + 1.0), std::sqrt(12.0 * l2 + 1.0)};
}

}  // namespace

Grain measure_grain(const std::vector<std::int32_t>& component, int image_width,
                    double calibration_mm_per_px, int min_area_px,
                    AxisMethod method) {
  if (component.empty()) {
    throw std::invalid_argument("measure_grain: empty component");
  }
  if (calibration_mm_per_px <= 0.0) {
    throw std::invalid_argument("measure_grain: calibration must be positive");
  }
  if (static_cast<int>(component.size()) < min_area_px) {
    throw std::invalid_argument("measure_grain: component below minimum grain area");
  }

  Grain grain;
  grain.pixel_count = static_cast<int>(component.size());
  grain.pixel_indices = component;
  std::sort(grain.pixel_indices.begin(), grain.pixel_indices.end());

  int min_x = image_width, min_y = 1 << 30, max_x = 0, max_y = 0;
  for (std::int32_t idx : grain.pixel_indices) {
    const int x = idx % image_width;
    const int y = idx / image_width;
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  grain.bbox_x = min_x;
  grain.bbox_y = min_y;
  grain.bbox_w = max_x - min_x + 1;
  grain.bbox_h = max_y - min_y + 1;

  double long_px, short_px;
  if (method == AxisMethod::MinAreaRect) {
    const auto corners = silhouette_corners(grain.pixel_indices, image_width,
                                            min_x, min_y, grain.bbox_w,
                                            grain.bbox_h);
    const MinAreaRect rect = min_area_rect(corners);
    long_px = rect.long_side;
    short_px = rect.short_side;
  } else {
    std::tie(long_px, short_px) = pca_axes_px(grain.pixel_indices, image_width);
  }
  grain.long_axis_mm = long_px * calibration_mm_per_px;
  grain.short_axis_mm = short_px * calibration_mm_per_px;
  grain.area_mm2 =
      grain.pixel_count * calibration_mm_per_px * calibration_mm_per_px;
  return grain;
}

DetectResult detect_grains(const GrayImage& img, const DetectConfig& config) {
  BinarizeResult bin = binarize(img, config.binarize_threshold);
  BinaryImage cleaned =
      remove_small_regions(bin.image, config.min_grain_area_px);
  cleaned = median_filter(cleaned, config.median_window);

  DetectResult result;
  result.threshold_used = bin.threshold;
  int next_id = 1;
  for (const auto& component : label_components(cleaned)) {
    // The median filter can shave a component below the minimum again.
    if (static_cast<int>(component.size()) < config.min_grain_area_px) continue;
    Grain grain = measure_grain(component, img.width,
                                img.calibration_mm_per_px,
                                config.min_grain_area_px, config.axis_method);
    grain.component_id = next_id++;
    result.grains.push_back(std::move(grain));
  }
  result.cleaned = std::move(cleaned);
  return result;
}

}  // namespace ricegrade
