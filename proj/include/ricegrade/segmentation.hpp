#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ricegrade/image.hpp"

namespace ricegrade {

/// One extracted connected component with physical morphometry.
struct Grain {
  int component_id = 0;
  int bbox_x = 0;
  int bbox_y = 0;
  int bbox_w = 0;
  int bbox_h = 0;
  int pixel_count = 0;
  double long_axis_mm = 0.0;
  double short_axis_mm = 0.0;
  double area_mm2 = 0.0;
  std::vector<std::int32_t> pixel_indices;  // sorted row-major indices
};

/// Maximal 8-connected foreground components, each a sorted list of
/// row-major pixel indices, ordered by bounding-box top-left corner
/// (row-major) so repeated runs agree.
std::vector<std::vector<std::int32_t>> label_components(const BinaryImage& img);

enum class AxisMethod { MinAreaRect, Pca };

/// Axes from the minimum-area rectangle enclosing the component's pixel
/// squares (each pixel treated as a unit square, so an axis-aligned
/// w x h pixel rectangle measures exactly w x h). Area comes from the
/// pixel count. Throws when the component is below min_area_px.
Grain measure_grain(const std::vector<std::int32_t>& component, int image_width,
                    double calibration_mm_per_px, int min_area_px = 50,
                    AxisMethod method = AxisMethod::MinAreaRect);

struct DetectConfig {
  std::optional<int> binarize_threshold;  // Otsu when absent
  int min_grain_area_px = 50;
  int median_window = 3;
  AxisMethod axis_method = AxisMethod::MinAreaRect;
};

struct DetectResult {
  std::vector<Grain> grains;
  int threshold_used = 0;
  BinaryImage cleaned;  // post remove_small_regions + median filter
};

/// binarize -> remove_small_regions -> median_filter -> label -> measure.
/// Components that fall below the minimum area after cleaning are skipped.
DetectResult detect_grains(const GrayImage& img, const DetectConfig& config = {});

}  // namespace ricegrade
