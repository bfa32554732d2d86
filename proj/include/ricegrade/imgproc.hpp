#pragma once

#include <array>
#include <optional>
#include <span>

#include "ricegrade/image.hpp"

namespace ricegrade {

/// Multiplicative gains for brightness levels 1..5. Level 1 is the identity.
inline constexpr std::array<double, 5> kBrightnessGains = {1.00, 1.25, 1.50,
                                                           1.75, 2.00};

/// Rec.601 luma, rounded half away from zero. Throws on an empty image.
GrayImage to_grayscale(const RgbImage& image, double calibration_mm_per_px);

/// Remaps [min, max] to [0, 255] through a 256-entry lookup table.
/// A constant image is returned unchanged.
GrayImage contrast_stretch(const GrayImage& img);

/// Per-pixel clamp(round(p * gain[level]), 0, 255). Level must be in 1..5.
GrayImage adjust_brightness(const GrayImage& img, int level,
                            std::span<const double> gains = kBrightnessGains);

struct BinarizeResult {
  BinaryImage image;
  int threshold;  // pixel >= threshold is foreground
};

/// Thresholds the image; without an explicit threshold Otsu's method picks
/// the split maximizing between-class variance (lowest maximizer wins).
/// A constant image under Otsu comes back all background (threshold one
/// above the constant), so blank frames yield no grains.
BinarizeResult binarize(const GrayImage& img,
                        std::optional<int> threshold = std::nullopt);

/// Computed over the image histogram; see binarize() for the convention.
int otsu_threshold(const GrayImage& img);

/// Clears every 8-connected foreground component with pixel count strictly
/// below min_area_px.
BinaryImage remove_small_regions(const BinaryImage& img,
                                 int min_area_px = 40000);

/// window x window median with edge replication. Window must be odd, >= 3.
GrayImage median_filter(const GrayImage& img, int window = 3);
BinaryImage median_filter(const BinaryImage& img, int window = 3);

}  // namespace ricegrade
