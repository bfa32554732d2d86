#pragma once

#include <vector>

#include "ricegrade/chalk.hpp"
#include "ricegrade/image.hpp"
#include "ricegrade/segmentation.hpp"

namespace ricegrade {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
};

RgbImage gray_to_rgb(const GrayImage& img);
void draw_rect(RgbImage& img, int x, int y, int w, int h, Rgb color);
void draw_line(RgbImage& img, int x0, int y0, int x1, int y1, Rgb color);
/// 3x5 digit glyphs, scaled by `scale`; draws the decimal digits of value.
void draw_number(RgbImage& img, int x, int y, int value, Rgb color,
                 int scale = 2);

/// Detection overlay: source image with one labeled box per grain.
RgbImage grain_overlay(const GrayImage& img, const std::vector<Grain>& grains);

/// Chalk overlay: chalky pixels black, the rest of the grain white,
/// background mid-gray; optionally the convex hull of the chalky pixels
/// outlined in yellow.
RgbImage chalk_overlay(const GrayImage& img, const std::vector<Grain>& grains,
                       const std::vector<ChalkMask>& masks,
                       bool outline_hull = true);

}  // namespace ricegrade
