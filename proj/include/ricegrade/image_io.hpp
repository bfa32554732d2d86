#pragma once

#include <string>

#include "ricegrade/image.hpp"

namespace ricegrade {

struct LoadedImage {
  bool is_gray = false;
  GrayImage gray;  // valid when is_gray
  RgbImage rgb;    // valid otherwise
};

/// Reads a PNG or PGM file (sniffed by magic bytes). PNG color images come
/// back as RGB; grayscale PNG and PGM come back as GrayImage with the given
/// calibration.
LoadedImage read_image(const std::string& path, double calibration_mm_per_px);

/// read_image followed by luma conversion when the file was color.
GrayImage read_gray(const std::string& path, double calibration_mm_per_px);

void write_png(const std::string& path, const GrayImage& img);
void write_png(const std::string& path, const RgbImage& img);

/// P5 or P2, maxval <= 255.
GrayImage read_pgm(const std::string& path, double calibration_mm_per_px);
void write_pgm(const std::string& path, const GrayImage& img);

}  // namespace ricegrade
