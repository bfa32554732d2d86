#pragma once

#include <cstdint>
#include <vector>

namespace ricegrade {

/// 8-bit grayscale raster, row-major, with a physical calibration.
struct GrayImage {
  int width = 0;
  int height = 0;
  double calibration_mm_per_px = 1.0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0, double mm_per_px = 1.0)
      : width(w), height(h), calibration_mm_per_px(mm_per_px),
        pixels(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  bool empty() const { return pixels.empty(); }
};

/// Foreground/background raster; pixel values are 0 or 1.
struct BinaryImage {
  int width = 0;
  int height = 0;
  double calibration_mm_per_px = 1.0;
  std::vector<std::uint8_t> pixels;

  BinaryImage() = default;
  BinaryImage(int w, int h, std::uint8_t fill = 0, double mm_per_px = 1.0)
      : width(w), height(h), calibration_mm_per_px(mm_per_px),
        pixels(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  bool empty() const { return pixels.empty(); }
};

/// Interleaved 8-bit RGB raster.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // 3 bytes per pixel

  RgbImage() = default;
  RgbImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h),
        pixels(static_cast<std::size_t>(w) * h * 3, fill) {}

  std::uint8_t* px(int x, int y) {
    return &pixels[(static_cast<std::size_t>(y) * width + x) * 3];
  }
  const std::uint8_t* px(int x, int y) const {
    return &pixels[(static_cast<std::size_t>(y) * width + x) * 3];
  }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    auto* p = px(x, y);
    p[0] = r;
    p[1] = g;
    p[2] = b;
  }
  bool empty() const { return pixels.empty(); }
};

}  // namespace ricegrade
