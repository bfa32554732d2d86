#include "ricegrade/overlay.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include "ricegrade/geometry.hpp"

namespace ricegrade {

namespace {

constexpr Rgb kBoxColor{220, 40, 40};
constexpr Rgb kHullColor{230, 210, 30};

// 3x5 glyphs, one bit per pixel, rows top to bottom.
constexpr std::array<std::array<std::uint8_t, 5>, 10> kDigits = {{
    {0b111, 0b101, 0b101, 0b101, 0b111},  // 0
    {0b010, 0b110, 0b010, 0b010, 0b111},  // 1
    {0b111, 0b001, 0b111, 0b100, 0b111},  // 2
    {0b111, 0b001, 0b111, 0b001, 0b111},  // 3
    {0b101, 0b101, 0b111, 0b001, 0b001},  // 4
    {0b111, 0b100, 0b111, 0b001, 0b111},  // 5
    {0b111, 0b100, 0b111, 0b101, 0b111},  // 6
    {0b111, 0b001, 0b010, 0b010, 0b010},  // 7
    {0b111, 0b101, 0b111, 0b101, 0b111},  // 8
    {0b111, 0b101, 0b111, 0b001, 0b111},  // 9
}};

void put(RgbImage& img, int x, int y, Rgb color) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  img.set(x, y, color.r, color.g, color.b);
}

}  // namespace

RgbImage gray_to_rgb(const GrayImage& img) {
  RgbImage out(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const std::uint8_t v = img.pixels[i];
    out.pixels[3 * i] = v;
    out.pixels[3 * i + 1] = v;
    out.pixels[3 * i + 2] = v;
  }
  return out;
}

void draw_rect(RgbImage& img, int x, int y, int w, int h, Rgb color) {
  for (int i = 0; i < w; ++i) {
    put(img, x + i, y, color);
    put(img, x + i, y + h - 1, color);
  }
  for (int i = 0; i < h; ++i) {
    put(img, x, y + i, color);
    put(img, x + w - 1, y + i, color);
  }
}

void draw_line(RgbImage& img, int x0, int y0, int x1, int y1, Rgb color) {
  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    put(img, x0, y0, color);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void draw_number(RgbImage& img, int x, int y, int value, Rgb color, int scale) {
  const std::string digits = std::to_string(value);
  int cx = x;
  for (char ch : digits) {
    if (ch < '0' || ch > '9') continue;
    const auto& glyph = kDigits[ch - '0'];
    for (int gy = 0; gy < 5; ++gy) {
      for (int gx = 0; gx < 3; ++gx) {
        if (!((glyph[gy] >> (2 - gx)) & 1)) continue;
        for (int sy = 0; sy < scale; ++sy) {
          for (int sx = 0; sx < scale; ++sx) {
            put(img, cx + gx * scale + sx, y + gy * scale + sy, color);
          }
        }
      }
    }
    cx += 4 * scale;
  }
}

RgbImage grain_overlay(const GrayImage& img, const std::vector<Grain>& grains) {
  RgbImage out = gray_to_rgb(img);
  for (const Grain& g : grains) {
    draw_rect(out, g.bbox_x - 1, g.bbox_y - 1, g.bbox_w + 2, g.bbox_h + 2,
              kBoxColor);
    draw_number(out, g.bbox_x, std::max(0, g.bbox_y - 12), g.component_id,
                kBoxColor);
  }
  return out;
}

RgbImage chalk_overlay(const GrayImage& img, const std::vector<Grain>& grains,
                       const std::vector<ChalkMask>& masks, bool outline_hull) {
  RgbImage out(img.width, img.height, 128);
  for (std::size_t gi = 0; gi < grains.size() && gi < masks.size(); ++gi) {
    const Grain& g = grains[gi];
    const ChalkMask& m = masks[gi];
    std::vector<Point2> chalky_centers;
    for (std::size_t i = 0; i < g.pixel_indices.size(); ++i) {
      const std::int32_t idx = g.pixel_indices[i];
      const int x = idx % img.width;
      const int y = idx / img.width;
      if (i < m.mask.size() && m.mask[i]) {
        out.set(x, y, 0, 0, 0);
        chalky_centers.push_back({x + 0.5, y + 0.5});
      } else {
        out.set(x, y, 255, 255, 255);
      }
    }
    if (outline_hull && chalky_centers.size() >= 3) {
      const auto hull = convex_hull(chalky_centers);
      for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point2& a = hull[i];
        const Point2& b = hull[(i + 1) % hull.size()];
        draw_line(out, static_cast<int>(a.x), static_cast<int>(a.y),
                  static_cast<int>(b.x), static_cast<int>(b.y), kHullColor);
      }
    }
  }
  return out;
}

}  // namespace ricegrade
