#include "ricegrade/imgproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ricegrade/segmentation.hpp"

namespace ricegrade {

GrayImage to_grayscale(const RgbImage& image, double calibration_mm_per_px) {
  if (image.empty()) throw std::invalid_argument("to_grayscale: empty image");
  GrayImage out(image.width, image.height, 0, calibration_mm_per_px);
  const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t r = image.pixels[3 * i];
    const std::uint8_t g = image.pixels[3 * i + 1];
    const std::uint8_t b = image.pixels[3 * i + 2];
    const double luma = 0.299 * r + 0.587 * g + 0.114 * b;
    out.pixels[i] = static_cast<std::uint8_t>(
        std::clamp<long>(std::lround(luma), 0, 255));
  }
  return out;
}

GrayImage contrast_stretch(const GrayImage& img) {
  if (img.empty()) throw std::invalid_argument("contrast_stretch: empty image");
  const auto [lo_it, hi_it] =
      std::minmax_element(img.pixels.begin(), img.pixels.end());
  const int lo = *lo_it;
  const int hi = *hi_it;
  if (lo == hi) return img;

  std::array<std::uint8_t, 256> lut{};
  for (int p = 0; p < 256; ++p) {
    const double mapped = (p - lo) * 255.0 / (hi - lo);
    lut[p] = static_cast<std::uint8_t>(
        std::clamp<long>(std::lround(mapped), 0, 255));
  }
  GrayImage out = img;
  for (auto& p : out.pixels) p = lut[p];
  return out;
}

GrayImage adjust_brightness(const GrayImage& img, int level,
                            std::span<const double> gains) {
  if (level < 1 || level > static_cast<int>(gains.size())) {
    throw std::invalid_argument("adjust_brightness: level out of range");
  }
  const double gain = gains[level - 1];
  std::array<std::uint8_t, 256> lut{};
  for (int p = 0; p < 256; ++p) {
    lut[p] = static_cast<std::uint8_t>(
        std::clamp<long>(std::lround(p * gain), 0, 255));
  }
  GrayImage out = img;
  for (auto& p : out.pixels) p = lut[p];
  return out;
}

int otsu_threshold(const GrayImage& img) {
  if (img.empty()) throw std::invalid_argument("otsu_threshold: empty image");
  std::array<std::size_t, 256> hist{};
  for (std::uint8_t p : img.pixels) ++hist[p];

  const double total = static_cast<double>(img.pixels.size());
  double sum_all = 0.0;
  for (int v = 0; v < 256; ++v) sum_all += static_cast<double>(v) * hist[v];

  // Threshold t splits into {p < t} and {p >= t}; the first maximizer of the
  // between-class variance is kept.
  int best_t = -1;
  double best_var = -1.0;
  double w0 = 0.0;
  double sum0 = 0.0;
  for (int t = 1; t < 256; ++t) {
    w0 += hist[t - 1];
    sum0 += static_cast<double>(t - 1) * hist[t - 1];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (sum_all - sum0) / w1;
    const double between = (w0 / total) * (w1 / total) * (mu0 - mu1) * (mu0 - mu1);
    if (between > best_var) {
      best_var = between;
      best_t = t;
    }
  }
  if (best_t < 0) {
    // Constant image has no split; threshold just above the value makes
    // everything background, so a blank frame yields no grains.
    return static_cast<int>(img.pixels[0]) + 1;
  }
  return best_t;
}

BinarizeResult binarize(const GrayImage& img, std::optional<int> threshold) {
  if (img.empty()) throw std::invalid_argument("binarize: empty image");
  int t;
  if (threshold) {
    if (*threshold < 0 || *threshold > 255) {
      throw std::invalid_argument("binarize: threshold outside [0,255]");
    }
    t = *threshold;
  } else {
    t = otsu_threshold(img);
  }
  BinaryImage out(img.width, img.height, 0, img.calibration_mm_per_px);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    out.pixels[i] = img.pixels[i] >= t ? 1 : 0;
  }
  return {std::move(out), t};
}

BinaryImage remove_small_regions(const BinaryImage& img, int min_area_px) {
  if (min_area_px < 1) {
    throw std::invalid_argument("remove_small_regions: min_area_px must be >= 1");
  }
  BinaryImage out = img;
  for (const auto& component : label_components(img)) {
    if (static_cast<int>(component.size()) < min_area_px) {
      for (std::int32_t idx : component) out.pixels[idx] = 0;
    }
  }
  return out;
}

namespace {

template <typename Img>
Img median_filter_impl(const Img& img, int window) {
  if (window < 3 || window % 2 == 0) {
    throw std::invalid_argument("median_filter: window must be odd and >= 3");
  }
  if (img.empty()) return img;
  const int r = window / 2;
  Img out = img;
  std::vector<std::uint8_t> values;
  values.reserve(static_cast<std::size_t>(window) * window);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      values.clear();
      for (int dy = -r; dy <= r; ++dy) {
        const int yy = std::clamp(y + dy, 0, img.height - 1);
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = std::clamp(x + dx, 0, img.width - 1);
          values.push_back(img.at(xx, yy));
        }
      }
      auto mid = values.begin() + values.size() / 2;
      std::nth_element(values.begin(), mid, values.end());
      out.at(x, y) = *mid;
    }
  }
  return out;
}

}  // namespace

GrayImage median_filter(const GrayImage& img, int window) {
  return median_filter_impl(img, window);
}

BinaryImage median_filter(const BinaryImage& img, int window) {
  return median_filter_impl(img, window);
}

}  // namespace ricegrade
