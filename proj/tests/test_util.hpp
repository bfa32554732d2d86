#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ricegrade/image.hpp"
#include "ricegrade/tensor.hpp"

namespace testutil {

inline ricegrade::GrayImage random_gray(int w, int h, std::mt19937& gen,
                                        double calibration = 1.0) {
  ricegrade::GrayImage img(w, h, 0, calibration);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(gen() % 256);
  return img;
}

inline ricegrade::BinaryImage random_binary(int w, int h, std::mt19937& gen,
                                            double fg_prob = 0.4) {
  ricegrade::BinaryImage img(w, h);
  std::bernoulli_distribution coin(fg_prob);
  for (auto& p : img.pixels) p = coin(gen) ? 1 : 0;
  return img;
}

/// Rows of '0'/'1' characters, all the same length.
inline ricegrade::BinaryImage binary_from_rows(
    const std::vector<std::string>& rows, double calibration = 1.0) {
  ricegrade::BinaryImage img(static_cast<int>(rows[0].size()),
                             static_cast<int>(rows.size()), 0, calibration);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      img.at(x, y) = rows[y][x] == '1' ? 1 : 0;
    }
  }
  return img;
}

/// Fills pixels whose centers fall inside the rotated ellipse.
template <typename Img, typename V>
void fill_ellipse(Img& img, double cx, double cy, double semi_a, double semi_b,
                  double angle_rad, V value) {
  const double ca = std::cos(angle_rad);
  const double sa = std::sin(angle_rad);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double dx = x + 0.5 - cx;
      const double dy = y + 0.5 - cy;
      const double u = dx * ca + dy * sa;
      const double v = -dx * sa + dy * ca;
      if (u * u / (semi_a * semi_a) + v * v / (semi_b * semi_b) <= 1.0) {
        img.at(x, y) = value;
      }
    }
  }
}

/// Fills pixels whose centers fall inside the rotated len x wid rectangle.
template <typename Img, typename V>
void fill_rect(Img& img, double cx, double cy, double len, double wid,
               double angle_rad, V value) {
  const double ca = std::cos(angle_rad);
  const double sa = std::sin(angle_rad);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const double dx = x + 0.5 - cx;
      const double dy = y + 0.5 - cy;
      const double u = dx * ca + dy * sa;
      const double v = -dx * sa + dy * ca;
      if (std::abs(u) <= len / 2.0 && std::abs(v) <= wid / 2.0) {
        img.at(x, y) = value;
      }
    }
  }
}

/// Axis-aligned filled pixel rectangle: x in [x0, x0+w), y in [y0, y0+h).
template <typename Img, typename V>
void fill_axis_rect(Img& img, int x0, int y0, int w, int h, V value) {
  for (int y = y0; y < y0 + h; ++y) {
    for (int x = x0; x < x0 + w; ++x) {
      img.at(x, y) = value;
    }
  }
}

/// Independent flood-fill oracle for connected components: queue-based BFS,
/// 8-connectivity, components canonicalized as sorted index lists sorted by
/// first element.
inline std::vector<std::vector<std::int32_t>> bfs_components_oracle(
    const ricegrade::BinaryImage& img) {
  const int w = img.width;
  const int h = img.height;
  std::vector<char> seen(img.pixels.size(), 0);
  std::vector<std::vector<std::int32_t>> out;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::int32_t start = y * w + x;
      if (!img.pixels[start] || seen[start]) continue;
      std::vector<std::int32_t> queue{start};
      seen[start] = 1;
      std::size_t head = 0;
      while (head < queue.size()) {
        const std::int32_t idx = queue[head++];
        const int px = idx % w;
        const int py = idx / w;
        const int offs[8][2] = {{-1, -1}, {0, -1}, {1, -1}, {-1, 0},
                                {1, 0},   {-1, 1}, {0, 1},  {1, 1}};
        for (const auto& o : offs) {
          const int nx = px + o[0];
          const int ny = py + o[1];
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::int32_t nidx = ny * w + nx;
          if (img.pixels[nidx] && !seen[nidx]) {
            seen[nidx] = 1;
            queue.push_back(nidx);
          }
        }
      }
      std::sort(queue.begin(), queue.end());
      out.push_back(std::move(queue));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

/// Sort-based scalar median of the window around (x, y), edges replicated.
template <typename Img>
std::uint8_t median_oracle(const Img& img, int x, int y, int window) {
  std::vector<int> values;
  const int r = window / 2;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      int xx = x + dx;
      int yy = y + dy;
      if (xx < 0) xx = 0;
      if (yy < 0) yy = 0;
      if (xx >= img.width) xx = img.width - 1;
      if (yy >= img.height) yy = img.height - 1;
      values.push_back(img.at(xx, yy));
    }
  }
  std::sort(values.begin(), values.end());
  return static_cast<std::uint8_t>(values[values.size() / 2]);
}

/// Literal per-element evaluation of the SimAM energy weighting with long
/// double accumulation; written independently of the library op.
inline ricegrade::Tensor4 simam_oracle(const ricegrade::Tensor4& x,
                                       double lambda) {
  ricegrade::Tensor4 out = x;
  const int spatial = x.h() * x.w();
  for (int n = 0; n < x.n(); ++n) {
    for (int c = 0; c < x.c(); ++c) {
      for (int i = 0; i < x.h(); ++i) {
        for (int j = 0; j < x.w(); ++j) {
          long double mean = 0.0L;
          for (int ii = 0; ii < x.h(); ++ii) {
            for (int jj = 0; jj < x.w(); ++jj) {
              mean += x.at(n, c, ii, jj);
            }
          }
          mean /= spatial;
          long double var_sum = 0.0L;
          for (int ii = 0; ii < x.h(); ++ii) {
            for (int jj = 0; jj < x.w(); ++jj) {
              const long double d = x.at(n, c, ii, jj) - mean;
              var_sum += d * d;
            }
          }
          const long double v = var_sum / (spatial - 1);
          const long double d = x.at(n, c, i, j) - mean;
          const long double e_inv = d * d / (4.0L * (v + lambda)) + 0.5L;
          const long double sig = 1.0L / (1.0L + std::exp(-(long double)e_inv));
          out.at(n, c, i, j) = static_cast<double>(x.at(n, c, i, j) * sig);
        }
      }
    }
  }
  return out;
}

inline ricegrade::Tensor4 random_tensor(int n, int c, int h, int w,
                                        std::mt19937& gen, double lo = -2.0,
                                        double hi = 2.0) {
  ricegrade::Tensor4 t(n, c, h, w);
  std::uniform_real_distribution<double> dist(lo, hi);
  for (auto& v : t.data) v = dist(gen);
  return t;
}

}  // namespace testutil
