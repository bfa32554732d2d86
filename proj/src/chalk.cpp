#include "ricegrade/chalk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace ricegrade {

ClusterResult kmeans(std::span<const double> values, int k, double eps,
                     int max_iter, std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("kmeans: empty input");
  if (k < 1) throw std::invalid_argument("kmeans: K must be >= 1");
  if (eps <= 0.0) throw std::invalid_argument("kmeans: eps must be positive");
  if (max_iter < 1) throw std::invalid_argument("kmeans: max_iter must be >= 1");

  std::vector<double> distinct(values.begin(), values.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (k > static_cast<int>(distinct.size())) {
    throw std::invalid_argument("kmeans: K exceeds distinct value count");
  }

  // Draw K distinct values via partial Fisher-Yates on the raw generator so
  // the sequence is identical on every platform.
  std::mt19937_64 gen(seed);
  ClusterResult result;
  result.centers.reserve(k);
  for (int i = 0; i < k; ++i) {
    const std::size_t remaining = distinct.size() - i;
    const std::size_t j = i + static_cast<std::size_t>(gen() % remaining);
    std::swap(distinct[i], distinct[j]);
    result.centers.push_back(distinct[i]);
  }

  result.assignments.assign(values.size(), 0);
  for (int iter = 1; iter <= max_iter; ++iter) {
    // Assignment by squared distance, ties to the lowest cluster index.
    double sse = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (values[i] - result.centers[c]) *
                         (values[i] - result.centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      result.assignments[i] = best;
      sse += best_d;
    }
    result.sse_history.push_back(sse);
    result.iterations = iter;

    // Center update; a cluster that lost all members keeps its center.
    std::vector<double> sums(k, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      sums[result.assignments[i]] += values[i];
      ++counts[result.assignments[i]];
    }
    double movement = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      const double updated = sums[c] / static_cast<double>(counts[c]);
      movement = std::max(movement, std::abs(updated - result.centers[c]));
      result.centers[c] = updated;
    }
    if (movement < eps) break;
  }
  return result;
}

ChalkMask segment_chalk(const Grain& grain, const GrayImage& img,
                        const ChalkParams& params) {
  if (grain.pixel_indices.empty()) {
    throw std::invalid_argument("segment_chalk: grain has no pixels");
  }
  std::vector<double> intensities;
  intensities.reserve(grain.pixel_indices.size());
  for (std::int32_t idx : grain.pixel_indices) {
    if (idx < 0 || idx >= static_cast<std::int32_t>(img.pixels.size())) {
      throw std::invalid_argument("segment_chalk: grain pixel outside image");
    }
    intensities.push_back(static_cast<double>(img.pixels[idx]));
  }
  const ClusterResult cluster =
      kmeans(intensities, 1, params.eps, params.max_iter, params.seed);

  ChalkMask out;
  out.cluster_center = cluster.centers[0];
  out.threshold = cluster.centers[0] * params.rho;
  out.mask.resize(intensities.size(), 0);
  for (std::size_t i = 0; i < intensities.size(); ++i) {
    if (intensities[i] >= out.threshold) {
      out.mask[i] = 1;
      ++out.chalky_px;
    }
  }
  out.ratio = static_cast<double>(out.chalky_px) /
              static_cast<double>(intensities.size());
  return out;
}

ChalkinessResult chalkiness(const std::vector<ChalkMask>& masks,
                            double chalky_grain_min_ratio) {
  if (masks.empty()) throw std::invalid_argument("chalkiness: no grains");
  ChalkinessResult result;
  result.n0 = static_cast<int>(masks.size());
  double ratio_sum = 0.0;
  for (const ChalkMask& m : masks) {
    if (m.ratio >= chalky_grain_min_ratio) {
      ++result.n1;
      ratio_sum += m.ratio;
    }
  }
  result.w_d = result.n1 > 0 ? ratio_sum / result.n1 : 0.0;
  result.d = result.w_d * static_cast<double>(result.n1) /
             static_cast<double>(result.n0);
  return result;
}

std::vector<SweepRow> luminance_sweep(const GrayImage& img, const Grain& grain,
                                      const ChalkParams& params,
                                      std::span<const double> gains) {
  const ChalkMask base = segment_chalk(grain, img, params);
  const double threshold = base.threshold;  // frozen at level 1

  std::vector<SweepRow> rows;
  rows.reserve(gains.size());
  for (int level = 1; level <= static_cast<int>(gains.size()); ++level) {
    const double gain = gains[level - 1];
    int chalky = 0;
    for (std::int32_t idx : grain.pixel_indices) {
      const long boosted = std::clamp<long>(
          std::lround(img.pixels[idx] * gain), 0, 255);
      if (static_cast<double>(boosted) >= threshold) ++chalky;
    }
    rows.push_back({level, static_cast<double>(chalky) /
                               static_cast<double>(grain.pixel_indices.size())});
  }
  return rows;
}

}  // namespace ricegrade
