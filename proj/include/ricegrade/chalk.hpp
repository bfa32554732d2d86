#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ricegrade/image.hpp"
#include "ricegrade/imgproc.hpp"
#include "ricegrade/segmentation.hpp"

namespace ricegrade {

struct ClusterResult {
  std::vector<double> centers;
  std::vector<int> assignments;      // per input value
  std::vector<double> sse_history;   // one entry per Lloyd iteration
  int iterations = 0;
};

/// Lloyd's algorithm on scalar intensities. Initial centers are K distinct
/// input values drawn with the seeded generator; assignment ties go to the
/// lowest cluster index; iteration stops when the largest center movement
/// drops below eps or after max_iter rounds. Same seed, same result, bit
/// for bit.
ClusterResult kmeans(std::span<const double> values, int k, double eps,
                     int max_iter, std::uint64_t seed);

struct ChalkParams {
  double rho = 1.15;   // chalk threshold T = cluster center * rho
  double eps = 1e-3;
  int max_iter = 100;
  std::uint64_t seed = 0;
};

struct ChalkMask {
  std::vector<std::uint8_t> mask;  // aligned with grain.pixel_indices
  int chalky_px = 0;
  double ratio = 0.0;              // chalky_px / grain pixel count
  double cluster_center = 0.0;
  double threshold = 0.0;          // pixel >= threshold is chalky
};

/// K=1 clustering over the grain's intensities; a pixel is chalky when it
/// reaches rho times the cluster center.
ChalkMask segment_chalk(const Grain& grain, const GrayImage& img,
                        const ChalkParams& params = {});

struct ChalkinessResult {
  double w_d = 0.0;  // mean chalk ratio over chalky grains
  int n1 = 0;        // chalky grain count
  int n0 = 0;        // total grain count
  double d = 0.0;    // w_d * n1 / n0
};

/// A grain counts as chalky when its ratio reaches chalky_grain_min_ratio.
ChalkinessResult chalkiness(const std::vector<ChalkMask>& masks,
                            double chalky_grain_min_ratio = 0.01);

struct SweepRow {
  int level = 0;
  double chalk_ratio = 0.0;
};

/// Re-segments the grain at each brightness level against the threshold
/// frozen at level 1, so the ratio isolates the gain effect and is
/// non-decreasing across levels.
std::vector<SweepRow> luminance_sweep(
    const GrayImage& img, const Grain& grain, const ChalkParams& params = {},
    std::span<const double> gains = kBrightnessGains);

}  // namespace ricegrade
