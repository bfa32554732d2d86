#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "ricegrade/segmentation.hpp"
#include "ricegrade/standards.hpp"

namespace ricegrade {

struct PipelineConfig {
  double calibration_mm_per_px = 1.0;
  VarietyCode declared_variety = VarietyCode::GD;
  int brightness_level = 1;  // level 1 is the standard luminance
  std::optional<int> binarize_threshold;  // Otsu when absent
  int min_grain_area_px = 50;
  int median_window = 3;
  double chalk_rho = 1.15;
  double chalk_eps = 1e-3;
  int chalk_max_iter = 100;
  std::uint64_t seed = 0;
  double chalky_grain_min_ratio = 0.01;
  std::optional<std::string> standards_path;
  std::string output_dir = "out";
  int workers = 0;  // 0 = hardware concurrency; RICEGRADE_THREADS caps it
  Branch nm_branch = Branch::GlutinousJaponica;
  std::array<double, 5> brightness_gains = {1.00, 1.25, 1.50, 1.75, 2.00};
  AxisMethod axis_method = AxisMethod::MinAreaRect;
};

/// `key = value` lines with '#' comments. Unknown keys are an error.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config_file(const std::string& path);

/// Serialization that parse_config reads back losslessly.
std::string config_to_kv(const PipelineConfig& config);

/// Effective worker count: configured (0 = hardware), then capped by the
/// RICEGRADE_THREADS environment variable, minimum 1.
int resolve_worker_count(int configured);

bool operator==(const PipelineConfig& a, const PipelineConfig& b);

}  // namespace ricegrade
