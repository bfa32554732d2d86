#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ricegrade/chalk.hpp"
#include "ricegrade/config.hpp"
#include "ricegrade/grading.hpp"
#include "ricegrade/image.hpp"
#include "ricegrade/segmentation.hpp"
#include "ricegrade/standards.hpp"

namespace ricegrade {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit code contract: 0 clean, 1 partial per-file failures, 2 total failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitFailure = 2;

struct GrainAnalysis {
  Grain grain;
  CompletenessClass completeness = CompletenessClass::Whole;
  bool excluded_fragment = false;  // passed the 1.0 mm sieve; not sampled
  ChalkMask chalk;
  VarietyMatch variety{VarietyCode::GD, 0.0};
  bool suspected_overlap = false;
};

struct ImageAnalysis {
  std::string path;
  int threshold_used = 0;
  double batch_avg_whole_length_mm = 0.0;
  std::vector<GrainAnalysis> grains;
};

/// Full single-image chain: contrast stretch, brightness level, grain
/// detection, then per-grain completeness / chalk / variety.
ImageAnalysis analyze_image(const GrayImage& img, const PipelineConfig& config,
                            const std::vector<RiceVariety>& varieties);

/// Batch aggregation into one report; the whole-grain average is recomputed
/// over the pooled grains and sub-1.0 mm fragments are dropped.
SampleReport build_sample_report(const std::vector<ImageAnalysis>& images,
                                 const PipelineConfig& config,
                                 const std::vector<RiceVariety>& varieties,
                                 const std::vector<GradingStandard>& standards);

struct CatalogEntry {
  std::string path;
  std::optional<VarietyCode> variety;
  std::optional<CompletenessClass> completeness;
};

struct Catalog {
  std::vector<CatalogEntry> entries;
};

/// Walks root/<variety>/<image>; the subdirectory names the variety and a
/// _whole/_sizeable/_tiny filename token names the completeness label.
/// Unrecognized labels stay unlabeled.
Catalog ingest_dataset(const std::string& root);

std::vector<std::string> list_images(const std::string& input);

std::uint64_t fnv1a64(const void* data, std::size_t size);
std::string file_hash_hex(const std::string& path);

struct AnalyzeOptions {
  bool annotate = false;
};

int cmd_analyze(const std::string& input, const PipelineConfig& config,
                const AnalyzeOptions& options = {});
int cmd_grade(const std::string& input, const PipelineConfig& config);
int cmd_sweep(const std::string& image_path, int grain_id,
              const PipelineConfig& config);

struct AttnOptions {
  double lambda = 1e-4;
  double gamma = 2.0;
  double b = 1.0;
  std::optional<int> kernel;
  std::vector<double> weights;
  std::string out_path;  // defaults next to the input
};

int cmd_attn(const std::string& kind, const std::string& tensor_path,
             const AttnOptions& options = {});
int cmd_ingest(const std::string& root, const PipelineConfig& config);

}  // namespace ricegrade
