#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ricegrade/config.hpp"
#include "ricegrade/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<double> calibration;
  std::optional<std::string> variety;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "configuration file (key = value)");
  cmd->add_option("--calibration", args.calibration, "mm per pixel");
  cmd->add_option("--variety", args.variety, "declared variety (GD NM WC PJX WN YB)");
  cmd->add_option("--seed", args.seed, "seed for clustering");
  cmd->add_option("--out", args.out, "output directory");
}

ricegrade::PipelineConfig resolve_config(const CommonArgs& args) {
  ricegrade::PipelineConfig config;
  if (!args.config_path.empty()) {
    config = ricegrade::load_config_file(args.config_path);
  }
  if (args.calibration) config.calibration_mm_per_px = *args.calibration;
  if (args.variety) {
    auto v = ricegrade::parse_variety(*args.variety);
    if (!v) throw CLI::ValidationError("--variety", "unknown variety " + *args.variety);
    config.declared_variety = *v;
  }
  if (args.seed) config.seed = *args.seed;
  if (args.out) config.output_dir = *args.out;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rice grain quality analysis"};
  app.require_subcommand(1);

  CommonArgs analyze_args, grade_args, sweep_args, ingest_args;
  std::string analyze_input, grade_input, sweep_image, ingest_root;
  bool annotate = false;
  int sweep_grain_id = 1;

  CLI::App* analyze = app.add_subcommand("analyze", "per-image grain reports");
  analyze->add_option("input", analyze_input, "image file or directory")->required();
  analyze->add_flag("--annotate", annotate, "write overlay PNGs");
  add_common(analyze, analyze_args);

  CLI::App* grade = app.add_subcommand("grade", "aggregate sample report");
  grade->add_option("input", grade_input, "image file or directory")->required();
  add_common(grade, grade_args);

  CLI::App* sweep = app.add_subcommand("sweep", "brightness sweep for one grain");
  sweep->add_option("image", sweep_image, "image file")->required();
  sweep->add_option("--grain-id", sweep_grain_id, "grain id from analyze")
      ->required();
  add_common(sweep, sweep_args);

  std::string attn_kind, attn_tensor;
  ricegrade::AttnOptions attn_options;
  CLI::App* attn = app.add_subcommand("attn", "apply an attention op to a tensor file");
  attn->add_option("kind", attn_kind, "simam or eca")->required();
  attn->add_option("tensor", attn_tensor, "tensor JSON file")->required();
  attn->add_option("--lambda", attn_options.lambda, "simam coefficient");
  attn->add_option("--gamma", attn_options.gamma, "eca kernel gamma");
  attn->add_option("--b", attn_options.b, "eca kernel offset");
  attn->add_option("--kernel", [&attn_options](const std::vector<std::string>& v) {
    attn_options.kernel = std::stoi(v.front());
    return true;
  }, "eca kernel size override (odd)");
  attn->add_option("--weights", attn_options.weights,
                   "eca kernel weights (space separated)");
  attn->add_option("--out-tensor", attn_options.out_path, "output tensor path");

  CLI::App* ingest = app.add_subcommand("ingest", "catalog a dataset tree");
  ingest->add_option("root", ingest_root, "dataset root directory")->required();
  add_common(ingest, ingest_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      ricegrade::AnalyzeOptions options;
      options.annotate = annotate;
      return ricegrade::cmd_analyze(analyze_input, resolve_config(analyze_args),
                                    options);
    }
    if (grade->parsed()) {
      return ricegrade::cmd_grade(grade_input, resolve_config(grade_args));
    }
    if (sweep->parsed()) {
      return ricegrade::cmd_sweep(sweep_image, sweep_grain_id,
                                  resolve_config(sweep_args));
    }
    if (attn->parsed()) {
      return ricegrade::cmd_attn(attn_kind, attn_tensor, attn_options);
    }
    if (ingest->parsed()) {
      return ricegrade::cmd_ingest(ingest_root, resolve_config(ingest_args));
    }
  } catch (const std::exception& e) {
    std::cerr << "ricegrade: " << e.what() << "\n";
    return ricegrade::kExitFailure;
  }
  return ricegrade::kExitFailure;
}
