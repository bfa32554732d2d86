#include "ricegrade/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "ricegrade/attention.hpp"
#include "ricegrade/image_io.hpp"
#include "ricegrade/imgproc.hpp"
#include "ricegrade/overlay.hpp"

namespace fs = std::filesystem;

namespace ricegrade {

namespace {

nlohmann::ordered_json config_json(const PipelineConfig& c) {
  nlohmann::ordered_json doc;
  doc["calibration_mm_per_px"] = c.calibration_mm_per_px;
  doc["declared_variety"] = to_string(c.declared_variety);
  doc["brightness_level"] = c.brightness_level;
  if (c.binarize_threshold) {
    doc["binarize_threshold"] = *c.binarize_threshold;
  } else {
    doc["binarize_threshold"] = "otsu";
  }
  doc["min_grain_area_px"] = c.min_grain_area_px;
  doc["median_window"] = c.median_window;
  doc["chalk_rho"] = c.chalk_rho;
  doc["chalk_eps"] = c.chalk_eps;
  doc["chalk_max_iter"] = c.chalk_max_iter;
  doc["seed"] = c.seed;
  doc["chalky_grain_min_ratio"] = c.chalky_grain_min_ratio;
  doc["standards_path"] =
      c.standards_path ? nlohmann::ordered_json(*c.standards_path)
                       : nlohmann::ordered_json("builtin");
  doc["output_dir"] = c.output_dir;
  doc["workers"] = c.workers;
  doc["nm_branch"] = to_string(c.nm_branch);
  doc["brightness_gains"] = c.brightness_gains;
  doc["axis_method"] =
      c.axis_method == AxisMethod::MinAreaRect ? "min_area_rect" : "pca";
  return doc;
}

ChalkParams chalk_params(const PipelineConfig& c) {
  ChalkParams params;
  params.rho = c.chalk_rho;
  params.eps = c.chalk_eps;
  params.max_iter = c.chalk_max_iter;
  params.seed = c.seed;
  return params;
}

DetectConfig detect_config(const PipelineConfig& c) {
  DetectConfig dc;
  dc.binarize_threshold = c.binarize_threshold;
  dc.min_grain_area_px = c.min_grain_area_px;
  dc.median_window = c.median_window;
  dc.axis_method = c.axis_method;
  return dc;
}

GrayImage preprocess(const GrayImage& img, const PipelineConfig& c) {
  GrayImage out = contrast_stretch(img);
  return adjust_brightness(out, c.brightness_level, c.brightness_gains);
}

nlohmann::ordered_json grain_json(const GrainAnalysis& ga) {
  nlohmann::ordered_json g;
  g["id"] = ga.grain.component_id;
  g["bbox"] = {ga.grain.bbox_x, ga.grain.bbox_y, ga.grain.bbox_w,
               ga.grain.bbox_h};
  g["pixel_count"] = ga.grain.pixel_count;
  g["long_axis_mm"] = ga.grain.long_axis_mm;
  g["short_axis_mm"] = ga.grain.short_axis_mm;
  g["area_mm2"] = ga.grain.area_mm2;
  g["completeness"] = to_string(ga.completeness);
  g["excluded_fragment"] = ga.excluded_fragment;
  g["chalk_ratio"] = ga.chalk.ratio;
  g["chalky_px"] = ga.chalk.chalky_px;
  g["chalk_threshold"] = ga.chalk.threshold;
  g["variety_guess"] = to_string(ga.variety.code);
  g["variety_distance"] = ga.variety.distance;
  g["suspected_overlap"] = ga.suspected_overlap;
  return g;
}

nlohmann::ordered_json image_report_json(const ImageAnalysis& analysis,
                                         const PipelineConfig& config) {
  nlohmann::ordered_json doc;
  doc["tool_version"] = kToolVersion;
  doc["input"] = analysis.path;
  doc["config"] = config_json(config);
  doc["threshold_used"] = analysis.threshold_used;
  doc["batch_avg_whole_length_mm"] = analysis.batch_avg_whole_length_mm;
  doc["n_grains"] = analysis.grains.size();
  doc["grains"] = nlohmann::ordered_json::array();
  for (const auto& ga : analysis.grains) doc["grains"].push_back(grain_json(ga));
  return doc;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct VarietyTables {
  std::vector<RiceVariety> varieties;
  std::vector<GradingStandard> standards;
};

VarietyTables load_tables(const PipelineConfig& config) {
  VarietyTables tables;
  tables.varieties = default_varieties(config.nm_branch);
  tables.standards = config.standards_path
                         ? load_standards_json(*config.standards_path)
                         : default_standards();
  return tables;
}

template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  workers = std::min<int>(workers, static_cast<int>(count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

struct PerImageResult {
  bool ok = false;
  ImageAnalysis analysis;
  std::string error;
};

std::vector<PerImageResult> analyze_inputs(const std::vector<std::string>& inputs,
                                           const PipelineConfig& config,
                                           const std::vector<RiceVariety>& varieties) {
  std::vector<PerImageResult> results(inputs.size());
  const int workers = resolve_worker_count(config.workers);
  parallel_for(inputs.size(), workers, [&](std::size_t i) {
    try {
      const GrayImage img = read_gray(inputs[i], config.calibration_mm_per_px);
      results[i].analysis = analyze_image(img, config, varieties);
      results[i].analysis.path = inputs[i];
      results[i].ok = true;
    } catch (const std::exception& e) {
      results[i].error = e.what();
    }
  });
  return results;
}

nlohmann::ordered_json manifest_json(
    const PipelineConfig& config, const std::vector<std::string>& inputs,
    const std::vector<PerImageResult>& results,
    const std::vector<std::string>& report_paths, double elapsed_ms) {
  nlohmann::ordered_json doc;
  doc["tool_version"] = kToolVersion;
  doc["config"] = config_json(config);
  doc["inputs"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    nlohmann::ordered_json entry;
    entry["path"] = inputs[i];
    try {
      entry["fnv1a64"] = file_hash_hex(inputs[i]);
    } catch (const std::exception&) {
      entry["fnv1a64"] = nullptr;
    }
    if (i < results.size() && !results[i].ok) entry["error"] = results[i].error;
    if (i < report_paths.size() && !report_paths[i].empty()) {
      entry["report"] = report_paths[i];
    }
    doc["inputs"].push_back(entry);
  }
  doc["elapsed_ms"] = elapsed_ms;
  return doc;
}

}  // namespace

ImageAnalysis analyze_image(const GrayImage& img, const PipelineConfig& config,
                            const std::vector<RiceVariety>& varieties) {
  const GrayImage prepared = preprocess(img, config);
  const DetectResult detection = detect_grains(prepared, detect_config(config));

  ImageAnalysis analysis;
  analysis.threshold_used = detection.threshold_used;

  const RiceVariety& declared = variety(varieties, config.declared_variety);
  std::vector<Grain> grains = detection.grains;
  analysis.batch_avg_whole_length_mm =
      grains.empty() ? declared.avg_length_mm
                     : compute_batch_avg_whole_length(grains, declared);

  const double expected_area_mm2 = std::numbers::pi / 4.0 *
                                   declared.avg_length_mm *
                                   declared.avg_width_mm;
  const ChalkParams chalk = chalk_params(config);
  for (Grain& grain : grains) {
    GrainAnalysis ga;
    ga.completeness =
        classify_completeness(grain, analysis.batch_avg_whole_length_mm);
    ga.excluded_fragment =
        excluded_fragment(grain, analysis.batch_avg_whole_length_mm);
    ga.chalk = segment_chalk(grain, prepared, chalk);
    ga.variety = classify_variety(grain, varieties);
    ga.suspected_overlap = grain.area_mm2 > 3.0 * expected_area_mm2;
    ga.grain = std::move(grain);
    analysis.grains.push_back(std::move(ga));
  }
  return analysis;
}

SampleReport build_sample_report(const std::vector<ImageAnalysis>& images,
                                 const PipelineConfig& config,
                                 const std::vector<RiceVariety>& varieties,
                                 const std::vector<GradingStandard>& standards) {
  std::vector<Grain> pooled;
  std::vector<const ChalkMask*> pooled_masks;
  for (const ImageAnalysis& image : images) {
    for (const GrainAnalysis& ga : image.grains) {
      pooled.push_back(ga.grain);
      pooled_masks.push_back(&ga.chalk);
    }
  }
  if (pooled.empty()) {
    throw std::invalid_argument("build_sample_report: no grains detected");
  }

  const RiceVariety& declared = variety(varieties, config.declared_variety);
  const double batch_avg = compute_batch_avg_whole_length(pooled, declared);

  // Fragments that fall through the 1.0 mm sieve leave the sample.
  std::vector<Grain> sample;
  std::vector<ChalkMask> sample_masks;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    if (excluded_fragment(pooled[i], batch_avg)) continue;
    sample.push_back(pooled[i]);
    sample_masks.push_back(*pooled_masks[i]);
  }
  if (sample.empty()) {
    throw std::invalid_argument("build_sample_report: all grains were sub-sieve fragments");
  }

  SampleReport report;
  report.declared_variety = config.declared_variety;
  report.n_grains = static_cast<int>(sample.size());
  report.mass_basis = MassBasis::AreaProxy;

  std::vector<CompletenessClass> classes;
  classes.reserve(sample.size());
  for (const Grain& g : sample) {
    const CompletenessClass cls = classify_completeness(g, batch_avg);
    classes.push_back(cls);
    switch (cls) {
      case CompletenessClass::Whole: ++report.class_counts.whole; break;
      case CompletenessClass::SizeableBroken:
        ++report.class_counts.sizeable_broken;
        break;
      case CompletenessClass::TinyBroken:
        ++report.class_counts.tiny_broken;
        break;
    }
  }

  const BrokenRates rates = broken_rates(sample, classes);
  report.small_broken_rate = rates.x1;
  report.broken_rate = rates.x2;

  const ChalkinessResult chalk =
      chalkiness(sample_masks, config.chalky_grain_min_ratio);
  report.chalkiness = chalk.d;

  report.admixture_rate =
      admixture_rate(sample, config.declared_variety, varieties);
  report.grade = assign_grade(declared.branch, report.small_broken_rate,
                              report.broken_rate, report.chalkiness,
                              report.admixture_rate, standards);
  return report;
}

std::vector<std::string> list_images(const std::string& input) {
  const fs::path path(input);
  if (fs::is_regular_file(path)) return {input};
  if (!fs::is_directory(path)) {
    throw std::runtime_error("input is neither a file nor a directory: " + input);
  }
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".pgm") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t hash = 14695981039346656037ull;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0')
      << fnv1a64(bytes.data(), bytes.size());
  return hex.str();
}

Catalog ingest_dataset(const std::string& root) {
  const fs::path root_path(root);
  if (!fs::is_directory(root_path)) {
    throw std::runtime_error("dataset root does not exist: " + root);
  }
  Catalog catalog;
  std::vector<fs::path> subdirs;
  for (const auto& entry : fs::directory_iterator(root_path)) {
    if (entry.is_directory()) subdirs.push_back(entry.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  for (const fs::path& dir : subdirs) {
    const auto variety = parse_variety(dir.filename().string());
    std::vector<std::string> files = list_images(dir.string());
    for (const std::string& file : files) {
      CatalogEntry entry;
      entry.path = file;
      entry.variety = variety;
      const std::string stem = fs::path(file).stem().string();
      if (stem.find("_whole") != std::string::npos) {
        entry.completeness = CompletenessClass::Whole;
      } else if (stem.find("_sizeable") != std::string::npos) {
        entry.completeness = CompletenessClass::SizeableBroken;
      } else if (stem.find("_tiny") != std::string::npos) {
        entry.completeness = CompletenessClass::TinyBroken;
      }
      catalog.entries.push_back(std::move(entry));
    }
  }
  return catalog;
}

int cmd_analyze(const std::string& input, const PipelineConfig& config,
                const AnalyzeOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> inputs;
  try {
    inputs = list_images(input);
  } catch (const std::exception& e) {
    std::cerr << "analyze: " << e.what() << "\n";
    return kExitFailure;
  }
  if (inputs.empty()) {
    std::cerr << "analyze: no images in " << input << "\n";
    return kExitFailure;
  }

  VarietyTables tables;
  try {
    tables = load_tables(config);
    fs::create_directories(config.output_dir);
  } catch (const std::exception& e) {
    std::cerr << "analyze: " << e.what() << "\n";
    return kExitFailure;
  }

  const auto results = analyze_inputs(inputs, config, tables.varieties);

  std::vector<std::string> report_paths(inputs.size());
  std::size_t failures = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!results[i].ok) {
      ++failures;
      std::cerr << "analyze: " << inputs[i] << ": " << results[i].error << "\n";
      continue;
    }
    const std::string stem = fs::path(inputs[i]).stem().string();
    const fs::path report_path =
        fs::path(config.output_dir) / (stem + ".report.json");
    write_text(report_path,
               image_report_json(results[i].analysis, config).dump(2) + "\n");
    report_paths[i] = report_path.string();

    if (options.annotate) {
      const GrayImage img = read_gray(inputs[i], config.calibration_mm_per_px);
      const GrayImage prepared = preprocess(img, config);
      std::vector<Grain> grains;
      std::vector<ChalkMask> masks;
      for (const auto& ga : results[i].analysis.grains) {
        grains.push_back(ga.grain);
        masks.push_back(ga.chalk);
      }
      write_png((fs::path(config.output_dir) / (stem + ".overlay.png")).string(),
                grain_overlay(prepared, grains));
      write_png((fs::path(config.output_dir) / (stem + ".chalk.png")).string(),
                chalk_overlay(prepared, grains, masks));
    }
  }

  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                start)
          .count();
  write_text(fs::path(config.output_dir) / "manifest.json",
             manifest_json(config, inputs, results, report_paths, elapsed_ms)
                     .dump(2) +
                 "\n");

  if (failures == inputs.size()) return kExitFailure;
  return failures > 0 ? kExitPartial : kExitOk;
}

int cmd_grade(const std::string& input, const PipelineConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> inputs;
  try {
    inputs = list_images(input);
  } catch (const std::exception& e) {
    std::cerr << "grade: " << e.what() << "\n";
    return kExitFailure;
  }
  if (inputs.empty()) {
    std::cerr << "grade: no images in " << input << "\n";
    return kExitFailure;
  }

  VarietyTables tables;
  try {
    tables = load_tables(config);
    fs::create_directories(config.output_dir);
  } catch (const std::exception& e) {
    std::cerr << "grade: " << e.what() << "\n";
    return kExitFailure;
  }

  const auto results = analyze_inputs(inputs, config, tables.varieties);
  std::vector<ImageAnalysis> analyses;
  std::size_t failures = 0;
  for (const auto& r : results) {
    if (r.ok) {
      analyses.push_back(r.analysis);
    } else {
      ++failures;
      std::cerr << "grade: " << r.error << "\n";
    }
  }

  SampleReport report;
  try {
    report = build_sample_report(analyses, config, tables.varieties,
                                 tables.standards);
  } catch (const std::exception& e) {
    std::cerr << "grade: " << e.what() << "\n";
    return kExitFailure;
  }

  nlohmann::ordered_json doc =
      nlohmann::ordered_json::parse(report_to_json(report));
  doc["tool_version"] = kToolVersion;
  doc["config"] = config_json(config);
  write_text(fs::path(config.output_dir) / "sample_report.json",
             doc.dump(2) + "\n");
  write_text(fs::path(config.output_dir) / "sample_report.csv",
             report_to_csv(report));

  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                start)
          .count();
  write_text(fs::path(config.output_dir) / "manifest.json",
             manifest_json(config, inputs, results, {}, elapsed_ms).dump(2) +
                 "\n");

  std::cout << report_to_csv(report);
  if (failures == inputs.size()) return kExitFailure;
  return failures > 0 ? kExitPartial : kExitOk;
}

int cmd_sweep(const std::string& image_path, int grain_id,
              const PipelineConfig& config) {
  GrayImage img;
  VarietyTables tables;
  try {
    tables = load_tables(config);
    img = read_gray(image_path, config.calibration_mm_per_px);
    fs::create_directories(config.output_dir);
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << "\n";
    return kExitFailure;
  }

  const GrayImage prepared = preprocess(img, config);
  const DetectResult detection = detect_grains(prepared, detect_config(config));
  const Grain* target = nullptr;
  for (const Grain& g : detection.grains) {
    if (g.component_id == grain_id) target = &g;
  }
  if (!target) {
    std::cerr << "sweep: grain id " << grain_id << " not found in "
              << image_path << " (" << detection.grains.size()
              << " grains detected)\n";
    return kExitFailure;
  }

  const auto rows = luminance_sweep(prepared, *target, chalk_params(config),
                                    config.brightness_gains);
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].chalk_ratio < rows[i - 1].chalk_ratio) monotone = false;
  }

  std::ostringstream csv;
  csv << "level,chalk_ratio\n";
  for (const auto& row : rows) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", row.chalk_ratio);
    csv << row.level << ',' << buf << '\n';
  }
  const std::string stem = fs::path(image_path).stem().string();
  write_text(fs::path(config.output_dir) / (stem + ".sweep.csv"), csv.str());
  std::cout << csv.str();
  std::cout << "monotonic_non_decreasing," << (monotone ? "true" : "false")
            << "\n";
  return kExitOk;
}

int cmd_attn(const std::string& kind, const std::string& tensor_path,
             const AttnOptions& options) {
  Tensor4 input;
  try {
    input = read_tensor_json(tensor_path);
  } catch (const std::exception& e) {
    std::cerr << "attn: " << e.what() << "\n";
    return kExitFailure;
  }

  Tensor4 output;
  int params_added = 0;
  try {
    if (kind == "simam") {
      SimamParams params;
      params.lambda = options.lambda;
      output = simam(input, params);
    } else if (kind == "eca") {
      EcaParams params;
      params.gamma = options.gamma;
      params.b = options.b;
      params.kernel_override = options.kernel;
      params.kernel_weights = options.weights;
      params_added = eca_kernel_size(input.c(), params);
      output = eca(input, params);
    } else {
      std::cerr << "attn: kind must be simam or eca\n";
      return kExitFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "attn: " << e.what() << "\n";
    return kExitFailure;
  }

  const std::string out_path =
      options.out_path.empty() ? tensor_path + ".out.json" : options.out_path;
  try {
    write_tensor_json(out_path, output);
  } catch (const std::exception& e) {
    std::cerr << "attn: " << e.what() << "\n";
    return kExitFailure;
  }

  const TensorStats stats = tensor_stats(output);
  std::cout << "op," << kind << "\n";
  std::cout << "shape," << output.n() << 'x' << output.c() << 'x' << output.h()
            << 'x' << output.w() << "\n";
  std::cout << "params_added," << params_added << "\n";
  std::cout << "out_min," << stats.min << "\n";
  std::cout << "out_max," << stats.max << "\n";
  std::cout << "out_mean," << stats.mean << "\n";
  std::cout << "written," << out_path << "\n";
  return kExitOk;
}

int cmd_ingest(const std::string& root, const PipelineConfig& config) {
  Catalog catalog;
  try {
    catalog = ingest_dataset(root);
    fs::create_directories(config.output_dir);
  } catch (const std::exception& e) {
    std::cerr << "ingest: " << e.what() << "\n";
    return kExitFailure;
  }
  if (catalog.entries.empty()) {
    std::cerr << "ingest: warning: no images found under " << root << "\n";
  }

  nlohmann::ordered_json doc;
  doc["tool_version"] = kToolVersion;
  doc["root"] = root;
  doc["entries"] = nlohmann::ordered_json::array();
  int labeled = 0;
  for (const auto& entry : catalog.entries) {
    nlohmann::ordered_json item;
    item["path"] = entry.path;
    item["variety"] = entry.variety
                          ? nlohmann::ordered_json(to_string(*entry.variety))
                          : nlohmann::ordered_json(nullptr);
    item["completeness"] =
        entry.completeness
            ? nlohmann::ordered_json(to_string(*entry.completeness))
            : nlohmann::ordered_json(nullptr);
    if (entry.variety) ++labeled;
    doc["entries"].push_back(item);
  }
  doc["n_entries"] = catalog.entries.size();
  doc["n_variety_labeled"] = labeled;
  write_text(fs::path(config.output_dir) / "catalog.json", doc.dump(2) + "\n");
  std::cout << "cataloged " << catalog.entries.size() << " images (" << labeled
            << " with variety labels)\n";
  return kExitOk;
}

}  // namespace ricegrade
