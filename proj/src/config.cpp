#include "ricegrade/config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ricegrade {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": " + v);
  }
}

long long parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for " + key + ": " + v);
  }
}

}  // namespace

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "calibration_mm_per_px") {
      config.calibration_mm_per_px = parse_double(value, key);
    } else if (key == "declared_variety") {
      auto v = parse_variety(value);
      if (!v) throw std::invalid_argument("config: unknown variety " + value);
      config.declared_variety = *v;
    } else if (key == "brightness_level") {
      config.brightness_level = static_cast<int>(parse_int(value, key));
    } else if (key == "binarize_threshold") {
      if (value == "otsu" || value == "auto") {
        config.binarize_threshold.reset();
      } else {
        config.binarize_threshold = static_cast<int>(parse_int(value, key));
      }
    } else if (key == "min_grain_area_px") {
      config.min_grain_area_px = static_cast<int>(parse_int(value, key));
    } else if (key == "median_window") {
      config.median_window = static_cast<int>(parse_int(value, key));
    } else if (key == "chalk_rho") {
      config.chalk_rho = parse_double(value, key);
    } else if (key == "chalk_eps") {
      config.chalk_eps = parse_double(value, key);
    } else if (key == "chalk_max_iter") {
      config.chalk_max_iter = static_cast<int>(parse_int(value, key));
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "chalky_grain_min_ratio") {
      config.chalky_grain_min_ratio = parse_double(value, key);
    } else if (key == "standards_path") {
      if (value.empty() || value == "builtin") {
        config.standards_path.reset();
      } else {
        config.standards_path = value;
      }
    } else if (key == "output_dir") {
      config.output_dir = value;
    } else if (key == "workers") {
      config.workers = static_cast<int>(parse_int(value, key));
    } else if (key == "nm_branch") {
      auto b = parse_branch(value);
      if (!b || !is_glutinous(*b)) {
        throw std::invalid_argument("config: nm_branch must be a glutinous branch");
      }
      config.nm_branch = *b;
    } else if (key == "brightness_gains") {
      std::istringstream list(value);
      std::string item;
      std::vector<double> gains;
      while (std::getline(list, item, ',')) {
        gains.push_back(parse_double(trim(item), key));
      }
      if (gains.size() != config.brightness_gains.size()) {
        throw std::invalid_argument("config: brightness_gains needs 5 values");
      }
      std::copy(gains.begin(), gains.end(), config.brightness_gains.begin());
    } else if (key == "axis_method") {
      if (value == "min_area_rect") {
        config.axis_method = AxisMethod::MinAreaRect;
      } else if (value == "pca") {
        config.axis_method = AxisMethod::Pca;
      } else {
        throw std::invalid_argument("config: axis_method must be min_area_rect or pca");
      }
    } else {
      throw std::invalid_argument("config: unknown key " + key);
    }
  }
  return config;
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_kv(const PipelineConfig& c) {
  std::ostringstream out;
  out << "# ricegrade pipeline configuration\n";
  out << "calibration_mm_per_px = " << format_double(c.calibration_mm_per_px)
      << "\n";
  out << "declared_variety = " << to_string(c.declared_variety) << "\n";
  out << "brightness_level = " << c.brightness_level << "\n";
  out << "binarize_threshold = "
      << (c.binarize_threshold ? std::to_string(*c.binarize_threshold)
                               : std::string("otsu"))
      << "\n";
  out << "min_grain_area_px = " << c.min_grain_area_px << "\n";
  out << "median_window = " << c.median_window << "\n";
  out << "chalk_rho = " << format_double(c.chalk_rho) << "\n";
  out << "chalk_eps = " << format_double(c.chalk_eps) << "\n";
  out << "chalk_max_iter = " << c.chalk_max_iter << "\n";
  out << "seed = " << c.seed << "\n";
  out << "chalky_grain_min_ratio = " << format_double(c.chalky_grain_min_ratio)
      << "\n";
  out << "standards_path = "
      << (c.standards_path ? *c.standards_path : std::string("builtin")) << "\n";
  out << "output_dir = " << c.output_dir << "\n";
  out << "workers = " << c.workers << "\n";
  out << "nm_branch = " << to_string(c.nm_branch) << "\n";
  out << "brightness_gains = ";
  for (std::size_t i = 0; i < c.brightness_gains.size(); ++i) {
    if (i) out << ",";
    out << format_double(c.brightness_gains[i]);
  }
  out << "\n";
  out << "axis_method = "
      << (c.axis_method == AxisMethod::MinAreaRect ? "min_area_rect" : "pca")
      << "\n";
  return out.str();
}

int resolve_worker_count(int configured) {
  int workers = configured;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  if (const char* cap_str = std::getenv("RICEGRADE_THREADS")) {
    try {
      const int cap = std::stoi(cap_str);
      if (cap >= 1) workers = std::min(workers, cap);
    } catch (const std::exception&) {
      // Unparseable cap is ignored.
    }
  }
  return std::max(workers, 1);
}

bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
  return a.calibration_mm_per_px == b.calibration_mm_per_px &&
         a.declared_variety == b.declared_variety &&
         a.brightness_level == b.brightness_level &&
         a.binarize_threshold == b.binarize_threshold &&
         a.min_grain_area_px == b.min_grain_area_px &&
         a.median_window == b.median_window && a.chalk_rho == b.chalk_rho &&
         a.chalk_eps == b.chalk_eps && a.chalk_max_iter == b.chalk_max_iter &&
         a.seed == b.seed &&
         a.chalky_grain_min_ratio == b.chalky_grain_min_ratio &&
         a.standards_path == b.standards_path && a.output_dir == b.output_dir &&
         a.workers == b.workers && a.nm_branch == b.nm_branch &&
         a.brightness_gains == b.brightness_gains &&
         a.axis_method == b.axis_method;
}

}  // namespace ricegrade
