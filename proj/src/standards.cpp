#include "ricegrade/standards.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ricegrade {

bool is_glutinous(Branch b) {
  return b == Branch::GlutinousJaponica || b == Branch::GlutinousIndica;
}

const char* to_string(VarietyCode c) {
  switch (c) {
    case VarietyCode::GD: return "GD";
    case VarietyCode::NM: return "NM";
    case VarietyCode::WC: return "WC";
    case VarietyCode::PJX: return "PJX";
    case VarietyCode::WN: return "WN";
    case VarietyCode::YB: return "YB";
  }
  return "?";
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::Indica: return "Indica";
    case Branch::Japonica: return "Japonica";
    case Branch::GlutinousJaponica: return "GlutinousJaponica";
    case Branch::GlutinousIndica: return "GlutinousIndica";
  }
  return "?";
}

const char* to_string(CompletenessClass c) {
  switch (c) {
    case CompletenessClass::Whole: return "whole";
    case CompletenessClass::SizeableBroken: return "sizeable_broken";
    case CompletenessClass::TinyBroken: return "tiny_broken";
  }
  return "?";
}

std::optional<VarietyCode> parse_variety(const std::string& s) {
  if (s == "GD") return VarietyCode::GD;
  if (s == "NM") return VarietyCode::NM;
  if (s == "WC") return VarietyCode::WC;
  if (s == "PJX") return VarietyCode::PJX;
  if (s == "WN") return VarietyCode::WN;
  if (s == "YB") return VarietyCode::YB;
  return std::nullopt;
}

std::optional<Branch> parse_branch(const std::string& s) {
  if (s == "Indica") return Branch::Indica;
  if (s == "Japonica") return Branch::Japonica;
  if (s == "GlutinousJaponica") return Branch::GlutinousJaponica;
  if (s == "GlutinousIndica") return Branch::GlutinousIndica;
  return std::nullopt;
}

std::vector<RiceVariety> default_varieties(Branch nm_branch) {
  if (!is_glutinous(nm_branch)) {
    throw std::invalid_argument("NM branch must be one of the glutinous branches");
  }
  return {
      {VarietyCode::GD, Branch::Indica, 6.74, 1.74},
      {VarietyCode::NM, nm_branch, 4.45, 2.86},
      {VarietyCode::WC, Branch::Indica, 6.63, 2.44},
      {VarietyCode::PJX, Branch::Japonica, 4.82, 2.83},
      {VarietyCode::WN, Branch::Indica, 6.81, 2.20},
      {VarietyCode::YB, Branch::Japonica, 4.59, 2.62},
  };
}

const RiceVariety& variety(const std::vector<RiceVariety>& table,
                           VarietyCode code) {
  for (const auto& v : table) {
    if (v.code == code) return v;
  }
  throw std::out_of_range("variety not in table");
}

std::pair<double, double> variety_centroid(VarietyCode code) {
  static const std::vector<RiceVariety> table = default_varieties();
  const RiceVariety& v = variety(table, code);
  return {v.avg_length_mm, v.avg_width_mm};
}

std::vector<GradingStandard> default_standards() {
  return {
      {Branch::Indica, 1, 0.15, 0.010, 0.02, 0.05},
      {Branch::Indica, 2, 0.20, 0.015, 0.05, 0.05},
      {Branch::Indica, 3, 0.30, 0.020, 0.08, 0.05},
      {Branch::Japonica, 1, 0.10, 0.010, 0.02, 0.05},
      {Branch::Japonica, 2, 0.15, 0.015, 0.04, 0.05},
      {Branch::Japonica, 3, 0.20, 0.020, 0.06, 0.05},
      {Branch::GlutinousJaponica, 1, 0.10, 0.015, std::nullopt, 0.05},
      {Branch::GlutinousJaponica, 2, 0.15, 0.020, std::nullopt, 0.05},
      {Branch::GlutinousIndica, 1, 0.15, 0.020, std::nullopt, 0.05},
      {Branch::GlutinousIndica, 2, 0.25, 0.025, std::nullopt, 0.05},
  };
}

const GradingStandard& standard_row(const std::vector<GradingStandard>& table,
                                    Branch branch, int level) {
  for (const auto& row : table) {
    if (row.branch == branch && row.level == level) return row;
  }
  std::ostringstream msg;
  msg << "no grading row for branch " << to_string(branch) << " level " << level;
  throw std::out_of_range(msg.str());
}

int max_level(const std::vector<GradingStandard>& table, Branch branch) {
  int level = 0;
  for (const auto& row : table) {
    if (row.branch == branch && row.level > level) level = row.level;
  }
  return level;
}

static void validate_standards(const std::vector<GradingStandard>& table) {
  for (const auto& row : table) {
    if (row.level < 1) throw std::invalid_argument("standards: level must be >= 1");
    if (is_glutinous(row.branch) && row.max_chalk_rate.has_value()) {
      throw std::invalid_argument("standards: glutinous rows carry no chalk threshold");
    }
    if (!is_glutinous(row.branch) && !row.max_chalk_rate.has_value()) {
      throw std::invalid_argument("standards: non-glutinous rows need a chalk threshold");
    }
  }
}

std::vector<GradingStandard> load_standards_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open standards file: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  std::vector<GradingStandard> table;
  for (const auto& item : doc) {
    GradingStandard row;
    auto branch = parse_branch(item.at("branch").get<std::string>());
    if (!branch) throw std::runtime_error("standards: unknown branch in " + path);
    row.branch = *branch;
    row.level = item.at("level").get<int>();
    row.max_broken_rate = item.at("max_broken_rate").get<double>();
    row.max_small_broken_rate = item.at("max_small_broken_rate").get<double>();
    if (item.contains("max_chalk_rate") && !item["max_chalk_rate"].is_null()) {
      row.max_chalk_rate = item["max_chalk_rate"].get<double>();
    }
    row.max_admixture_rate = item.at("max_admixture_rate").get<double>();
    table.push_back(row);
  }
  validate_standards(table);
  return table;
}

std::string standards_to_json(const std::vector<GradingStandard>& table) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& row : table) {
    nlohmann::ordered_json item;
    item["branch"] = to_string(row.branch);
    item["level"] = row.level;
    item["max_broken_rate"] = row.max_broken_rate;
    item["max_small_broken_rate"] = row.max_small_broken_rate;
    if (row.max_chalk_rate) {
      item["max_chalk_rate"] = *row.max_chalk_rate;
    } else {
      item["max_chalk_rate"] = nullptr;
    }
    item["max_admixture_rate"] = row.max_admixture_rate;
    doc.push_back(item);
  }
  return doc.dump(2);
}

}  // namespace ricegrade
