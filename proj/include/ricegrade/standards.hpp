#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ricegrade {

enum class VarietyCode { GD, NM, WC, PJX, WN, YB };

enum class Branch { Indica, Japonica, GlutinousJaponica, GlutinousIndica };

enum class CompletenessClass { Whole, SizeableBroken, TinyBroken };

/// One rice variety with its average kernel morphology (mm).
struct RiceVariety {
  VarietyCode code;
  Branch branch;
  double avg_length_mm;
  double avg_width_mm;
};

/// One GB/T 1354-2018 threshold row. Rates are fractions in [0,1];
/// max_chalk_rate is absent for glutinous branches.
struct GradingStandard {
  Branch branch;
  int level;
  double max_broken_rate;
  double max_small_broken_rate;
  std::optional<double> max_chalk_rate;
  double max_admixture_rate;
};

bool is_glutinous(Branch b);

const char* to_string(VarietyCode c);
const char* to_string(Branch b);
const char* to_string(CompletenessClass c);
std::optional<VarietyCode> parse_variety(const std::string& s);
std::optional<Branch> parse_branch(const std::string& s);

/// The six built-in varieties. NM is glutinous but the standard splits
/// glutinous rows by japonica/indica branch, so NM's branch is a
/// configuration choice; defaults to the japonica branch.
std::vector<RiceVariety> default_varieties(
    Branch nm_branch = Branch::GlutinousJaponica);

const RiceVariety& variety(const std::vector<RiceVariety>& table,
                           VarietyCode code);

/// (avg_length_mm, avg_width_mm) for a variety.
std::pair<double, double> variety_centroid(VarietyCode code);

/// Built-in quality threshold rows: 3 levels for indica/japonica,
/// 2 for each glutinous branch, all with a 5% admixture cap.
std::vector<GradingStandard> default_standards();

/// Throws std::out_of_range when the level does not exist for the branch.
const GradingStandard& standard_row(const std::vector<GradingStandard>& table,
                                    Branch branch, int level);

int max_level(const std::vector<GradingStandard>& table, Branch branch);

/// JSON schema: array of rows {branch, level, max_broken_rate,
/// max_small_broken_rate, max_chalk_rate?, max_admixture_rate}.
std::vector<GradingStandard> load_standards_json(const std::string& path);
std::string standards_to_json(const std::vector<GradingStandard>& table);

}  // namespace ricegrade
