#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ricegrade/segmentation.hpp"
#include "ricegrade/standards.hpp"

namespace ricegrade {

/// Round-hole sieve surrogate: a grain passes a d-mm hole when its short
/// axis is below d.
bool retained_on_sieve(const Grain& grain, double hole_diameter_mm);

/// Whole when the long axis reaches 3/4 of the batch average whole-grain
/// length; otherwise sizeable broken when retained on the 2.0 mm sieve,
/// tiny broken below that. Fragments passing the 1.0 mm sieve are dropped
/// from samples before aggregation (see excluded_fragment).
CompletenessClass classify_completeness(const Grain& grain,
                                        double batch_avg_whole_length_mm);

/// Broken fragment too small to stay on the 1.0 mm sieve; not part of the
/// sample at all.
bool excluded_fragment(const Grain& grain, double batch_avg_whole_length_mm);

/// Two passes: classify against the variety's table average, then average
/// the long axes of the grains that came out whole. Falls back to the table
/// value when nothing classifies as whole.
double compute_batch_avg_whole_length(const std::vector<Grain>& grains,
                                      const RiceVariety& variety);

struct BrokenRates {
  double x1 = 0.0;  // small (tiny) broken mass fraction
  double x2 = 0.0;  // total broken mass fraction
};

/// Mass fractions of broken rice. Without measured masses the projected
/// area (mm^2) stands in for mass.
BrokenRates broken_rates(const std::vector<Grain>& grains,
                         const std::vector<CompletenessClass>& classes,
                         const std::optional<std::vector<double>>& masses =
                             std::nullopt);

struct VarietyMatch {
  VarietyCode code;
  double distance;  // in standardized (length, width) space
};

/// Nearest variety centroid in z-scaled (length, width) space; each
/// dimension is divided by the across-variety population deviation. Ties go
/// to the earlier enum value.
VarietyMatch classify_variety(const Grain& grain,
                              const std::vector<RiceVariety>& table);

double admixture_rate(const std::vector<Grain>& grains, VarietyCode declared,
                      const std::vector<RiceVariety>& table);

/// Smallest level whose row accepts every rate; nullopt when none does
/// (off grade). Glutinous rows carry no chalk threshold, so D is ignored
/// there.
std::optional<int> assign_grade(Branch branch, double x1, double x2, double d,
                                double admixture,
                                const std::vector<GradingStandard>& table);

enum class MassBasis { MeasuredMass, AreaProxy };

const char* to_string(MassBasis basis);

struct ClassCounts {
  int whole = 0;
  int sizeable_broken = 0;
  int tiny_broken = 0;
};

struct SampleReport {
  VarietyCode declared_variety = VarietyCode::GD;
  int n_grains = 0;
  ClassCounts class_counts;
  double small_broken_rate = 0.0;  // X1
  double broken_rate = 0.0;        // X2
  double chalkiness = 0.0;         // D
  double admixture_rate = 0.0;
  std::optional<int> grade;        // nullopt = off grade
  MassBasis mass_basis = MassBasis::AreaProxy;
};

std::string report_to_json(const SampleReport& report, int indent = 2);
std::string report_to_csv(const SampleReport& report);

}  // namespace ricegrade
