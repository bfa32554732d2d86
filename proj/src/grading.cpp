#include "ricegrade/grading.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ricegrade {

bool retained_on_sieve(const Grain& grain, double hole_diameter_mm) {
  return grain.short_axis_mm >= hole_diameter_mm;
}

CompletenessClass classify_completeness(const Grain& grain,
                                        double batch_avg_whole_length_mm) {
  if (batch_avg_whole_length_mm <= 0.0) {
    throw std::invalid_argument("classify_completeness: batch average must be positive");
  }
  if (grain.long_axis_mm >= 0.75 * batch_avg_whole_length_mm) {
    return CompletenessClass::Whole;
  }
  return retained_on_sieve(grain, 2.0) ? CompletenessClass::SizeableBroken
                                       : CompletenessClass::TinyBroken;
}

bool excluded_fragment(const Grain& grain, double batch_avg_whole_length_mm) {
  return grain.long_axis_mm < 0.75 * batch_avg_whole_length_mm &&
         !retained_on_sieve(grain, 1.0);
}

double compute_batch_avg_whole_length(const std::vector<Grain>& grains,
                                      const RiceVariety& variety) {
  if (grains.empty()) {
    throw std::invalid_argument("compute_batch_avg_whole_length: empty grain list");
  }
  const double provisional = variety.avg_length_mm;
  double sum = 0.0;
  int whole = 0;
  for (const Grain& g : grains) {
    if (classify_completeness(g, provisional) == CompletenessClass::Whole) {
      sum += g.long_axis_mm;
      ++whole;
    }
  }
  return whole > 0 ? sum / whole : provisional;
}

BrokenRates broken_rates(const std::vector<Grain>& grains,
                         const std::vector<CompletenessClass>& classes,
                         const std::optional<std::vector<double>>& masses) {
  if (grains.size() != classes.size()) {
    throw std::invalid_argument("broken_rates: grain/class size mismatch");
  }
  if (masses && masses->size() != grains.size()) {
    throw std::invalid_argument("broken_rates: grain/mass size mismatch");
  }
  double m_whole = 0.0, m_tiny = 0.0, m_sizeable = 0.0;
  for (std::size_t i = 0; i < grains.size(); ++i) {
    const double mass = masses ? (*masses)[i] : grains[i].area_mm2;
    if (mass < 0.0) throw std::invalid_argument("broken_rates: negative mass");
    switch (classes[i]) {
      case CompletenessClass::Whole: m_whole += mass; break;
      case CompletenessClass::SizeableBroken: m_sizeable += mass; break;
      case CompletenessClass::TinyBroken: m_tiny += mass; break;
    }
  }
  // Summing buckets before the total keeps m1 <= m2 <= m through rounding,
  // so the rates stay inside [0, 1].
  const double m2 = m_sizeable + m_tiny;
  const double m = m2 + m_whole;
  if (m <= 0.0) throw std::invalid_argument("broken_rates: zero total mass");
  return {m_tiny / m, m2 / m};
}

namespace {

struct Scales {
  double length;
  double width;
};

// Population deviation of each centroid dimension across the table.
Scales standardization_scales(const std::vector<RiceVariety>& table) {
  const double n = static_cast<double>(table.size());
  double ml = 0.0, mw = 0.0;
  for (const auto& v : table) {
    ml += v.avg_length_mm;
    mw += v.avg_width_mm;
  }
  ml /= n;
  mw /= n;
  double vl = 0.0, vw = 0.0;
  for (const auto& v : table) {
    vl += (v.avg_length_mm - ml) * (v.avg_length_mm - ml);
    vw += (v.avg_width_mm - mw) * (v.avg_width_mm - mw);
  }
  return {std::sqrt(vl / n), std::sqrt(vw / n)};
}

}  // namespace

VarietyMatch classify_variety(const Grain& grain,
                              const std::vector<RiceVariety>& table) {
  if (table.empty()) throw std::invalid_argument("classify_variety: empty table");
  const Scales scales = standardization_scales(table);
  VarietyMatch best{table.front().code,
                    std::numeric_limits<double>::infinity()};
  for (const auto& v : table) {
    const double dl = (grain.long_axis_mm - v.avg_length_mm) / scales.length;
    const double dw = (grain.short_axis_mm - v.avg_width_mm) / scales.width;
    const double dist = std::sqrt(dl * dl + dw * dw);
    if (dist < best.distance) {
      best.code = v.code;
      best.distance = dist;
    }
  }
  return best;
}

double admixture_rate(const std::vector<Grain>& grains, VarietyCode declared,
                      const std::vector<RiceVariety>& table) {
  if (grains.empty()) throw std::invalid_argument("admixture_rate: empty grain list");
  int foreign = 0;
  for (const Grain& g : grains) {
    if (classify_variety(g, table).code != declared) ++foreign;
  }
  return static_cast<double>(foreign) / static_cast<double>(grains.size());
}

std::optional<int> assign_grade(Branch branch, double x1, double x2, double d,
                                double admixture,
                                const std::vector<GradingStandard>& table) {
  std::vector<const GradingStandard*> rows;
  for (const auto& row : table) {
    if (row.branch == branch) rows.push_back(&row);
  }
  std::sort(rows.begin(), rows.end(),
            [](const GradingStandard* a, const GradingStandard* b) {
              return a->level < b->level;
            });
  for (const GradingStandard* row : rows) {
    if (x2 > row->max_broken_rate) continue;
    if (x1 > row->max_small_broken_rate) continue;
    if (row->max_chalk_rate && d > *row->max_chalk_rate) continue;
    if (admixture > row->max_admixture_rate) continue;
    return row->level;
  }
  return std::nullopt;
}

const char* to_string(MassBasis basis) {
  return basis == MassBasis::MeasuredMass ? "MeasuredMass" : "AreaProxy";
}

namespace {

nlohmann::ordered_json report_json(const SampleReport& r) {
  nlohmann::ordered_json doc;
  doc["declared_variety"] = to_string(r.declared_variety);
  doc["n_grains"] = r.n_grains;
  doc["class_counts"] = {{"whole", r.class_counts.whole},
                         {"sizeable_broken", r.class_counts.sizeable_broken},
                         {"tiny_broken", r.class_counts.tiny_broken}};
  doc["small_broken_rate"] = r.small_broken_rate;
  doc["broken_rate"] = r.broken_rate;
  doc["chalkiness"] = r.chalkiness;
  doc["admixture_rate"] = r.admixture_rate;
  if (r.grade) {
    doc["grade"] = *r.grade;
  } else {
    doc["grade"] = "OffGrade";
  }
  doc["mass_basis"] = to_string(r.mass_basis);
  return doc;
}

std::string format_rate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string report_to_json(const SampleReport& report, int indent) {
  return report_json(report).dump(indent);
}

std::string report_to_csv(const SampleReport& report) {
  std::ostringstream out;
  out << "declared_variety,n_grains,whole,sizeable_broken,tiny_broken,"
         "small_broken_rate,broken_rate,chalkiness,admixture_rate,grade,"
         "mass_basis\n";
  out << to_string(report.declared_variety) << ',' << report.n_grains << ','
      << report.class_counts.whole << ',' << report.class_counts.sizeable_broken
      << ',' << report.class_counts.tiny_broken << ','
      << format_rate(report.small_broken_rate) << ','
      << format_rate(report.broken_rate) << ','
      << format_rate(report.chalkiness) << ','
      << format_rate(report.admixture_rate) << ',';
  if (report.grade) {
    out << *report.grade;
  } else {
    out << "OffGrade";
  }
  out << ',' << to_string(report.mass_basis) << '\n';
  return out.str();
}

}  // namespace ricegrade
