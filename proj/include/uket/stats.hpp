#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uket/aspect.hpp"
#include "uket/extraction.hpp"
#include "uket/quality_check.hpp"

namespace uket {

inline constexpr double kZ95 = 1.96;

struct ProportionEstimate {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double p = 0.0;
  double half_width = 0.0;

  // "p ± hw" at 3 dp (half-up), or bare "p" when p is 0 or 1.
  std::string formatted() const;
};

// Normal-approximation (Wald) interval at 95%: 1.96 * sqrt(p(1-p)/n).
// Throws kEmptyInput when trials == 0, kFormat when successes is out of range.
ProportionEstimate accuracy_ci(std::int64_t successes, std::int64_t trials);

// p rounded half-up to 3 dp, computed exactly from the counts.
std::string format_proportion(std::int64_t successes, std::int64_t trials);
std::string format_half_width(double half_width);

// How the table's half-widths are computed.
//  kWald:      each cell from its own counts.
//  kReference: Wald evaluated at the displayed 3-dp proportion with n = all
//              annotated cases, for both columns.
enum class CiConvention { kWald, kReference };

std::string_view ci_convention_name(CiConvention c);
CiConvention parse_ci_convention(std::string_view name);

enum class Subset { kAll, kSuitableOnly };

struct AccuracyRow {
  Aspect aspect = Aspect::kFacts;
  ProportionEstimate all;
  std::optional<ProportionEstimate> suitable;  // absent when no suitable cases
  double all_wald_half_width = 0.0;
  std::optional<double> suitable_wald_half_width;
};

struct AccuracyTable {
  PerAspect<AccuracyRow> rows{};
  std::int64_t all_trials = 0;
  std::int64_t suitable_trials = 0;
  CiConvention convention = CiConvention::kReference;
};

// Errors: kEmptyInput (no annotations), kDanglingReference (annotation without a
// record), kInvalidAnnotation.
AccuracyTable summarize(std::span<const QualityAnnotation> annotations,
                        std::span<const ExtractionRecord> records,
                        CiConvention convention = CiConvention::kReference);

std::string render_table_text(const AccuracyTable& table, std::optional<Subset> only = std::nullopt);
std::string table_to_json(const AccuracyTable& table, std::optional<Subset> only = std::nullopt);

struct SuitabilityRate {
  std::int64_t count = 0;
  std::int64_t total = 0;
  double proportion = 0.0;
  std::string percent_display;  // 1 dp, e.g. "47.7%"
  std::int64_t multipage_count = 0;
};

// page_counts maps case_id -> page count. Errors: kEmptyInput, kDanglingReference.
SuitabilityRate suitability_rate(std::span<const QualityAnnotation> annotations,
                                 const std::map<std::string, int>& page_counts);

// Token-bounded, case-insensitive match of Rule 21 citations.
class Rule21Detector {
 public:
  Rule21Detector();  // "rule 21", "r. 21", "r 21", "r.21"
  explicit Rule21Detector(std::vector<std::string> phrases);
  bool matches(std::string_view text) const;

 private:
  std::vector<std::string> phrases_;
};

struct Rule21Report {
  int total_cases = 0;
  int facts_statutes_reasons = 0;
  int statutes_only = 0;
  int statutes_and_reasons_not_facts = 0;
  std::map<std::string, int> other_patterns;  // pattern name -> count
  std::vector<std::pair<std::string, std::string>> cases;  // (case_id, pattern)
};

Rule21Report rule21_report(std::span<const ExtractionRecord> records,
                           const Rule21Detector& detector = Rule21Detector());

std::string render_rule21_text(const Rule21Report& report);
std::string rule21_to_json(const Rule21Report& report);

}  // namespace uket
