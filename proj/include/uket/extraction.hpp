#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uket/aspect.hpp"

namespace uket {

enum class OutcomeLabel { kClaimantWins, kClaimantPartlyWins, kClaimantLoses, kOther };

inline constexpr std::array<OutcomeLabel, 4> kAllLabels = {
    OutcomeLabel::kClaimantWins, OutcomeLabel::kClaimantPartlyWins,
    OutcomeLabel::kClaimantLoses, OutcomeLabel::kOther};

// "claimant wins", "claimant partly wins", "claimant loses", "other"
std::string_view label_string(OutcomeLabel label);
std::optional<OutcomeLabel> label_from_canonical(std::string_view s);

// Case-insensitive; strips quotes, bold markers and trailing punctuation;
// accepts "claimant partially wins". Throws kUnparseableLabel.
OutcomeLabel normalize_label(std::string_view raw_label);

// Phrases whose presence marks a section as "information not in the case file".
class AbsenceDetector {
 public:
  AbsenceDetector();  // default phrase list
  explicit AbsenceDetector(std::vector<std::string> phrases);

  // True for empty/blank text or a case-insensitive phrase hit.
  bool operator()(std::string_view section_text) const;
  const std::vector<std::string>& phrases() const { return phrases_; }

 private:
  std::vector<std::string> phrases_;  // lower-cased
};

bool detect_absence(std::string_view section_text);

struct ExtractionRecord {
  std::string case_id;
  std::string facts;
  std::string claims;
  std::string statute_refs;
  std::string precedent_refs;
  std::string general_outcome;
  OutcomeLabel outcome_label = OutcomeLabel::kOther;
  std::string outcome_label_raw;
  std::string order_remedies;
  std::string reasons;
  PerAspect<bool> absence_flags{};

  // Section text; the outcome-label aspect yields outcome_label_raw.
  const std::string& section(Aspect a) const;
  std::string& section(Aspect a);

  bool operator==(const ExtractionRecord&) const = default;
};

// Segments a model response into the eight sections. Accepts numbered
// ("1. Facts of the case:") and bulleted bold ("- Facts of the case:**") headings,
// in any order. Errors: kEmptyInput, kMissingSection, kAmbiguousSection, kUnparseableLabel.
ExtractionRecord parse_extraction(std::string_view case_id, std::string_view raw_text,
                                  const AbsenceDetector& absence = AbsenceDetector());

// Numbered-style response text that parses back to an equal record.
std::string render_response(const ExtractionRecord& record);

std::string record_to_json(const ExtractionRecord& record);
ExtractionRecord record_from_json(std::string_view text);

std::filesystem::path record_path(const std::filesystem::path& records_dir, std::string_view case_id);
void write_record(const std::filesystem::path& records_dir, const ExtractionRecord& record);
ExtractionRecord read_record(const std::filesystem::path& path);
// All records/*.json in the directory, sorted by case_id.
std::vector<ExtractionRecord> load_records(const std::filesystem::path& records_dir);

// One compact JSON record per line, sorted input order preserved.
std::string records_to_jsonl(const std::vector<ExtractionRecord>& records);

enum class Severity { kWarning, kError };
std::string_view severity_name(Severity s);

struct LintRule {
  std::string_view rule_id;
  Severity severity;
  std::string_view description;
};

// L1 withdrawal-label, L2 truncation, L3 empty-reasons.
const std::vector<LintRule>& lint_rules();

struct LintFinding {
  std::string rule_id;
  Severity severity = Severity::kWarning;
  Aspect section = Aspect::kFacts;
  std::string message;

  bool operator==(const LintFinding&) const = default;
};

std::vector<LintFinding> lint_record(const ExtractionRecord& record);

}  // namespace uket
