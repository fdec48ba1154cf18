#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uket/extraction.hpp"
#include "uket/quality_check.hpp"

namespace uket {

struct PredictionExample {
  std::string case_id;
  std::string input_facts;
  std::string input_claims;
  OutcomeLabel target_label = OutcomeLabel::kOther;
  EligibilityClass eligibility = EligibilityClass::kSubstantive;

  bool operator==(const PredictionExample&) const = default;
};

enum class ExportPolicy { kProceduralInclusive, kSubstantiveOnly };

std::string_view policy_name(ExportPolicy p);
ExportPolicy parse_policy(std::string_view name);

inline constexpr std::size_t kMinLeakSentenceChars = 25;

// Sentences split at . ! ? followed by whitespace or end of text, and at line
// breaks; trimmed; only those of at least kMinLeakSentenceChars code points.
std::vector<std::string> qualifying_sentences(std::string_view text);

// Sentences of reasons / general_outcome / order_remedies that appear verbatim in
// facts or claims. Empty means the record is clean.
std::vector<std::string> leakage_check(const ExtractionRecord& record);

struct SkippedCase {
  std::string case_id;
  std::string reason;  // "leakage-guard", "missing-record", "invalid-annotation"
};

struct ExportResult {
  ExportPolicy policy = ExportPolicy::kProceduralInclusive;
  std::vector<PredictionExample> examples;  // sorted by case_id
  std::vector<SkippedCase> skipped;
  std::map<std::string, int> label_counts;
  std::map<std::string, int> class_counts;
};

// Selects, guards and orders examples without touching the filesystem.
ExportResult build_examples(std::span<const ExtractionRecord> records,
                            std::span<const QualityAnnotation> annotations, ExportPolicy policy);

std::string example_to_json_line(const PredictionExample& e);
std::string manifest_to_json(const ExportResult& result, std::string_view dataset_file);

// "<dir>/<stem>.manifest.json" next to the JSONL file.
std::filesystem::path manifest_path_for(const std::filesystem::path& out);

// Writes the JSONL dataset and its manifest. Errors: kEmptyExport, kIo.
ExportResult export_dataset(std::span<const ExtractionRecord> records,
                            std::span<const QualityAnnotation> annotations, ExportPolicy policy,
                            const std::filesystem::path& out);

}  // namespace uket
