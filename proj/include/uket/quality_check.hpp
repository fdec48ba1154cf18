#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uket/aspect.hpp"

namespace uket {

struct AspectScore {
  Aspect aspect = Aspect::kFacts;
  int score = 0;  // 0 | 1

  bool operator==(const AspectScore&) const = default;
};

struct QualityAnnotation {
  std::string case_id;
  std::vector<AspectScore> part1;        // one per aspect when valid
  int part2_suitable = 0;                // 0 | 1
  std::optional<int> part2_procedural;   // present iff suitable == 1
  std::string annotator_id;
  std::string annotated_at;              // ISO 8601
  std::string notes;
  std::int64_t version = 0;              // store-assigned counter

  std::optional<int> score(Aspect a) const;

  bool operator==(const QualityAnnotation&) const = default;
};

enum class EligibilityClass { kNotPredictable, kProceduralOnly, kSubstantive };

std::string_view eligibility_name(EligibilityClass c);

// Empty when valid. Never throws.
std::vector<std::string> validate_annotation(const QualityAnnotation& a);

// Throws kInvalidAnnotation for an invalid annotation.
EligibilityClass derive_eligibility(const QualityAnnotation& a);

std::string annotation_to_json(const QualityAnnotation& a);
QualityAnnotation annotation_from_json(std::string_view text);

// File-backed store: annotations/<case_id>.json, one document per case.
// Writes are serialized per case and guarded by an optimistic version counter.
class AnnotationStore {
 public:
  explicit AnnotationStore(std::filesystem::path dir);

  // expected_version must equal the stored version (0 when none). Returns the new
  // version. Throws kInvalidAnnotation or kWriteConflict.
  std::int64_t store(QualityAnnotation a, std::int64_t expected_version);

  std::optional<QualityAnnotation> load(std::string_view case_id) const;
  std::int64_t current_version(std::string_view case_id) const;

  // All stored annotations, sorted by case_id.
  std::vector<QualityAnnotation> load_all() const;

  // Sampled ids without a stored annotation, in sample order.
  std::vector<std::string> list_pending(std::span<const std::string> sample) const;

  // One compact annotation per line, sorted by case_id.
  std::string export_jsonl() const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::mutex& case_mutex(const std::string& case_id);
  std::filesystem::path path_for(std::string_view case_id) const;

  std::filesystem::path dir_;
  std::mutex table_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> case_mutexes_;
};

std::vector<QualityAnnotation> load_annotations(const std::filesystem::path& dir);

}  // namespace uket
