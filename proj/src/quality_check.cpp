#include "uket/quality_check.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "uket/error.hpp"
#include "uket/text_util.hpp"

namespace uket {

using nlohmann::json;
using nlohmann::ordered_json;

std::optional<int> QualityAnnotation::score(Aspect a) const {
  for (const auto& s : part1)
    if (s.aspect == a) return s.score;
  return std::nullopt;
}

std::string_view eligibility_name(EligibilityClass c) {
  switch (c) {
    case EligibilityClass::kNotPredictable: return "not-predictable";
    case EligibilityClass::kProceduralOnly: return "procedural-only";
    case EligibilityClass::kSubstantive: return "substantive";
  }
  return "";
}

std::vector<std::string> validate_annotation(const QualityAnnotation& a) {
  std::vector<std::string> v;
  if (a.case_id.empty()) v.push_back("case_id is empty");
  PerAspect<int> counts{};
  for (const auto& s : a.part1) {
    ++counts[aspect_index(s.aspect)];
    if (s.score != 0 && s.score != 1)
      v.push_back("score for " + std::string(aspect_key(s.aspect)) + " must be 0 or 1");
  }
  for (Aspect asp : kAllAspects) {
    const int n = counts[aspect_index(asp)];
    if (n == 0) v.push_back("missing aspect: " + std::string(aspect_key(asp)));
    if (n > 1) v.push_back("duplicate aspect: " + std::string(aspect_key(asp)));
  }
  if (a.part2_suitable != 0 && a.part2_suitable != 1) v.push_back("part2_suitable must be 0 or 1");
  if (a.part2_suitable == 0 && a.part2_procedural)
    v.push_back("gating: part2_procedural must be absent when part2_suitable = 0");
  if (a.part2_suitable == 1 && !a.part2_procedural)
    v.push_back("gating: part2_procedural is required when part2_suitable = 1");
  if (a.part2_procedural && *a.part2_procedural != 0 && *a.part2_procedural != 1)
    v.push_back("part2_procedural must be 0 or 1");
  return v;
}

EligibilityClass derive_eligibility(const QualityAnnotation& a) {
  if (auto v = validate_annotation(a); !v.empty())
    throw Error(ErrorCode::kInvalidAnnotation, "invalid annotation for " + a.case_id + ": " + v.front());
  if (a.part2_suitable == 0) return EligibilityClass::kNotPredictable;
  return *a.part2_procedural == 1 ? EligibilityClass::kProceduralOnly : EligibilityClass::kSubstantive;
}

std::string annotation_to_json(const QualityAnnotation& a) {
  ordered_json j;
  j["case_id"] = a.case_id;
  j["version"] = a.version;
  j["annotator_id"] = a.annotator_id;
  j["annotated_at"] = a.annotated_at;
  auto part1 = ordered_json::array();
  for (const auto& s : a.part1) part1.push_back({{"aspect", aspect_key(s.aspect)}, {"score", s.score}});
  j["part1"] = part1;
  ordered_json part2;
  part2["suitable"] = a.part2_suitable;
  if (a.part2_procedural) part2["procedural"] = *a.part2_procedural;
  j["part2"] = part2;
  j["notes"] = a.notes;
  return j.dump(2) + "\n";
}

QualityAnnotation annotation_from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    QualityAnnotation a;
    a.case_id = j.at("case_id").get<std::string>();
    a.version = j.value("version", std::int64_t{0});
    a.annotator_id = j.value("annotator_id", "");
    a.annotated_at = j.value("annotated_at", "");
    a.notes = j.value("notes", "");
    for (const auto& s : j.at("part1")) {
      const auto key = s.at("aspect").get<std::string>();
      auto asp = aspect_from_key(key);
      if (!asp) throw Error(ErrorCode::kFormat, "unknown aspect " + key);
      a.part1.push_back({*asp, s.at("score").get<int>()});
    }
    const auto& part2 = j.at("part2");
    a.part2_suitable = part2.at("suitable").get<int>();
    if (part2.contains("procedural") && !part2["procedural"].is_null())
      a.part2_procedural = part2["procedural"].get<int>();
    return a;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("annotation: ") + e.what());
  }
}

AnnotationStore::AnnotationStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path AnnotationStore::path_for(std::string_view case_id) const {
  return dir_ / (case_id_to_filename(case_id) + ".json");
}

std::mutex& AnnotationStore::case_mutex(const std::string& case_id) {
  std::lock_guard lock(table_mutex_);
  auto& slot = case_mutexes_[case_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

std::int64_t AnnotationStore::store(QualityAnnotation a, std::int64_t expected_version) {
  if (auto v = validate_annotation(a); !v.empty()) {
    std::string msg = "annotation for " + a.case_id + " rejected:";
    for (const auto& s : v) msg += " " + s + ";";
    throw Error(ErrorCode::kInvalidAnnotation, msg);
  }
  std::lock_guard lock(case_mutex(a.case_id));
  const std::int64_t current = current_version(a.case_id);
  if (expected_version != current)
    throw Error(ErrorCode::kWriteConflict, "stale version " + std::to_string(expected_version) +
                                               " for " + a.case_id + "; current is " +
                                               std::to_string(current));
  a.version = current + 1;
  write_file_atomic(path_for(a.case_id), annotation_to_json(a));
  return a.version;
}

std::optional<QualityAnnotation> AnnotationStore::load(std::string_view case_id) const {
  const auto path = path_for(case_id);
  if (!std::filesystem::exists(path)) return std::nullopt;
  return annotation_from_json(read_file(path));
}

std::int64_t AnnotationStore::current_version(std::string_view case_id) const {
  auto a = load(case_id);
  return a ? a->version : 0;
}

std::vector<QualityAnnotation> AnnotationStore::load_all() const { return load_annotations(dir_); }

std::vector<std::string> AnnotationStore::list_pending(std::span<const std::string> sample) const {
  std::vector<std::string> out;
  for (const auto& id : sample)
    if (!std::filesystem::exists(path_for(id))) out.push_back(id);
  return out;
}

std::string AnnotationStore::export_jsonl() const {
  std::string out;
  for (const auto& a : load_all()) out += json::parse(annotation_to_json(a)).dump() + "\n";
  return out;
}

std::vector<QualityAnnotation> load_annotations(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  std::vector<QualityAnnotation> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      out.push_back(annotation_from_json(read_file(entry.path())));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.case_id < b.case_id; });
  return out;
}

}  // namespace uket
