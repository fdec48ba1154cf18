#include "uket/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include <json.hpp>

#include "uket/error.hpp"
#include "uket/text_util.hpp"

namespace uket {

using nlohmann::ordered_json;

std::string_view policy_name(ExportPolicy p) {
  return p == ExportPolicy::kSubstantiveOnly ? "substantive-only" : "procedural-inclusive";
}

ExportPolicy parse_policy(std::string_view name) {
  if (name == "substantive-only") return ExportPolicy::kSubstantiveOnly;
  if (name == "procedural-inclusive") return ExportPolicy::kProceduralInclusive;
  throw Error(ErrorCode::kFormat, "unknown export policy " + std::string(name));
}

std::vector<std::string> qualifying_sentences(std::string_view text) {
  std::vector<std::string> out;
  auto emit = [&](std::size_t begin, std::size_t end) {
    const auto s = trim(text.substr(begin, end - begin));
    if (utf8_length(s) >= kMinLeakSentenceChars) out.emplace_back(s);
  };
  std::size_t begin = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      emit(begin, i);
      begin = i + 1;
    } else if ((c == '.' || c == '!' || c == '?') &&
               (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      emit(begin, i + 1);
      begin = i + 1;
    }
  }
  if (begin < text.size()) emit(begin, text.size());
  return out;
}

std::vector<std::string> leakage_check(const ExtractionRecord& record) {
  std::vector<std::string> offending;
  for (const std::string* source : {&record.reasons, &record.general_outcome, &record.order_remedies}) {
    for (auto& sentence : qualifying_sentences(*source)) {
      const bool leaked = record.facts.find(sentence) != std::string::npos ||
                          record.claims.find(sentence) != std::string::npos;
      if (leaked && std::find(offending.begin(), offending.end(), sentence) == offending.end())
        offending.push_back(std::move(sentence));
    }
  }
  return offending;
}

ExportResult build_examples(std::span<const ExtractionRecord> records,
                            std::span<const QualityAnnotation> annotations, ExportPolicy policy) {
  std::map<std::string_view, const ExtractionRecord*> by_id;
  for (const auto& r : records) by_id[r.case_id] = &r;

  std::vector<const QualityAnnotation*> ordered;
  for (const auto& a : annotations) ordered.push_back(&a);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->case_id < b->case_id; });

  ExportResult result;
  result.policy = policy;
  for (const auto* a : ordered) {
    if (!validate_annotation(*a).empty()) {
      result.skipped.push_back({a->case_id, "invalid-annotation"});
      continue;
    }
    const EligibilityClass cls = derive_eligibility(*a);
    if (cls == EligibilityClass::kNotPredictable) continue;
    if (policy == ExportPolicy::kSubstantiveOnly && cls != EligibilityClass::kSubstantive) continue;
    auto it = by_id.find(a->case_id);
    if (it == by_id.end()) {
      result.skipped.push_back({a->case_id, "missing-record"});
      continue;
    }
    const ExtractionRecord& r = *it->second;
    if (!leakage_check(r).empty()) {
      result.skipped.push_back({a->case_id, "leakage-guard"});
      continue;
    }
    result.examples.push_back({r.case_id, r.facts, r.claims, r.outcome_label, cls});
    ++result.label_counts[std::string(label_string(r.outcome_label))];
    ++result.class_counts[std::string(eligibility_name(cls))];
  }
  return result;
}

std::string example_to_json_line(const PredictionExample& e) {
  ordered_json j;
  j["case_id"] = e.case_id;
  j["input_facts"] = e.input_facts;
  j["input_claims"] = e.input_claims;
  j["target_label"] = label_string(e.target_label);
  j["eligibility"] = eligibility_name(e.eligibility);
  return j.dump() + "\n";
}

std::string manifest_to_json(const ExportResult& result, std::string_view dataset_file) {
  ordered_json j;
  j["dataset"] = dataset_file;
  j["policy"] = policy_name(result.policy);
  j["examples"] = result.examples.size();
  j["label_counts"] = ordered_json::object();
  for (const auto& [k, v] : result.label_counts) j["label_counts"][k] = v;
  j["class_counts"] = ordered_json::object();
  for (const auto& [k, v] : result.class_counts) j["class_counts"][k] = v;
  auto skipped = ordered_json::array();
  for (const auto& s : result.skipped) skipped.push_back({{"case_id", s.case_id}, {"reason", s.reason}});
  j["skipped"] = skipped;
  return j.dump(2) + "\n";
}

std::filesystem::path manifest_path_for(const std::filesystem::path& out) {
  return out.parent_path() / (out.stem().string() + ".manifest.json");
}

ExportResult export_dataset(std::span<const ExtractionRecord> records,
                            std::span<const QualityAnnotation> annotations, ExportPolicy policy,
                            const std::filesystem::path& out) {
  ExportResult result = build_examples(records, annotations, policy);
  if (result.examples.empty())
    throw Error(ErrorCode::kEmptyExport, "no exportable cases under policy " + std::string(policy_name(policy)));
  std::string body;
  for (const auto& e : result.examples) body += example_to_json_line(e);
  if (!out.parent_path().empty() && !std::filesystem::is_directory(out.parent_path()))
    throw Error(ErrorCode::kIo, "output directory does not exist: " + out.parent_path().string());
  write_file_atomic(out, body);
  write_file_atomic(manifest_path_for(out), manifest_to_json(result, out.filename().string()));
  return result;
}

}  // namespace uket
