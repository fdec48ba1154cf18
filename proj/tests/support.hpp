#pragma once

#include <atomic>
#include <filesystem>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "uket/extraction.hpp"
#include "uket/llm_gateway.hpp"
#include "uket/quality_check.hpp"

namespace uket::test {

inline const std::filesystem::path kFixtureDir = UKET_FIXTURE_DIR;
inline const std::filesystem::path kPromptsDir = UKET_PROMPTS_DIR;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("uket-test-" + std::to_string(rd()) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline ExtractionRecord make_record(std::string case_id) {
  ExtractionRecord r;
  r.case_id = std::move(case_id);
  r.facts = "The claimant worked as a chef for the respondent for four years.";
  r.claims = "The claimant claimed unfair dismissal.";
  r.statute_refs = "Section 98 of the Employment Rights Act 1996.";
  r.precedent_refs = "British Home Stores Ltd v Burchell [1980] ICR 303.";
  r.general_outcome = "The complaint of unfair dismissal succeeded.";
  r.outcome_label = OutcomeLabel::kClaimantWins;
  r.outcome_label_raw = "Claimant wins.";
  r.order_remedies = "The respondent shall pay the claimant compensation of £4,000.";
  r.reasons = "The investigation was outside the band of reasonable responses.";
  return r;
}

inline QualityAnnotation make_annotation(std::string case_id, int suitable, std::optional<int> procedural,
                                         int score = 1) {
  QualityAnnotation a;
  a.case_id = std::move(case_id);
  for (Aspect asp : kAllAspects) a.part1.push_back({asp, score});
  a.part2_suitable = suitable;
  a.part2_procedural = procedural;
  a.annotator_id = "tester";
  a.annotated_at = "2024-01-01T00:00:00Z";
  return a;
}

// Transport that records contact; any call is a test failure for the caller to assert on.
class NoContactTransport : public Transport {
 public:
  HttpResponse post(const std::string&, const HttpHeaders&, const std::string&) override {
    ++calls;
    return {500, "unexpected network contact"};
  }
  std::atomic<int> calls{0};
};

// Returns the scripted statuses in order; successful replies carry a canned completion.
class ScriptedTransport : public Transport {
 public:
  explicit ScriptedTransport(std::vector<int> statuses, std::string content = "ok")
      : statuses_(std::move(statuses)), content_(std::move(content)) {}

  HttpResponse post(const std::string& url, const HttpHeaders& headers, const std::string& body) override {
    std::lock_guard lock(mutex_);
    last_url = url;
    last_headers = headers;
    last_body = body;
    const int status = calls < static_cast<int>(statuses_.size()) ? statuses_[calls] : 500;
    ++calls;
    if (status != 200) return {status, R"({"error":"scripted"})"};
    return {200, completion_body(content_, 1200, 300)};
  }

  static std::string completion_body(const std::string& content, int prompt_tokens, int completion_tokens) {
    nlohmann::json j;
    j["choices"] = nlohmann::json::array({{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}});
    j["usage"] = {{"prompt_tokens", prompt_tokens}, {"completion_tokens", completion_tokens}};
    return j.dump();
  }

  int calls = 0;
  std::string last_url;
  HttpHeaders last_headers;
  std::string last_body;

 private:
  std::mutex mutex_;
  std::vector<int> statuses_;
  std::string content_;
};

}  // namespace uket::test
