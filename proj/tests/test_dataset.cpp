#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "support.hpp"
#include "uket/dataset.hpp"
#include "uket/error.hpp"
#include "uket/text_util.hpp"

using namespace uket;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected uket::Error");
  return ErrorCode::kFormat;
}

std::set<std::string> ids(const ExportResult& r) {
  std::set<std::string> out;
  for (const auto& e : r.examples) out.insert(e.case_id);
  return out;
}

struct Fixture {
  std::vector<QualityAnnotation> annotations = load_annotations(test::kFixtureDir / "annotations");
  std::vector<ExtractionRecord> records = load_records(test::kFixtureDir / "records");

  const ExtractionRecord& record(std::string_view id) const {
    for (const auto& r : records)
      if (r.case_id == id) return r;
    FAIL("missing record");
    return records.front();
  }
};

// Random batch of valid annotations with matching clean records.
void random_batch(std::mt19937& rng, std::vector<ExtractionRecord>& records,
                  std::vector<QualityAnnotation>& annotations) {
  std::uniform_int_distribution<int> bit(0, 1), size(1, 30);
  const int n = size(rng);
  for (int i = 0; i < n; ++i) {
    const std::string id = std::to_string(std::uniform_int_distribution<int>(1, 100000)(rng)) + "/" +
                           std::to_string(2010 + i % 13);
    auto r = test::make_record(id);
    r.outcome_label = kAllLabels[std::uniform_int_distribution<std::size_t>(0, 3)(rng)];
    if (bit(rng) && bit(rng)) r.facts += " " + r.reasons;  // leaks
    records.push_back(r);
    const int s = bit(rng);
    annotations.push_back(test::make_annotation(id, s, s ? std::optional<int>(bit(rng)) : std::nullopt));
  }
}

}  // namespace

TEST_CASE("qualifying_sentences") {
  CHECK(qualifying_sentences("").empty());
  CHECK(qualifying_sentences("The claimant. Short one.").empty());
  const auto s = qualifying_sentences(
      "The claim of unfair dismissal is well founded. Is the claimant entitled to notice pay?\n"
      "A heading without a full stop at all\nv3.2 remains one sentence because no space follows the dot.");
  REQUIRE(s.size() == 4);
  CHECK(s[0] == "The claim of unfair dismissal is well founded.");
  CHECK(s[1] == "Is the claimant entitled to notice pay?");
  CHECK(s[2] == "A heading without a full stop at all");
  CHECK(s[3] == "v3.2 remains one sentence because no space follows the dot.");
  // The floor counts code points, not bytes: 24 letters plus a pound sign is 25.
  CHECK(qualifying_sentences("£abcdefghijklmnopqrstuvwx").size() == 1);
  CHECK(qualifying_sentences("abcdefghijklmnopqrstuvwx").empty());
}

TEST_CASE("leakage_check examples") {
  SUBCASE("clean record") { CHECK(leakage_check(test::make_record("1/2020")).empty()); }
  SUBCASE("facts equal reasons reports every qualifying sentence") {
    auto r = test::make_record("1/2020");
    r.reasons = "The dismissal was procedurally unfair in every respect. The claimant was not heard at all.";
    r.facts = r.reasons;
    CHECK(leakage_check(r) == std::vector<std::string>{"The dismissal was procedurally unfair in every respect.",
                                                       "The claimant was not heard at all."});
  }
  SUBCASE("empty reasons") {
    auto r = test::make_record("1/2020");
    r.reasons.clear();
    CHECK(leakage_check(r).empty());
  }
  SUBCASE("claims and order sections count too, duplicates reported once") {
    auto r = test::make_record("1/2020");
    r.claims += " " + r.order_remedies;
    r.general_outcome = r.order_remedies;
    CHECK(leakage_check(r) == std::vector<std::string>{r.order_remedies});
  }
  SUBCASE("first golden response") {
    // Derived by inspection: this sentence is in both the facts and the reasons sections.
    Fixture f;
    const auto& r = f.record("3328920/2017");
    const std::string sentence = "The Respondent failed to present a response to the claim.";
    CHECK(r.facts.find(sentence) != std::string::npos);
    CHECK(r.reasons.find(sentence) != std::string::npos);
    CHECK(leakage_check(r) == std::vector<std::string>{sentence});
  }
  SUBCASE("second golden response is clean") {
    Fixture f;
    CHECK(leakage_check(f.record("2301070/2018")).empty());
  }
}

TEST_CASE("fixture export counts") {
  Fixture f;
  const auto inclusive = build_examples(f.records, f.annotations, ExportPolicy::kProceduralInclusive);
  CHECK(inclusive.examples.size() == 124);
  CHECK(inclusive.skipped.empty());
  CHECK(inclusive.class_counts.at("procedural-only") == 27);
  CHECK(inclusive.class_counts.at("substantive") == 97);
  const auto substantive = build_examples(f.records, f.annotations, ExportPolicy::kSubstantiveOnly);
  CHECK(substantive.examples.size() == 97);
  const auto a = ids(inclusive), b = ids(substantive);
  CHECK(std::includes(a.begin(), a.end(), b.begin(), b.end()));
  for (const auto& e : inclusive.examples) {
    const auto& r = f.record(e.case_id);
    CHECK(e.input_facts == r.facts);
    CHECK(e.input_claims == r.claims);
    CHECK(e.target_label == r.outcome_label);
  }
  int labels = 0;
  for (const auto& [_, n] : inclusive.label_counts) labels += n;
  CHECK(labels == 124);
}

TEST_CASE("skips are logged with reasons") {
  auto leaky = test::make_record("1/2020");
  leaky.facts += " " + leaky.reasons;
  const std::vector<ExtractionRecord> records = {leaky, test::make_record("2/2020")};
  std::vector<QualityAnnotation> annotations = {test::make_annotation("1/2020", 1, 0),
                                                test::make_annotation("2/2020", 1, 1),
                                                test::make_annotation("3/2020", 1, 0),
                                                test::make_annotation("4/2020", 0, 1)};
  const auto r = build_examples(records, annotations, ExportPolicy::kProceduralInclusive);
  REQUIRE(r.examples.size() == 1);
  CHECK(r.examples[0].case_id == "2/2020");
  REQUIRE(r.skipped.size() == 3);
  CHECK(r.skipped[0].case_id == "1/2020");
  CHECK(r.skipped[0].reason == "leakage-guard");
  CHECK(r.skipped[1].reason == "missing-record");
  CHECK(r.skipped[2].reason == "invalid-annotation");
  const auto manifest = nlohmann::json::parse(manifest_to_json(r, "out.jsonl"));
  CHECK(manifest["skipped"].size() == 3);
  CHECK(manifest["examples"] == 1);
}

TEST_CASE("export files are deterministic and well formed") {
  Fixture f;
  test::TempDir dir;
  const auto out1 = dir / "a.jsonl", out2 = dir / "b.jsonl";
  auto shuffled = f.annotations;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(1));
  export_dataset(f.records, f.annotations, ExportPolicy::kProceduralInclusive, out1);
  export_dataset(f.records, shuffled, ExportPolicy::kProceduralInclusive, out2);
  CHECK(read_file(out1) == read_file(out2));
  CHECK(std::filesystem::exists(dir / "a.manifest.json"));

  std::istringstream in(read_file(out1));
  std::string prev;
  int lines = 0;
  for (std::string line; std::getline(in, line); ++lines) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.size() == 5);
    CHECK(j["eligibility"] != "not-predictable");
    CHECK(prev < j["case_id"].get<std::string>());
    prev = j["case_id"];
  }
  CHECK(lines == 124);
  const auto manifest = nlohmann::json::parse(read_file(dir / "a.manifest.json"));
  CHECK(manifest["policy"] == "procedural-inclusive");
  CHECK(manifest["dataset"] == "a.jsonl");
}

TEST_CASE("export errors") {
  test::TempDir dir;
  const std::vector<ExtractionRecord> records = {test::make_record("1/2020")};
  const std::vector<QualityAnnotation> unsuitable = {test::make_annotation("1/2020", 0, std::nullopt)};
  CHECK(code_of([&] { export_dataset(records, unsuitable, ExportPolicy::kProceduralInclusive, dir / "x.jsonl"); }) ==
        ErrorCode::kEmptyExport);
  const std::vector<QualityAnnotation> procedural = {test::make_annotation("1/2020", 1, 1)};
  CHECK(code_of([&] { export_dataset(records, procedural, ExportPolicy::kSubstantiveOnly, dir / "x.jsonl"); }) ==
        ErrorCode::kEmptyExport);
  CHECK(code_of([&] {
          export_dataset(records, procedural, ExportPolicy::kProceduralInclusive, dir / "missing" / "x.jsonl");
        }) == ErrorCode::kIo);
  CHECK(parse_policy("substantive-only") == ExportPolicy::kSubstantiveOnly);
  CHECK(code_of([] { parse_policy("all"); }) == ErrorCode::kFormat);
}

TEST_CASE("property: containment, no not-predictable, no leakage") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ExtractionRecord> records;
    std::vector<QualityAnnotation> annotations;
    random_batch(rng, records, annotations);
    const auto inclusive = build_examples(records, annotations, ExportPolicy::kProceduralInclusive);
    const auto substantive = build_examples(records, annotations, ExportPolicy::kSubstantiveOnly);
    const auto a = ids(inclusive), b = ids(substantive);
    CHECK(std::includes(a.begin(), a.end(), b.begin(), b.end()));
    for (const auto* r : {&inclusive, &substantive}) {
      for (const auto& e : r->examples) {
        CHECK(e.eligibility != EligibilityClass::kNotPredictable);
        ExtractionRecord probe = test::make_record(e.case_id);
        probe.facts = e.input_facts;
        probe.claims = e.input_claims;
        for (const auto& rec : records)
          if (rec.case_id == e.case_id) probe = rec;
        CHECK(leakage_check(probe).empty());
      }
      for (const auto& s : r->skipped) CHECK(s.reason == "leakage-guard");
    }
  }
}
