#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "support.hpp"
#include "uket/error.hpp"
#include "uket/quality_check.hpp"
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

bool contains(const std::vector<std::string>& v, std::string_view needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("validate_annotation examples") {
  CHECK(validate_annotation(test::make_annotation("1/2020", 1, 0)).empty());
  CHECK(validate_annotation(test::make_annotation("1/2020", 0, std::nullopt)).empty());

  auto missing = test::make_annotation("1/2020", 0, std::nullopt);
  missing.part1.pop_back();
  CHECK(contains(validate_annotation(missing), "missing aspect: reasons"));

  auto dup = test::make_annotation("1/2020", 0, std::nullopt);
  dup.part1.push_back({Aspect::kFacts, 0});
  CHECK(contains(validate_annotation(dup), "duplicate aspect: facts"));

  auto bad_score = test::make_annotation("1/2020", 0, std::nullopt);
  bad_score.part1[2].score = 2;
  CHECK(contains(validate_annotation(bad_score), "must be 0 or 1"));

  CHECK(contains(validate_annotation(test::make_annotation("1/2020", 0, 1)), "gating"));
  CHECK(contains(validate_annotation(test::make_annotation("1/2020", 1, std::nullopt)), "gating"));
  CHECK(contains(validate_annotation(test::make_annotation("", 0, std::nullopt)), "case_id"));
}

TEST_CASE("derive_eligibility") {
  CHECK(derive_eligibility(test::make_annotation("a", 0, std::nullopt)) == EligibilityClass::kNotPredictable);
  CHECK(derive_eligibility(test::make_annotation("a", 1, 1)) == EligibilityClass::kProceduralOnly);
  CHECK(derive_eligibility(test::make_annotation("a", 1, 0)) == EligibilityClass::kSubstantive);
  CHECK(code_of([] { derive_eligibility(test::make_annotation("a", 0, 0)); }) == ErrorCode::kInvalidAnnotation);
  CHECK(eligibility_name(EligibilityClass::kProceduralOnly) == "procedural-only");
}

TEST_CASE("annotation JSON round trip") {
  auto a = test::make_annotation("2301070/2018", 1, 0);
  a.part1[3].score = 0;
  a.notes = "precedents missed “R v X”";
  a.version = 4;
  CHECK(annotation_from_json(annotation_to_json(a)) == a);
  CHECK(code_of([] { annotation_from_json("{"); }) == ErrorCode::kFormat);
  CHECK(code_of([] {
          annotation_from_json(R"({"case_id":"a","part1":[{"aspect":"nope","score":1}],"part2":{"suitable":0}})");
        }) == ErrorCode::kFormat);
}

TEST_CASE("store, load and optimistic versioning") {
  test::TempDir dir;
  AnnotationStore store(dir.path());
  CHECK_FALSE(store.load("1/2020"));
  CHECK(store.current_version("1/2020") == 0);

  CHECK(store.store(test::make_annotation("1/2020", 1, 0), 0) == 1);
  auto loaded = store.load("1/2020");
  REQUIRE(loaded);
  CHECK(loaded->version == 1);
  CHECK(derive_eligibility(*loaded) == EligibilityClass::kSubstantive);

  CHECK(code_of([&] { store.store(test::make_annotation("1/2020", 0, std::nullopt), 0); }) ==
        ErrorCode::kWriteConflict);
  CHECK(store.load("1/2020")->part2_suitable == 1);
  CHECK(store.store(test::make_annotation("1/2020", 0, std::nullopt), 1) == 2);
  CHECK(store.load("1/2020")->part2_suitable == 0);

  CHECK(code_of([&] { store.store(test::make_annotation("2/2020", 0, 1), 0); }) == ErrorCode::kInvalidAnnotation);
  CHECK_FALSE(store.load("2/2020"));
}

TEST_CASE("list_pending keeps sample order") {
  test::TempDir dir;
  AnnotationStore store(dir.path());
  const std::vector<std::string> sample = {"3/2020", "1/2020", "2/2020"};
  store.store(test::make_annotation("1/2020", 0, std::nullopt), 0);
  CHECK(store.list_pending(sample) == std::vector<std::string>{"3/2020", "2/2020"});
  CHECK(store.list_pending({}).empty());
}

TEST_CASE("export_jsonl is sorted and compact") {
  test::TempDir dir;
  AnnotationStore store(dir.path());
  store.store(test::make_annotation("9/2020", 0, std::nullopt), 0);
  store.store(test::make_annotation("10/2020", 1, 1), 0);
  const auto lines = split_lines(store.export_jsonl());
  REQUIRE(lines.size() == 2);
  CHECK(nlohmann::json::parse(lines[0])["case_id"] == "10/2020");
  CHECK(nlohmann::json::parse(lines[1])["case_id"] == "9/2020");
  CHECK(lines[0].find('\n') == std::string::npos);
}

TEST_CASE("fixture annotations are all valid") {
  const auto all = load_annotations(test::kFixtureDir / "annotations");
  CHECK(all.size() == 260);
  for (const auto& a : all) CHECK_MESSAGE(validate_annotation(a).empty(), a.case_id);
  CHECK(code_of([] { load_annotations("/nonexistent/dir"); }) == ErrorCode::kIo);
}

TEST_CASE("property: gating holds exactly for valid annotations") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> bit(0, 1), tri(0, 2);
  for (int trial = 0; trial < 500; ++trial) {
    QualityAnnotation a = test::make_annotation("p/" + std::to_string(trial), bit(rng), std::nullopt);
    for (auto& s : a.part1) s.score = bit(rng);
    const int proc = tri(rng);  // 2 means absent
    if (proc < 2) a.part2_procedural = proc;
    const bool gated = (a.part2_suitable == 1) == a.part2_procedural.has_value();
    CHECK(validate_annotation(a).empty() == gated);
    if (gated) {
      const auto c = derive_eligibility(a);
      CHECK((c == EligibilityClass::kNotPredictable) == (a.part2_suitable == 0));
    }
  }
}

TEST_CASE("property: substantive cases are a subset of suitable ones") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<QualityAnnotation> batch;
    for (int i = 0; i < 20; ++i) {
      const int s = bit(rng);
      batch.push_back(test::make_annotation(std::to_string(i), s, s ? std::optional<int>(bit(rng)) : std::nullopt));
    }
    int suitable = 0, substantive = 0;
    for (const auto& a : batch) {
      const auto c = derive_eligibility(a);
      suitable += c != EligibilityClass::kNotPredictable;
      substantive += c == EligibilityClass::kSubstantive;
      if (c == EligibilityClass::kSubstantive) CHECK(a.part2_suitable == 1);
    }
    CHECK(substantive <= suitable);
  }
}

TEST_CASE("concurrent stores to one case serialize") {
  test::TempDir dir;
  AnnotationStore store(dir.path());
  std::atomic<int> ok{0}, conflict{0};
  {
    std::vector<std::jthread> writers;
    for (int t = 0; t < 8; ++t)
      writers.emplace_back([&] {
        try {
          store.store(test::make_annotation("1/2020", 0, std::nullopt), 0);
          ++ok;
        } catch (const Error& e) {
          if (e.code() == ErrorCode::kWriteConflict) ++conflict;
        }
      });
  }
  CHECK(ok == 1);
  CHECK(conflict == 7);
  CHECK(store.current_version("1/2020") == 1);

  {
    std::vector<std::jthread> writers;
    for (int t = 0; t < 8; ++t)
      writers.emplace_back([&, t] {
        store.store(test::make_annotation(std::to_string(t) + "/2021", 1, 0), 0);
      });
  }
  CHECK(store.load_all().size() == 9);
}
