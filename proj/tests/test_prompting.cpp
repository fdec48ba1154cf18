#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include <json.hpp>

#include "support.hpp"
#include "uket/corpus.hpp"
#include "uket/digest.hpp"
#include "uket/error.hpp"
#include "uket/prompting.hpp"
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

CaseDocument golden_case() {
  const auto corpus = load_corpus(test::kFixtureDir / "corpus");
  for (const auto& d : corpus)
    if (d.case_id == "3328920/2017") return d;
  FAIL("fixture case missing");
  return {};
}

}  // namespace

TEST_CASE("sha256_hex known vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("final prompt content") {
  const std::string text(final_prompt_text());
  CHECK(text.rfind("You are a legal assistant.", 0) == 0);
  std::size_t pos = 0;
  for (const char* item : {"1. facts of the case", "2. claims made", "3. any references to legal statutes",
                           "4. references to precedents", "5. general case outcome",
                           "6. general case outcome summarised", "7. detailed order and remedies",
                           "8. essential reasons for the decision"}) {
    const auto at = text.find(item, pos);
    CHECK_MESSAGE(at != std::string::npos, item);
    if (at != std::string::npos) pos = at;
  }
  for (const char* label : {"claimant wins", "claimant loses", "claimant partly wins", "“other”"})
    CHECK_MESSAGE(text.find(label) != std::string::npos, label);
  CHECK(text.find("reserved for situations in which the result cannot be determined") != std::string::npos);
  CHECK(text.find("extract the case outcome for each and all of the claimants or respondents separately.") !=
        std::string::npos);
}

TEST_CASE("shipped prompt file equals the built-in text") {
  auto file = read_file(test::kPromptsDir / "uket-final" / "v1.txt");
  if (!file.empty() && file.back() == '\n') file.pop_back();
  CHECK(file == final_prompt_text());
  CHECK_NOTHROW(PromptRegistry::from_directory(test::kPromptsDir));
}

TEST_CASE("from_directory loads variants and rejects an altered final prompt") {
  test::TempDir dir;
  std::filesystem::create_directories(dir / "ablation");
  write_file_atomic(dir / "ablation" / "v2.txt", "Extract the facts.\n");
  auto r = PromptRegistry::from_directory(dir.path());
  CHECK(r.get("ablation", "v2").text == "Extract the facts.");
  CHECK(r.list_templates().size() == 2);

  std::filesystem::create_directories(dir / "uket-final");
  write_file_atomic(dir / "uket-final" / "v1.txt", "You are a legal assistant.");
  CHECK(code_of([&] { PromptRegistry::from_directory(dir.path()); }) == ErrorCode::kRegistryLoad);
  CHECK(code_of([&] { PromptRegistry::from_directory(dir / "missing"); }) == ErrorCode::kRegistryLoad);
}

TEST_CASE("registry listing, registration and errors") {
  auto r = PromptRegistry::with_builtin();
  const auto before = r.list_templates();
  REQUIRE(before.size() == 1);
  CHECK(before[0].template_id == "uket-final");
  CHECK(before[0].version == "v1");
  CHECK(utf8_length(before[0].summary) == 60);
  CHECK(before[0].summary.ends_with("..."));

  r.register_template({"uket-final", "v0", "An earlier wording."});
  CHECK(r.list_templates().size() == 2);
  CHECK(code_of([&] { r.register_template({"uket-final", "v0", "again"}); }) == ErrorCode::kRegistryLoad);
  CHECK(code_of([&] { r.register_template({"x", "v1", ""}); }) == ErrorCode::kRegistryLoad);
  CHECK(code_of([&] { r.get("nope", "v1"); }) == ErrorCode::kUnknownTemplate);
  CHECK(code_of([&] { r.get("uket-final", "v9"); }) == ErrorCode::kUnknownTemplate);
}

TEST_CASE("bundle with a duplicate is a load error and leaves the registry unchanged") {
  auto r = PromptRegistry::with_builtin();
  const auto bundle = R"([{"template_id": "a", "version": "v1", "text": "one"},
                          {"template_id": "a", "version": "v1", "text": "two"}])";
  CHECK(code_of([&] { r.load_bundle(bundle); }) == ErrorCode::kRegistryLoad);
  CHECK(r.list_templates().size() == 1);
  r.load_bundle(R"([{"template_id": "a", "version": "v1", "text": "one"}])");
  CHECK(r.list_templates().size() == 2);
  CHECK(code_of([&] { r.load_bundle("{}"); }) == ErrorCode::kRegistryLoad);
  CHECK(code_of([&] { r.load_bundle("not json"); }) == ErrorCode::kRegistryLoad);
}

TEST_CASE("split_ref") {
  CHECK(PromptRegistry::split_ref("uket-final/v1") == std::pair<std::string, std::string>{"uket-final", "v1"});
  CHECK(code_of([] { PromptRegistry::split_ref("uket-final"); }) == ErrorCode::kUnknownTemplate);
  CHECK(code_of([] { PromptRegistry::split_ref("/v1"); }) == ErrorCode::kUnknownTemplate);
}

TEST_CASE("build_request") {
  const auto registry = PromptRegistry::with_builtin();
  const auto doc = golden_case();
  const auto req = build_request(registry, "uket-final", "v1", doc, ModelConfig{});
  CHECK(req.system_text.rfind("You are a legal assistant.", 0) == 0);
  CHECK(req.system_text == final_prompt_text());
  CHECK(req.user_text == doc.body_text);
  CHECK(req.model_id == "gpt-4-32k");
  CHECK(req.temperature == 0.0);
  CHECK(req.digest() == build_request(registry, "uket-final", "v1", doc, ModelConfig{}).digest());

  CHECK(code_of([&] { build_request(registry, "other", "v1", doc, {}); }) == ErrorCode::kUnknownTemplate);
  auto empty = doc;
  empty.body_text.clear();
  CHECK(code_of([&] { build_request(registry, "uket-final", "v1", empty, {}); }) == ErrorCode::kInvalidDocument);
  ModelConfig bad;
  bad.temperature = -0.5;
  CHECK(code_of([&] { build_request(registry, "uket-final", "v1", doc, bad); }) == ErrorCode::kFormat);
}

TEST_CASE("replay key is sensitive to every field") {
  const auto base = replay_key("uket-final", "v1", "1/2020", "gpt-4-32k", 0.0);
  CHECK(base.size() == 64);
  // Independent recomputation of the canonical form.
  CHECK(base == sha256_hex("uket-replay-key/1\ntemplate_id=uket-final\nversion=v1\ncase_id=1/2020\n"
                           "model_id=gpt-4-32k\ntemperature=0\n"));
  CHECK(base != replay_key("uket-final2", "v1", "1/2020", "gpt-4-32k", 0.0));
  CHECK(base != replay_key("uket-final", "v2", "1/2020", "gpt-4-32k", 0.0));
  CHECK(base != replay_key("uket-final", "v1", "2/2020", "gpt-4-32k", 0.0));
  CHECK(base != replay_key("uket-final", "v1", "1/2020", "gpt-4", 0.0));
  CHECK(base != replay_key("uket-final", "v1", "1/2020", "gpt-4-32k", 0.1));
  CHECK(replay_key("a/b", "c", "d", "e", 0.0) != replay_key("a", "b/c", "d", "e", 0.0));
}

TEST_CASE("chat request body carries system then user messages") {
  ChatRequest req;
  req.system_text = "sys";
  req.user_text = "user \"quoted\" text";
  req.model_id = "m";
  req.max_output_tokens = 100;
  const auto j = nlohmann::json::parse(chat_request_body(req));
  CHECK(j["model"] == "m");
  CHECK(j["messages"][0]["role"] == "system");
  CHECK(j["messages"][0]["content"] == "sys");
  CHECK(j["messages"][1]["role"] == "user");
  CHECK(j["messages"][1]["content"] == "user \"quoted\" text");
  CHECK(j["temperature"] == 0.0);
  CHECK(j["max_tokens"] == 100);
}

TEST_CASE("concurrent reads during registration") {
  auto r = PromptRegistry::with_builtin();
  std::vector<std::jthread> readers;
  std::atomic<int> ok{0};
  for (int t = 0; t < 4; ++t)
    readers.emplace_back([&] {
      for (int i = 0; i < 200; ++i)
        if (r.get("uket-final", "v1").text == final_prompt_text()) ++ok;
    });
  for (int i = 0; i < 50; ++i) r.register_template({"variant", "v" + std::to_string(i), "text"});
  readers.clear();
  CHECK(ok == 800);
  CHECK(r.list_templates().size() == 51);
}
