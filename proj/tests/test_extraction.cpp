#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <random>

#include "support.hpp"
#include "uket/corpus.hpp"
#include "uket/error.hpp"
#include "uket/extraction.hpp"
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

std::string cached_response(const std::string& case_id) {
  return read_file(test::kFixtureDir / "cache" /
                   (replay_key("uket-final", "v1", case_id, "gpt-4-32k", 0.0) + ".txt"));
}

std::string strip_ws(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

const char* kNumbered =
    "1. Facts of the case: The claimant worked as a chef.\n\n"
    "2. Claims made: Unfair dismissal.\n\n"
    "3. References to legal statutes, acts, regulations, provisions and rules: Section 98 of the "
    "Employment Rights Act 1996.\n\n"
    "4. References to precedents and other court decisions: There are no references to precedents.\n\n"
    "5. General case outcome: The claim succeeded.\n\n"
    "6. General case outcome summarised using one of the following four labels: Claimant wins.\n\n"
    "7. Detailed order and remedies: The respondent shall pay £500.\n\n"
    "8. Essential reasons for the decision: The dismissal was procedurally unfair.";

}  // namespace

TEST_CASE("golden response 1: bulleted bold headings") {
  const auto r = parse_extraction("3328920/2017", cached_response("3328920/2017"));
  CHECK(r.outcome_label == OutcomeLabel::kClaimantPartlyWins);
  CHECK(r.outcome_label_raw == "Claimant partly wins.");
  CHECK(r.statute_refs.find("Rule 21 of Schedule 1 to the Employment Tribunals (Constitution and Rules of "
                            "Procedure) Regulations 2013") != std::string::npos);
  CHECK(r.facts.rfind("The case involves Mr Y Mfunda (Claimant)", 0) == 0);
  CHECK(r.facts.ends_with("related to mileage expenses."));
  CHECK(r.order_remedies.ends_with("The hearing listed for 14 May 2018 is cancelled."));
  CHECK(r.absence_flags[aspect_index(Aspect::kPrecedentRefs)]);
  CHECK_FALSE(r.absence_flags[aspect_index(Aspect::kStatuteRefs)]);
  CHECK(lint_record(r).empty());
}

TEST_CASE("golden response 2: numbered headings") {
  const auto raw = cached_response("2301070/2018");
  const auto r = parse_extraction("2301070/2018", raw);
  CHECK(r.outcome_label == OutcomeLabel::kClaimantPartlyWins);
  CHECK(r.outcome_label_raw == "'Claimant partly wins'.");
  CHECK(r.precedent_refs.find("Agarwal v Cardiff University") != std::string::npos);
  CHECK(r.statute_refs.find("rules 2, 37 and 39") != std::string::npos);
  CHECK(r.reasons.find("strike out or deposit\n\norder on other grounds") != std::string::npos);
  CHECK_FALSE(r.absence_flags[aspect_index(Aspect::kStatuteRefs)]);
  CHECK(raw.find(r.outcome_label_raw) != std::string::npos);
  CHECK(lint_record(r).empty());
}

TEST_CASE("golden records survive serialize and re-parse") {
  for (const char* id : {"3328920/2017", "2301070/2018"}) {
    const auto r = parse_extraction(id, cached_response(id));
    CHECK(parse_extraction(id, render_response(r)) == r);
    CHECK(record_from_json(record_to_json(r)) == r);
  }
}

TEST_CASE("parse errors") {
  SUBCASE("missing section 6 is named") {
    std::string raw = kNumbered;
    const auto start = raw.find("6. General");
    raw.erase(start, raw.find("7. Detailed") - start);
    try {
      parse_extraction("x", raw);
      FAIL("expected missing-section");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kMissingSection);
      CHECK(std::string(e.what()).find("6") != std::string::npos);
    }
  }
  SUBCASE("repeated heading is ambiguous") {
    const std::string raw = std::string(kNumbered) + "\n\n9. Facts of the case: again.";
    CHECK(code_of([&] { parse_extraction("x", raw); }) == ErrorCode::kAmbiguousSection);
  }
  SUBCASE("label outside the closed set") {
    std::string raw = kNumbered;
    raw.replace(raw.find("Claimant wins."), 14, "Defendant wins.");
    CHECK(code_of([&] { parse_extraction("x", raw); }) == ErrorCode::kUnparseableLabel);
  }
  SUBCASE("empty input") {
    CHECK(code_of([] { parse_extraction("x", "  \n"); }) == ErrorCode::kEmptyInput);
  }
}

TEST_CASE("sections may arrive in any order and with bold numbered headings") {
  std::vector<std::string> lines;
  std::string raw = kNumbered;
  for (std::size_t pos = 0; pos < raw.size();) {
    const auto next = raw.find("\n\n", pos);
    lines.push_back(raw.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    pos = next == std::string::npos ? raw.size() : next + 2;
  }
  std::reverse(lines.begin(), lines.end());
  std::string reversed;
  for (const auto& l : lines) reversed += l + "\n";
  const auto a = parse_extraction("x", kNumbered);
  CHECK(parse_extraction("x", reversed) == a);

  std::string bold = kNumbered;
  for (const char* h : {"Facts of the case", "Claims made", "General case outcome summarised using one of the "
                        "following four labels"}) {
    const auto at = bold.find(h);
    bold.insert(at + std::string(h).size() + 1, "**");
    bold.insert(at, "**");
  }
  CHECK(parse_extraction("x", bold) == a);
}

TEST_CASE("normalize_label examples") {
  CHECK(normalize_label("'Claimant partly wins'.") == OutcomeLabel::kClaimantPartlyWins);
  CHECK(normalize_label("Claimant partially wins") == OutcomeLabel::kClaimantPartlyWins);
  CHECK(normalize_label("“Claimant wins”.") == OutcomeLabel::kClaimantWins);
  CHECK(normalize_label("**Claimant loses**") == OutcomeLabel::kClaimantLoses);
  CHECK(normalize_label("  other ") == OutcomeLabel::kOther);
  CHECK(code_of([] { normalize_label("defendant wins"); }) == ErrorCode::kUnparseableLabel);
  CHECK(code_of([] { normalize_label(""); }) == ErrorCode::kUnparseableLabel);
  for (OutcomeLabel l : kAllLabels) CHECK(label_from_canonical(label_string(l)) == l);
}

TEST_CASE("normalize_label over the 96-variant grid") {
  // 4 labels x {lower, Title, UPPER} x {bare, 'single', "double", **bold**} x {no ending, trailing '.'}
  int checked = 0;
  for (OutcomeLabel label : kAllLabels) {
    const std::string canonical(label_string(label));
    std::string title = canonical, upper = canonical;
    title[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(title[0])));
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    for (const auto& cased : {canonical, title, upper})
      for (const auto& wrapped : {cased, "'" + cased + "'", "\"" + cased + "\"", "**" + cased + "**"})
        for (const auto& v : {wrapped, wrapped + "."}) {
          CHECK_MESSAGE(normalize_label(v) == label, v);
          ++checked;
        }
  }
  CHECK(checked == 96);
}

TEST_CASE("absence detection") {
  CHECK(detect_absence("There are no references to precedents or other court decisions in the provided text."));
  CHECK_FALSE(detect_absence("The case refers to the Employment Rights Act 1996"));
  CHECK(detect_absence(""));
  CHECK(detect_absence(" \n\t"));
  CHECK(detect_absence("The document DOES NOT PROVIDE details of the specific claims made."));
  CHECK(detect_absence("The amount is not specified in the file."));
  const AbsenceDetector custom({"Nothing Here"});
  CHECK(custom("nothing here at all"));
  CHECK_FALSE(custom("does not provide"));
}

TEST_CASE("lint rules") {
  CHECK(lint_rules().size() == 3);
  SUBCASE("L1 withdrawal labelled other") {
    auto r = test::make_record("a/2020");
    r.general_outcome = "The claim was dismissed upon withdrawal.";
    r.outcome_label = OutcomeLabel::kOther;
    const auto f = lint_record(r);
    REQUIRE(f.size() == 1);
    CHECK(f[0].rule_id == "L1");
    CHECK(f[0].severity == Severity::kWarning);
    CHECK(f[0].message == "withdrawn claims are labelled 'claimant loses' in the reference convention");
    r.outcome_label = OutcomeLabel::kClaimantLoses;
    CHECK(lint_record(r).empty());
  }
  SUBCASE("L2 truncated per-party outcomes") {
    auto r = test::make_record("a/2020");
    r.facts += " The information for the other claimants can be similarly organised.";
    const auto f = lint_record(r);
    REQUIRE(f.size() == 1);
    CHECK(f[0].rule_id == "L2");
    CHECK(f[0].severity == Severity::kError);
    CHECK(f[0].section == Aspect::kFacts);
    CHECK(f[0].message == "per-party outcomes truncated");
    r.order_remedies = "Similarly organized for the rest.";
    CHECK(lint_record(r).size() == 2);
  }
  SUBCASE("L3 reasons without text") {
    auto r = test::make_record("a/2020");
    r.reasons = "-";
    const auto f = lint_record(r);
    REQUIRE(f.size() == 1);
    CHECK(f[0].rule_id == "L3");
    r.absence_flags[aspect_index(Aspect::kReasons)] = true;
    CHECK(lint_record(r).empty());
  }
  SUBCASE("deterministic") {
    auto r = test::make_record("a/2020");
    r.outcome_label = OutcomeLabel::kOther;
    r.reasons = "The claimant withdrew; similarly organised.";
    CHECK(lint_record(r) == lint_record(r));
    CHECK(lint_record(r).size() == 2);
  }
}

TEST_CASE("every fixture response parses, round-trips and keeps its text") {
  const auto sample = load_sample_manifest(test::kFixtureDir / "sample.json");
  REQUIRE(sample.case_ids.size() == 260);
  for (const auto& id : sample.case_ids) {
    const auto raw = cached_response(id);
    ExtractionRecord r;
    REQUIRE_NOTHROW(r = parse_extraction(id, raw));
    CHECK(parse_extraction(id, render_response(r)) == r);
    CHECK(record_from_json(record_to_json(r)) == r);
    CHECK(raw.find(r.outcome_label_raw) != std::string::npos);

    // Section preservation: bodies appear in order in the raw text (whitespace-insensitive)
    // and whatever lies between them is a heading.
    std::vector<std::pair<std::size_t, std::string>> bodies;
    const auto flat = strip_ws(raw);
    for (Aspect a : kAllAspects) {
      const auto body = strip_ws(r.section(a));
      const auto at = flat.find(body);
      REQUIRE(at != std::string::npos);
      bodies.emplace_back(at, body);
    }
    std::sort(bodies.begin(), bodies.end());
    std::size_t cursor = 0;
    for (const auto& [at, body] : bodies) {
      const auto gap = flat.substr(cursor, at - cursor);
      CHECK_MESSAGE(gap.find(':') != std::string::npos, id << " gap " << gap);
      CHECK(gap.size() < 90);
      cursor = at + body.size();
    }
    CHECK(cursor == flat.size());
  }
}

TEST_CASE("committed records equal a fresh parse of the cached responses") {
  const auto records = load_records(test::kFixtureDir / "records");
  REQUIRE(records.size() == 260);
  for (const auto& r : records) CHECK(parse_extraction(r.case_id, cached_response(r.case_id)) == r);
  CHECK(std::is_sorted(records.begin(), records.end(),
                       [](const auto& a, const auto& b) { return a.case_id < b.case_id; }));
  const auto jsonl = records_to_jsonl(records);
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 260);
}

TEST_CASE("render/parse round trip over generated records") {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> words = {"claimant", "respondent", "Tribunal", "£1,200.50", "wages", "(gross)",
                                          "section 13", "“quoted”", "dismissed.", "However,", "Rule 21",
                                          "e.g.", "2018;", "notice", "pay", "-", "*emphasis*"};
  auto sentence = [&](int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += (i ? " " : "") + words[rng() % words.size()];
    return s;
  };
  for (int trial = 0; trial < 250; ++trial) {
    ExtractionRecord r;
    r.case_id = "gen/" + std::to_string(trial);
    for (Aspect a : kAllAspects) {
      if (a == Aspect::kOutcomeLabel) continue;
      std::string body = sentence(1 + static_cast<int>(rng() % 12));
      if (rng() % 4 == 0) body += "\n\n" + sentence(3);
      r.section(a) = body;
    }
    r.outcome_label = kAllLabels[rng() % 4];
    r.outcome_label_raw = std::string(label_string(r.outcome_label)) + ".";
    const AbsenceDetector detector;
    for (Aspect a : kAllAspects)
      r.absence_flags[aspect_index(a)] = a != Aspect::kOutcomeLabel && detector(r.section(a));
    CHECK(parse_extraction(r.case_id, render_response(r)) == r);
    CHECK(record_from_json(record_to_json(r)) == r);
  }
}

TEST_CASE("record files") {
  test::TempDir dir;
  const auto r = test::make_record("123/2020");
  write_record(dir.path(), r);
  CHECK(std::filesystem::exists(dir / "123_2020.json"));
  CHECK(read_record(dir / "123_2020.json") == r);
  CHECK(load_records(dir.path()).size() == 1);
  CHECK(code_of([] { record_from_json("{}"); }) == ErrorCode::kFormat);
}
