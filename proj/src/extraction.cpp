#include "uket/extraction.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "uket/error.hpp"
#include "uket/text_util.hpp"

namespace uket {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view label_string(OutcomeLabel label) {
  switch (label) {
    case OutcomeLabel::kClaimantWins: return "claimant wins";
    case OutcomeLabel::kClaimantPartlyWins: return "claimant partly wins";
    case OutcomeLabel::kClaimantLoses: return "claimant loses";
    case OutcomeLabel::kOther: return "other";
  }
  return "";
}

std::optional<OutcomeLabel> label_from_canonical(std::string_view s) {
  for (OutcomeLabel l : kAllLabels)
    if (label_string(l) == s) return l;
  return std::nullopt;
}

namespace {

// Quote and emphasis characters stripped from either end of a label.
constexpr std::string_view kWrappers[] = {"\xE2\x80\x98", "\xE2\x80\x99", "\xE2\x80\x9C",
                                          "\xE2\x80\x9D", "**", "*", "_", "'", "\"", "`"};
constexpr std::string_view kTrailingPunct = ".,;:!";

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

std::string_view strip_label_decoration(std::string_view s) {
  for (bool changed = true; changed;) {
    changed = false;
    s = trim(s);
    if (!s.empty() && kTrailingPunct.find(s.back()) != std::string_view::npos) {
      s.remove_suffix(1);
      changed = true;
    }
    for (std::string_view w : kWrappers) {
      if (s.starts_with(w)) {
        s.remove_prefix(w.size());
        changed = true;
      }
      if (s.ends_with(w)) {
        s.remove_suffix(w.size());
        changed = true;
      }
    }
  }
  return s;
}

std::optional<OutcomeLabel> try_normalize(std::string_view raw) {
  const std::string s = collapse_spaces(to_lower_ascii(strip_label_decoration(raw)));
  if (s == "claimant partially wins") return OutcomeLabel::kClaimantPartlyWins;
  return label_from_canonical(s);
}

// Label buried in a longer sentence: accepted only when exactly one distinct label occurs.
std::optional<OutcomeLabel> find_unique_label(std::string_view body) {
  const std::string s = collapse_spaces(to_lower_ascii(body));
  std::vector<OutcomeLabel> found;
  auto note = [&](OutcomeLabel l) {
    if (std::find(found.begin(), found.end(), l) == found.end()) found.push_back(l);
  };
  if (s.find("claimant partly wins") != std::string::npos ||
      s.find("claimant partially wins") != std::string::npos)
    note(OutcomeLabel::kClaimantPartlyWins);
  if (s.find("claimant wins") != std::string::npos) note(OutcomeLabel::kClaimantWins);
  if (s.find("claimant loses") != std::string::npos) note(OutcomeLabel::kClaimantLoses);
  for (std::string_view quoted : {"'other'", "\"other\"", "\xE2\x80\x98other\xE2\x80\x99",
                                  "\xE2\x80\x9Cother\xE2\x80\x9D"})
    if (s.find(quoted) != std::string::npos) note(OutcomeLabel::kOther);
  if (found.size() == 1) return found.front();
  return std::nullopt;
}

}  // namespace

OutcomeLabel normalize_label(std::string_view raw_label) {
  if (auto l = try_normalize(raw_label)) return *l;
  throw Error(ErrorCode::kUnparseableLabel, "unrecognised outcome label: " + std::string(raw_label));
}

AbsenceDetector::AbsenceDetector()
    : AbsenceDetector({"does not provide", "no specific references", "no references to precedents",
                       "not specified in the file"}) {}

AbsenceDetector::AbsenceDetector(std::vector<std::string> phrases) {
  for (auto& p : phrases) phrases_.push_back(collapse_spaces(to_lower_ascii(p)));
}

bool AbsenceDetector::operator()(std::string_view section_text) const {
  if (is_blank(section_text)) return true;
  const std::string text = collapse_spaces(to_lower_ascii(section_text));
  return std::any_of(phrases_.begin(), phrases_.end(),
                     [&](const std::string& p) { return text.find(p) != std::string::npos; });
}

bool detect_absence(std::string_view section_text) {
  static const AbsenceDetector kDefault;
  return kDefault(section_text);
}

const std::string& ExtractionRecord::section(Aspect a) const {
  return const_cast<ExtractionRecord*>(this)->section(a);
}

std::string& ExtractionRecord::section(Aspect a) {
  switch (a) {
    case Aspect::kFacts: return facts;
    case Aspect::kClaims: return claims;
    case Aspect::kStatuteRefs: return statute_refs;
    case Aspect::kPrecedentRefs: return precedent_refs;
    case Aspect::kGeneralOutcome: return general_outcome;
    case Aspect::kOutcomeLabel: return outcome_label_raw;
    case Aspect::kOrderRemedies: return order_remedies;
    case Aspect::kReasons: return reasons;
  }
  return facts;
}

namespace {

struct HeadingPhrase {
  std::string_view phrase;
  Aspect aspect;
};

// Longest first, so "general case outcome summarised" wins over "general case outcome".
const std::vector<HeadingPhrase>& heading_phrases() {
  static const std::vector<HeadingPhrase> kPhrases = [] {
    std::vector<HeadingPhrase> v = {
        {"facts of the case", Aspect::kFacts},
        {"claims made", Aspect::kClaims},
        {"references to legal statutes", Aspect::kStatuteRefs},
        {"references to precedents", Aspect::kPrecedentRefs},
        {"general case outcome summarised", Aspect::kOutcomeLabel},
        {"general case outcome summarized", Aspect::kOutcomeLabel},
        {"general case outcome", Aspect::kGeneralOutcome},
        {"detailed order and remedies", Aspect::kOrderRemedies},
        {"essential reasons", Aspect::kReasons},
        {"reasons for the decision", Aspect::kReasons},
    };
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      return a.phrase.size() > b.phrase.size();
    });
    return v;
  }();
  return kPhrases;
}

constexpr std::size_t kMaxHeadingLabel = 200;

struct Heading {
  Aspect aspect;
  std::size_t line_start;  // offset of the heading line
  std::size_t body_start;  // offset just past the colon (and closing bold)
};

std::size_t skip_blanks(std::string_view s, std::size_t i, std::size_t end) {
  while (i < end && (s[i] == ' ' || s[i] == '\t')) ++i;
  return i;
}

// Recognises "[marker] [**] label: [**]" at the start of [begin, end).
std::optional<Heading> match_heading(std::string_view text, std::size_t begin, std::size_t end) {
  std::size_t i = skip_blanks(text, begin, end);
  // List marker: "12." / "12)" / "-" / "*" (not "**") / bullet / markdown "#".
  if (i < end && std::isdigit(static_cast<unsigned char>(text[i]))) {
    std::size_t j = i;
    while (j < end && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j < end && (text[j] == '.' || text[j] == ')')) i = skip_blanks(text, j + 1, end);
  } else if (i < end && (text[i] == '-' || text[i] == '#' ||
                         (text[i] == '*' && (i + 1 >= end || text[i + 1] != '*')))) {
    const char marker = text[i];
    while (i < end && text[i] == marker) ++i;
    i = skip_blanks(text, i, end);
  } else if (text.substr(i).starts_with("\xE2\x80\xA2")) {
    i = skip_blanks(text, i + 3, end);
  }
  while (i < end && text[i] == '*') ++i;

  const std::size_t colon = text.find(':', i);
  if (colon == std::string_view::npos || colon >= end || colon - i > kMaxHeadingLabel)
    return std::nullopt;
  std::string_view label = text.substr(i, colon - i);
  while (!label.empty() && (label.back() == '*' || label.back() == ' ')) label.remove_suffix(1);
  const std::string lowered = collapse_spaces(to_lower_ascii(label));

  for (const auto& hp : heading_phrases()) {
    if (!std::string_view(lowered).starts_with(hp.phrase)) continue;
    std::size_t body = colon + 1;
    while (body < end && text[body] == '*') ++body;
    return Heading{hp.aspect, begin, body};
  }
  return std::nullopt;
}

}  // namespace

ExtractionRecord parse_extraction(std::string_view case_id, std::string_view raw_text,
                                  const AbsenceDetector& absence) {
  if (is_blank(raw_text)) throw Error(ErrorCode::kEmptyInput, "empty response for " + std::string(case_id));

  std::vector<Heading> headings;
  for (std::size_t line = 0; line < raw_text.size();) {
    std::size_t eol = raw_text.find('\n', line);
    if (eol == std::string_view::npos) eol = raw_text.size();
    if (auto h = match_heading(raw_text, line, eol)) headings.push_back(*h);
    line = eol + 1;
  }

  PerAspect<std::optional<std::size_t>> seen{};
  for (std::size_t k = 0; k < headings.size(); ++k) {
    auto& slot = seen[aspect_index(headings[k].aspect)];
    if (slot)
      throw Error(ErrorCode::kAmbiguousSection,
                  "section " + std::to_string(aspect_number(headings[k].aspect)) + " (" +
                      std::string(aspect_title(headings[k].aspect)) + ") appears twice in response for " +
                      std::string(case_id));
    slot = k;
  }
  for (Aspect a : kAllAspects)
    if (!seen[aspect_index(a)])
      throw Error(ErrorCode::kMissingSection,
                  "missing section " + std::to_string(aspect_number(a)) + " (" +
                      std::string(aspect_title(a)) + ") in response for " + std::string(case_id));

  ExtractionRecord record;
  record.case_id = std::string(case_id);
  for (std::size_t k = 0; k < headings.size(); ++k) {
    const std::size_t stop = k + 1 < headings.size() ? headings[k + 1].line_start : raw_text.size();
    const std::size_t start = std::min(headings[k].body_start, stop);
    record.section(headings[k].aspect) = std::string(trim(raw_text.substr(start, stop - start)));
  }

  if (record.outcome_label_raw.empty())
    throw Error(ErrorCode::kUnparseableLabel, "empty outcome label for " + std::string(case_id));
  if (auto l = try_normalize(record.outcome_label_raw))
    record.outcome_label = *l;
  else if (auto found = find_unique_label(record.outcome_label_raw))
    record.outcome_label = *found;
  else
    throw Error(ErrorCode::kUnparseableLabel,
                "unrecognised outcome label for " + std::string(case_id) + ": " + record.outcome_label_raw);

  for (Aspect a : kAllAspects)
    record.absence_flags[aspect_index(a)] = a != Aspect::kOutcomeLabel && absence(record.section(a));
  return record;
}

std::string render_response(const ExtractionRecord& record) {
  static constexpr std::string_view kHeadings[] = {
      "Facts of the case", "Claims made", "References to legal statutes",
      "References to precedents", "General case outcome", "General case outcome summarised",
      "Detailed order and remedies", "Essential reasons for the decision"};
  std::string out;
  for (Aspect a : kAllAspects) {
    if (!out.empty()) out += "\n\n";
    out += std::to_string(aspect_number(a)) + ". " + std::string(kHeadings[aspect_index(a)]) + ":";
    const std::string& body = record.section(a);
    if (!body.empty()) out += " " + body;
  }
  out += "\n";
  return out;
}

std::string record_to_json(const ExtractionRecord& r) {
  ordered_json j;
  j["case_id"] = r.case_id;
  j["facts"] = r.facts;
  j["claims"] = r.claims;
  j["statute_refs"] = r.statute_refs;
  j["precedent_refs"] = r.precedent_refs;
  j["general_outcome"] = r.general_outcome;
  j["outcome_label"] = label_string(r.outcome_label);
  j["outcome_label_raw"] = r.outcome_label_raw;
  j["order_remedies"] = r.order_remedies;
  j["reasons"] = r.reasons;
  ordered_json flags;
  for (Aspect a : kAllAspects) flags[std::string(aspect_key(a))] = r.absence_flags[aspect_index(a)];
  j["absence_flags"] = flags;
  return j.dump(2) + "\n";
}

namespace {

ExtractionRecord record_from_json_value(const json& j) {
  ExtractionRecord r;
  r.case_id = j.at("case_id").get<std::string>();
  r.facts = j.at("facts").get<std::string>();
  r.claims = j.at("claims").get<std::string>();
  r.statute_refs = j.at("statute_refs").get<std::string>();
  r.precedent_refs = j.at("precedent_refs").get<std::string>();
  r.general_outcome = j.at("general_outcome").get<std::string>();
  const auto label = j.at("outcome_label").get<std::string>();
  auto l = label_from_canonical(label);
  if (!l) throw Error(ErrorCode::kUnparseableLabel, "record label not canonical: " + label);
  r.outcome_label = *l;
  r.outcome_label_raw = j.at("outcome_label_raw").get<std::string>();
  r.order_remedies = j.at("order_remedies").get<std::string>();
  r.reasons = j.at("reasons").get<std::string>();
  if (j.contains("absence_flags"))
    for (Aspect a : kAllAspects)
      r.absence_flags[aspect_index(a)] = j["absence_flags"].value(std::string(aspect_key(a)), false);
  return r;
}

}  // namespace

ExtractionRecord record_from_json(std::string_view text) {
  try {
    return record_from_json_value(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("extraction record: ") + e.what());
  }
}

std::filesystem::path record_path(const std::filesystem::path& records_dir, std::string_view case_id) {
  return records_dir / (case_id_to_filename(case_id) + ".json");
}

void write_record(const std::filesystem::path& records_dir, const ExtractionRecord& record) {
  std::filesystem::create_directories(records_dir);
  write_file_atomic(record_path(records_dir, record.case_id), record_to_json(record));
}

ExtractionRecord read_record(const std::filesystem::path& path) {
  return record_from_json(read_file(path));
}

std::vector<ExtractionRecord> load_records(const std::filesystem::path& records_dir) {
  if (!std::filesystem::is_directory(records_dir))
    throw Error(ErrorCode::kIo, "not a directory: " + records_dir.string());
  std::vector<ExtractionRecord> out;
  for (const auto& entry : std::filesystem::directory_iterator(records_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      out.push_back(read_record(entry.path()));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.case_id < b.case_id; });
  return out;
}

std::string records_to_jsonl(const std::vector<ExtractionRecord>& records) {
  std::string out;
  for (const auto& r : records) out += json::parse(record_to_json(r)).dump() + "\n";
  return out;
}

std::string_view severity_name(Severity s) { return s == Severity::kError ? "error" : "warning"; }

const std::vector<LintRule>& lint_rules() {
  static const std::vector<LintRule> kRules = {
      {"L1", Severity::kWarning, "withdrawal wording with outcome label 'other'"},
      {"L2", Severity::kError, "per-party outcomes cut short with 'similarly organised'"},
      {"L3", Severity::kWarning, "reasons section has no text and is not marked absent"},
  };
  return kRules;
}

std::vector<LintFinding> lint_record(const ExtractionRecord& record) {
  std::vector<LintFinding> findings;

  if (record.outcome_label == OutcomeLabel::kOther) {
    const bool withdrawal = std::any_of(
        kAllAspects.begin(), kAllAspects.end(), [&](Aspect a) {
          if (a != Aspect::kFacts && a != Aspect::kGeneralOutcome && a != Aspect::kReasons) return false;
          return contains_ci(record.section(a), "withdr");
        });
    if (withdrawal)
      findings.push_back({"L1", Severity::kWarning, Aspect::kOutcomeLabel,
                          "withdrawn claims are labelled 'claimant loses' in the reference convention"});
  }

  for (Aspect a : kAllAspects) {
    const std::string& text = record.section(a);
    if (contains_ci(text, "similarly organised") || contains_ci(text, "similarly organized"))
      findings.push_back({"L2", Severity::kError, a, "per-party outcomes truncated"});
  }

  const bool has_text = std::any_of(record.reasons.begin(), record.reasons.end(),
                                    [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; });
  if (!record.absence_flags[aspect_index(Aspect::kReasons)] && !has_text)
    findings.push_back({"L3", Severity::kWarning, Aspect::kReasons,
                        "reasons section is empty but not marked absent"});
  return findings;
}

}  // namespace uket
