#include "uket/stats.hpp"

#include <cctype>
#include <cstdio>
#include <cmath>
#include <set>

#include <json.hpp>

#include "uket/error.hpp"
#include "uket/text_util.hpp"

namespace uket {

using nlohmann::ordered_json;

ProportionEstimate accuracy_ci(std::int64_t successes, std::int64_t trials) {
  if (trials <= 0) throw Error(ErrorCode::kEmptyInput, "proportion needs at least one trial");
  if (successes < 0 || successes > trials)
    throw Error(ErrorCode::kFormat, "successes " + std::to_string(successes) + " outside [0, " +
                                        std::to_string(trials) + "]");
  ProportionEstimate e;
  e.successes = successes;
  e.trials = trials;
  e.p = static_cast<double>(successes) / static_cast<double>(trials);
  if (successes != 0 && successes != trials) {
    // p(1-p)/n as s(n-s)/n^3.
    const double n = static_cast<double>(trials);
    const double product = static_cast<double>(successes) * static_cast<double>(trials - successes);
    e.half_width = kZ95 * std::sqrt(product / n / n / n);
  }
  return e;
}

namespace {

// round-half-up(successes / trials * 1000), exactly.
std::int64_t thousandths(std::int64_t successes, std::int64_t trials) {
  return (2000 * successes + trials) / (2 * trials);
}

std::string fixed3(std::int64_t milli) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%03lld", static_cast<long long>(milli / 1000),
                static_cast<long long>(milli % 1000));
  return buf;
}

}  // namespace

std::string format_proportion(std::int64_t successes, std::int64_t trials) {
  return fixed3(thousandths(successes, trials));
}

std::string format_half_width(double half_width) {
  return fixed3(static_cast<std::int64_t>(std::floor(half_width * 1000.0 + 0.5)));
}

std::string ProportionEstimate::formatted() const {
  std::string out = format_proportion(successes, trials);
  if (successes == 0 || successes == trials) return out;
  return out + " \xC2\xB1 " + format_half_width(half_width);
}

std::string_view ci_convention_name(CiConvention c) {
  return c == CiConvention::kWald ? "wald" : "reference";
}

CiConvention parse_ci_convention(std::string_view name) {
  if (name == "wald") return CiConvention::kWald;
  if (name == "reference") return CiConvention::kReference;
  throw Error(ErrorCode::kFormat, "unknown CI convention " + std::string(name));
}

namespace {

double reference_half_width(const ProportionEstimate& e, std::int64_t reference_n) {
  const double q = static_cast<double>(thousandths(e.successes, e.trials)) / 1000.0;
  if (q <= 0.0 || q >= 1.0) return 0.0;
  return kZ95 * std::sqrt(q * (1.0 - q) / static_cast<double>(reference_n));
}

}  // namespace

AccuracyTable summarize(std::span<const QualityAnnotation> annotations,
                        std::span<const ExtractionRecord> records, CiConvention convention) {
  if (annotations.empty()) throw Error(ErrorCode::kEmptyInput, "no annotations to summarise");
  std::set<std::string_view> record_ids;
  for (const auto& r : records) record_ids.insert(r.case_id);

  PerAspect<std::int64_t> all_ok{}, suitable_ok{};
  AccuracyTable table;
  table.convention = convention;
  for (const auto& a : annotations) {
    if (!record_ids.contains(a.case_id))
      throw Error(ErrorCode::kDanglingReference, "annotation for " + a.case_id + " has no extraction record");
    if (auto v = validate_annotation(a); !v.empty())
      throw Error(ErrorCode::kInvalidAnnotation, "invalid annotation for " + a.case_id + ": " + v.front());
    ++table.all_trials;
    const bool suitable = a.part2_suitable == 1;
    if (suitable) ++table.suitable_trials;
    for (const auto& s : a.part1) {
      all_ok[aspect_index(s.aspect)] += s.score;
      if (suitable) suitable_ok[aspect_index(s.aspect)] += s.score;
    }
  }

  for (Aspect asp : kAllAspects) {
    auto& row = table.rows[aspect_index(asp)];
    row.aspect = asp;
    row.all = accuracy_ci(all_ok[aspect_index(asp)], table.all_trials);
    row.all_wald_half_width = row.all.half_width;
    if (table.suitable_trials > 0) {
      row.suitable = accuracy_ci(suitable_ok[aspect_index(asp)], table.suitable_trials);
      row.suitable_wald_half_width = row.suitable->half_width;
    }
    if (convention == CiConvention::kReference) {
      row.all.half_width = reference_half_width(row.all, table.all_trials);
      if (row.suitable) row.suitable->half_width = reference_half_width(*row.suitable, table.all_trials);
    }
  }
  return table;
}

namespace {

std::string pad(std::string s, std::size_t width) {
  const std::size_t len = utf8_length(s);
  if (len < width) s.append(width - len, ' ');
  return s;
}

}  // namespace

std::string render_table_text(const AccuracyTable& table, std::optional<Subset> only) {
  const bool show_all = !only || *only == Subset::kAll;
  const bool show_suitable = (!only || *only == Subset::kSuitableOnly);
  constexpr std::size_t kAspectWidth = 46, kCellWidth = 24;

  std::string out = pad("Aspect of extraction", kAspectWidth);
  if (show_all) out += pad("All cases (n=" + std::to_string(table.all_trials) + ")", kCellWidth);
  if (show_suitable) out += "Suitable for prediction (n=" + std::to_string(table.suitable_trials) + ")";
  while (!out.empty() && out.back() == ' ') out.pop_back();
  out += "\n";
  for (const auto& row : table.rows) {
    std::string line = pad(std::string(aspect_table_label(row.aspect)), kAspectWidth);
    if (show_all) line += pad(row.all.formatted(), kCellWidth);
    if (show_suitable) line += row.suitable ? row.suitable->formatted() : std::string("-");
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  out += "95% intervals, convention: " + std::string(ci_convention_name(table.convention)) + "\n";
  return out;
}

namespace {

ordered_json estimate_json(const ProportionEstimate& e, double wald_half_width) {
  ordered_json j;
  j["successes"] = e.successes;
  j["trials"] = e.trials;
  j["p"] = e.p;
  j["half_width"] = e.half_width;
  j["wald_half_width"] = wald_half_width;
  j["formatted"] = e.formatted();
  return j;
}

}  // namespace

std::string table_to_json(const AccuracyTable& table, std::optional<Subset> only) {
  const bool show_all = !only || *only == Subset::kAll;
  const bool show_suitable = !only || *only == Subset::kSuitableOnly;
  ordered_json j;
  j["convention"] = ci_convention_name(table.convention);
  j["z"] = kZ95;
  j["all_trials"] = table.all_trials;
  j["suitable_trials"] = table.suitable_trials;
  auto rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json r;
    r["aspect"] = aspect_key(row.aspect);
    r["label"] = aspect_table_label(row.aspect);
    if (show_all) r["all"] = estimate_json(row.all, row.all_wald_half_width);
    if (show_suitable)
      r["suitable"] = row.suitable ? estimate_json(*row.suitable, *row.suitable_wald_half_width)
                                   : ordered_json(nullptr);
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

SuitabilityRate suitability_rate(std::span<const QualityAnnotation> annotations,
                                 const std::map<std::string, int>& page_counts) {
  if (annotations.empty()) throw Error(ErrorCode::kEmptyInput, "no annotations");
  SuitabilityRate r;
  r.total = static_cast<std::int64_t>(annotations.size());
  for (const auto& a : annotations) {
    if (a.part2_suitable != 1) continue;
    ++r.count;
    auto it = page_counts.find(a.case_id);
    if (it == page_counts.end())
      throw Error(ErrorCode::kDanglingReference, "no page count for " + a.case_id);
    if (it->second > 1) ++r.multipage_count;
  }
  r.proportion = static_cast<double>(r.count) / static_cast<double>(r.total);
  const std::int64_t tenths = (2000 * r.count + r.total) / (2 * r.total);  // percent * 10, half-up
  r.percent_display = std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "%";
  return r;
}

namespace {

std::string normalize_for_match(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

}  // namespace

Rule21Detector::Rule21Detector() : Rule21Detector({"rule 21", "r. 21", "r 21", "r.21"}) {}

Rule21Detector::Rule21Detector(std::vector<std::string> phrases) {
  for (const auto& p : phrases) phrases_.push_back(normalize_for_match(p));
}

bool Rule21Detector::matches(std::string_view text) const {
  const std::string s = normalize_for_match(text);
  for (const auto& p : phrases_) {
    for (std::size_t pos = s.find(p); pos != std::string::npos; pos = s.find(p, pos + 1)) {
      const bool left = pos == 0 || !is_word_char(s[pos - 1]);
      const std::size_t end = pos + p.size();
      const bool right = end == s.size() || !is_word_char(s[end]);
      if (left && right) return true;
    }
  }
  return false;
}

Rule21Report rule21_report(std::span<const ExtractionRecord> records, const Rule21Detector& detector) {
  Rule21Report report;
  for (const auto& r : records) {
    const bool f = detector.matches(r.facts);
    const bool s = detector.matches(r.statute_refs);
    const bool re = detector.matches(r.reasons);
    if (!f && !s && !re) continue;
    ++report.total_cases;
    std::string pattern;
    auto add = [&](bool on, const char* name) {
      if (!on) return;
      if (!pattern.empty()) pattern += "+";
      pattern += name;
    };
    add(f, "facts");
    add(s, "statutes");
    add(re, "reasons");
    if (f && s && re)
      ++report.facts_statutes_reasons;
    else if (!f && s && !re)
      ++report.statutes_only;
    else if (!f && s && re)
      ++report.statutes_and_reasons_not_facts;
    else
      ++report.other_patterns[pattern];
    report.cases.emplace_back(r.case_id, pattern);
  }
  return report;
}

std::string render_rule21_text(const Rule21Report& report) {
  std::string out;
  out += "Cases citing Rule 21:                     " + std::to_string(report.total_cases) + "\n";
  out += "  in facts, statutes and reasons:         " + std::to_string(report.facts_statutes_reasons) + "\n";
  out += "  in statutes only:                       " + std::to_string(report.statutes_only) + "\n";
  out += "  in statutes and reasons, not facts:     " +
         std::to_string(report.statutes_and_reasons_not_facts) + "\n";
  if (report.other_patterns.empty()) {
    out += "  other patterns:                         none\n";
  } else {
    for (const auto& [pattern, n] : report.other_patterns)
      out += "  other (" + pattern + "): " + std::to_string(n) + "\n";
  }
  return out;
}

std::string rule21_to_json(const Rule21Report& report) {
  ordered_json j;
  j["total_cases"] = report.total_cases;
  j["facts_statutes_reasons"] = report.facts_statutes_reasons;
  j["statutes_only"] = report.statutes_only;
  j["statutes_and_reasons_not_facts"] = report.statutes_and_reasons_not_facts;
  j["other_patterns"] = ordered_json::object();
  for (const auto& [pattern, n] : report.other_patterns) j["other_patterns"][pattern] = n;
  auto cases = ordered_json::array();
  for (const auto& [id, pattern] : report.cases) cases.push_back({{"case_id", id}, {"pattern", pattern}});
  j["cases"] = cases;
  return j.dump(2) + "\n";
}

}  // namespace uket
