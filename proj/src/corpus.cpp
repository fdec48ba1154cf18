#include "uket/corpus.hpp"

#include <algorithm>
#include <random>
#include <set>

#include <json.hpp>

#include "uket/error.hpp"
#include "uket/text_util.hpp"

namespace uket {

using nlohmann::json;

void validate_document(const CaseDocument& doc) {
  if (doc.case_id.empty()) throw Error(ErrorCode::kInvalidDocument, "empty case_id");
  if (doc.body_text.empty())
    throw Error(ErrorCode::kInvalidDocument, "empty body text for " + doc.case_id);
  if (doc.page_count < 1)
    throw Error(ErrorCode::kInvalidDocument, "page_count < 1 for " + doc.case_id);
}

int estimate_page_count(std::string_view body_text) {
  if (body_text.empty()) throw Error(ErrorCode::kInvalidDocument, "empty body text");
  const std::size_t chars = utf8_length(body_text);
  const std::size_t pages = (chars + kCharactersPerPage - 1) / kCharactersPerPage;
  return static_cast<int>(std::max<std::size_t>(pages, 1));
}

PageBucket PageBucket::exact(int pages) {
  if (pages < 1 || pages > kMaxExact)
    throw Error(ErrorCode::kInvalidPlan, "exact bucket out of range: " + std::to_string(pages));
  return PageBucket(pages);
}

PageBucket PageBucket::for_page_count(int pages) {
  if (pages < 1) throw Error(ErrorCode::kInvalidDocument, "page count < 1");
  return pages > kMaxExact ? open() : PageBucket(pages);
}

std::optional<PageBucket> PageBucket::parse(std::string_view label) {
  label = trim(label);
  if (label == ">20") return open();
  int value = 0;
  if (label.empty() || label.size() > 2) return std::nullopt;
  for (char c : label) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  if (value < 1 || value > kMaxExact) return std::nullopt;
  return PageBucket(value);
}

bool PageBucket::contains(int pages) const {
  return is_open() ? pages > kMaxExact : pages == index_;
}

std::string PageBucket::label() const {
  return is_open() ? std::string(">20") : std::to_string(index_);
}

std::vector<PageBucket> all_buckets() {
  std::vector<PageBucket> out;
  for (int p = 1; p <= PageBucket::kMaxExact; ++p) out.push_back(PageBucket::exact(p));
  out.push_back(PageBucket::open());
  return out;
}

SamplePlan::SamplePlan(std::vector<Stratum> strata) : strata_(std::move(strata)) {
  std::set<PageBucket> seen;
  for (const auto& s : strata_) {
    if (s.target_count < 0)
      throw Error(ErrorCode::kInvalidPlan, "negative target for bucket " + s.bucket.label());
    if (!seen.insert(s.bucket).second)
      throw Error(ErrorCode::kInvalidPlan, "bucket listed twice: " + s.bucket.label());
  }
  for (const auto& b : all_buckets())
    if (!seen.contains(b))
      throw Error(ErrorCode::kInvalidPlan, "plan does not cover bucket " + b.label());
}

SamplePlan SamplePlan::table1() {
  static constexpr int kTargets[] = {163, 43, 9, 6, 4, 3, 2, 2, 2, 2, 2,
                                     2,   2,  1, 1, 1, 1, 1, 1, 1, 11};
  std::vector<Stratum> strata;
  const auto buckets = all_buckets();
  for (std::size_t i = 0; i < buckets.size(); ++i) strata.push_back({buckets[i], kTargets[i]});
  return SamplePlan(std::move(strata));
}

SamplePlan SamplePlan::zeros() {
  std::vector<Stratum> strata;
  for (const auto& b : all_buckets()) strata.push_back({b, 0});
  return SamplePlan(std::move(strata));
}

int SamplePlan::total_target() const {
  int total = 0;
  for (const auto& s : strata_) total += s.target_count;
  return total;
}

Strata stratify(std::span<const CaseDocument> corpus) {
  Strata out;
  for (const auto& b : all_buckets()) out[b];
  std::set<std::string_view> ids;
  for (const auto& doc : corpus) {
    if (doc.case_id.empty()) throw Error(ErrorCode::kCorpusIntegrity, "empty case_id");
    if (!ids.insert(doc.case_id).second)
      throw Error(ErrorCode::kCorpusIntegrity, "duplicate case_id " + doc.case_id);
    out[PageBucket::for_page_count(doc.page_count)].push_back(doc.case_id);
  }
  return out;
}

SampleOutcome sample(std::span<const CaseDocument> corpus, const SamplePlan& plan,
                     std::uint64_t seed) {
  Strata strata = stratify(corpus);
  std::mt19937_64 engine(seed);
  SampleOutcome outcome;
  for (const auto& stratum : plan.strata()) {
    auto candidates = strata[stratum.bucket];
    std::sort(candidates.begin(), candidates.end());
    const int available = static_cast<int>(candidates.size());
    const int take = std::min(stratum.target_count, available);
    if (take < stratum.target_count)
      outcome.shortfalls.push_back({stratum.bucket, stratum.target_count, available});
    // Partial Fisher-Yates: position i receives a uniform pick from the remaining tail.
    for (int i = 0; i < take; ++i) {
      const auto j = i + static_cast<int>(bounded_draw(engine, available - i));
      std::swap(candidates[i], candidates[j]);
      outcome.case_ids.push_back(candidates[i]);
    }
  }
  return outcome;
}

namespace {

std::optional<std::string> optional_string(const json& j, const char* key) {
  if (auto it = j.find(key); it != j.end() && it->is_string()) return it->get<std::string>();
  return std::nullopt;
}

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  if (auto it = j.find(key); it != j.end() && it->is_array())
    for (const auto& v : *it) out.push_back(v.get<std::string>());
  return out;
}

}  // namespace

std::vector<CaseDocument> load_corpus(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, manifest_path.string() + ": " + e.what());
  }
  if (!manifest.is_object())
    throw Error(ErrorCode::kFormat, "manifest.json must map case_id to metadata");

  std::vector<CaseDocument> corpus;
  for (const auto& [case_id, meta] : manifest.items()) {
    CaseDocument doc;
    doc.case_id = case_id;
    doc.body_text = read_file(dir / (case_id_to_filename(case_id) + ".txt"));
    if (meta.contains("page_count") && !meta["page_count"].is_null())
      doc.page_count = meta["page_count"].get<int>();
    else
      doc.page_count = estimate_page_count(doc.body_text);
    doc.meta.filing_date = optional_string(meta, "filing_date");
    doc.meta.decision_date = optional_string(meta, "decision_date");
    doc.meta.hearing_venue = optional_string(meta, "hearing_venue");
    doc.meta.jurisdiction_codes = string_list(meta, "jurisdiction_codes");
    doc.meta.judges = string_list(meta, "judges");
    doc.meta.claimants = string_list(meta, "claimants");
    doc.meta.respondents = string_list(meta, "respondents");
    validate_document(doc);
    corpus.push_back(std::move(doc));
  }
  stratify(corpus);  // duplicate-id check
  return corpus;
}

std::string sample_manifest_to_json(const SampleManifest& m) {
  nlohmann::ordered_json j;
  j["plan"] = m.plan_name;
  j["seed"] = m.seed;
  auto strata = nlohmann::ordered_json::array();
  for (const auto& s : m.strata) strata.push_back({{"bucket", s.bucket.label()}, {"target", s.target_count}});
  j["strata"] = strata;
  auto shortfalls = nlohmann::ordered_json::array();
  for (const auto& s : m.shortfalls)
    shortfalls.push_back(
        {{"bucket", s.bucket.label()}, {"target", s.target}, {"available", s.available}});
  j["shortfalls"] = shortfalls;
  j["case_ids"] = m.case_ids;
  return j.dump(2) + "\n";
}

SampleManifest sample_manifest_from_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    SampleManifest m;
    m.plan_name = j.value("plan", "");
    m.seed = j.value("seed", std::uint64_t{0});
    auto bucket = [](const json& v) {
      auto b = PageBucket::parse(v.get<std::string>());
      if (!b) throw Error(ErrorCode::kFormat, "bad bucket label " + v.dump());
      return *b;
    };
    if (j.contains("strata"))
      for (const auto& s : j["strata"]) m.strata.push_back({bucket(s["bucket"]), s["target"].get<int>()});
    if (j.contains("shortfalls"))
      for (const auto& s : j["shortfalls"])
        m.shortfalls.push_back({bucket(s["bucket"]), s["target"].get<int>(), s["available"].get<int>()});
    m.case_ids = j.at("case_ids").get<std::vector<std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("sample manifest: ") + e.what());
  }
}

SampleManifest load_sample_manifest(const std::filesystem::path& path) {
  return sample_manifest_from_json(read_file(path));
}

}  // namespace uket
