#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uket {

struct CaseMeta {
  std::optional<std::string> filing_date;
  std::optional<std::string> decision_date;
  std::optional<std::string> hearing_venue;
  std::vector<std::string> jurisdiction_codes;
  std::vector<std::string> judges;
  std::vector<std::string> claimants;
  std::vector<std::string> respondents;

  bool operator==(const CaseMeta&) const = default;
};

struct CaseDocument {
  std::string case_id;
  std::string body_text;
  int page_count = 1;
  CaseMeta meta;
};

// Throws kInvalidDocument when a document breaks the type invariants.
void validate_document(const CaseDocument& doc);

inline constexpr std::size_t kCharactersPerPage = 3000;

// Fallback used when the manifest carries no page count.
int estimate_page_count(std::string_view body_text);

// Page-count stratum: exactly 1..20 pages, or the open ">20" bucket.
class PageBucket {
 public:
  static constexpr int kMaxExact = 20;

  static PageBucket exact(int pages);
  static PageBucket open() { return PageBucket(kMaxExact + 1); }
  static PageBucket for_page_count(int pages);
  static std::optional<PageBucket> parse(std::string_view label);

  bool is_open() const { return index_ > kMaxExact; }
  bool contains(int pages) const;
  std::string label() const;

  auto operator<=>(const PageBucket&) const = default;

 private:
  explicit PageBucket(int index) : index_(index) {}
  int index_;
};

// All 21 buckets in ascending order.
std::vector<PageBucket> all_buckets();

struct Stratum {
  PageBucket bucket;
  int target_count = 0;
};

class SamplePlan {
 public:
  // Throws kInvalidPlan unless every bucket appears exactly once with target >= 0.
  explicit SamplePlan(std::vector<Stratum> strata);

  // 260 cases: 163, 43, 9, 6, 4, 3, 2 x 7, 1 x 7 for pages 1..20, then 11 over 20 pages.
  static SamplePlan table1();
  static SamplePlan zeros();

  const std::vector<Stratum>& strata() const { return strata_; }
  int total_target() const;

 private:
  std::vector<Stratum> strata_;
};

using Strata = std::map<PageBucket, std::vector<std::string>>;

// Every bucket is present in the result, possibly empty. Ids keep corpus order.
// Throws kCorpusIntegrity on duplicate or empty ids.
Strata stratify(std::span<const CaseDocument> corpus);

struct Shortfall {
  PageBucket bucket;
  int target = 0;
  int available = 0;
};

struct SampleOutcome {
  std::vector<std::string> case_ids;  // bucket order, then draw order
  std::vector<Shortfall> shortfalls;
};

// Uniform draw without replacement of min(target, available) ids per bucket.
// Deterministic in (corpus, plan, seed); independent of corpus ordering.
SampleOutcome sample(std::span<const CaseDocument> corpus, const SamplePlan& plan,
                     std::uint64_t seed);

// Uniform integer in [0, bound) from a 64-bit engine; portable across standard libraries.
template <typename Engine>
std::uint64_t bounded_draw(Engine& engine, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    const std::uint64_t x = engine();
    if (x < limit) return x % bound;
  }
}

// Directory of `<case_id with '/' -> '_'>.txt` files plus manifest.json.
std::vector<CaseDocument> load_corpus(const std::filesystem::path& dir);

struct SampleManifest {
  std::string plan_name;
  std::uint64_t seed = 0;
  std::vector<Stratum> strata;
  std::vector<std::string> case_ids;
  std::vector<Shortfall> shortfalls;
};

std::string sample_manifest_to_json(const SampleManifest& manifest);
SampleManifest sample_manifest_from_json(std::string_view text);
SampleManifest load_sample_manifest(const std::filesystem::path& path);

}  // namespace uket
