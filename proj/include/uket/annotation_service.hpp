#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uket/corpus.hpp"
#include "uket/extraction.hpp"
#include "uket/quality_check.hpp"
#include "uket/stats.hpp"

namespace httplib {
class Server;
}

namespace uket {

inline constexpr int kDefaultServicePort = 8787;

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

// HTTP surface of the review workflow. Cases and records are read-only; the
// annotation store is the only thing written.
class AnnotationService {
 public:
  // sampled: the sample's cases in sample order. Records may be missing for some.
  AnnotationService(std::vector<CaseDocument> sampled, std::vector<ExtractionRecord> records,
                    AnnotationStore& store, CiConvention convention = CiConvention::kReference);

  // GET /api/cases?status=pending|done|all&page=N&page_size=M
  ServiceResponse list_cases(std::string_view status, int page, int page_size) const;
  // GET /api/cases/{id}
  ServiceResponse get_case(std::string_view case_id) const;
  // PUT /api/cases/{id}/annotation, body {"expected_version": N, "annotation": {...}}
  ServiceResponse put_annotation(std::string_view case_id, std::string_view body);
  // GET /api/stats
  ServiceResponse stats() const;
  // GET /api/rubric
  ServiceResponse rubric() const;

  // Registers the routes; ui_dir (if it exists) is served at "/".
  void bind(httplib::Server& server, const std::optional<std::filesystem::path>& ui_dir);

 private:
  const CaseDocument* find_case(std::string_view case_id) const;
  std::vector<QualityAnnotation> sampled_annotations() const;

  std::vector<CaseDocument> cases_;
  std::map<std::string, std::size_t, std::less<>> case_index_;
  std::map<std::string, ExtractionRecord, std::less<>> records_;
  AnnotationStore& store_;
  CiConvention convention_;
};

}  // namespace uket
