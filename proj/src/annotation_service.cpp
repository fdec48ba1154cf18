#include "uket/annotation_service.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

#include <httplib.h>
#include <json.hpp>

#include "uket/error.hpp"
#include "uket/rubric.hpp"

namespace uket {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ServiceResponse error_response(int status, std::string_view kind, std::string_view message) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  return {status, j.dump()};
}

std::string utc_now_iso() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

AnnotationService::AnnotationService(std::vector<CaseDocument> sampled,
                                     std::vector<ExtractionRecord> records, AnnotationStore& store,
                                     CiConvention convention)
    : cases_(std::move(sampled)), store_(store), convention_(convention) {
  for (std::size_t i = 0; i < cases_.size(); ++i) case_index_.emplace(cases_[i].case_id, i);
  for (auto& r : records) records_.emplace(r.case_id, std::move(r));
}

const CaseDocument* AnnotationService::find_case(std::string_view case_id) const {
  auto it = case_index_.find(case_id);
  return it == case_index_.end() ? nullptr : &cases_[it->second];
}

std::vector<QualityAnnotation> AnnotationService::sampled_annotations() const {
  std::vector<QualityAnnotation> out;
  for (auto& a : store_.load_all())
    if (case_index_.contains(a.case_id)) out.push_back(std::move(a));
  return out;
}

ServiceResponse AnnotationService::list_cases(std::string_view status, int page, int page_size) const {
  if (status != "pending" && status != "done" && status != "all")
    return error_response(400, "bad-request", "status must be pending, done or all");
  page = std::max(page, 1);
  page_size = std::clamp(page_size, 1, 500);

  ordered_json items = ordered_json::array();
  std::size_t total = 0;
  const std::size_t first = static_cast<std::size_t>(page - 1) * static_cast<std::size_t>(page_size);
  for (const auto& doc : cases_) {
    const auto annotation = store_.load(doc.case_id);
    const bool done = annotation.has_value();
    if ((status == "pending" && done) || (status == "done" && !done)) continue;
    if (total >= first && items.size() < static_cast<std::size_t>(page_size)) {
      ordered_json item;
      item["case_id"] = doc.case_id;
      item["page_count"] = doc.page_count;
      item["status"] = done ? "done" : "pending";
      auto rec = records_.find(doc.case_id);
      item["label"] = rec == records_.end() ? ordered_json(nullptr)
                                            : ordered_json(label_string(rec->second.outcome_label));
      items.push_back(item);
    }
    ++total;
  }
  ordered_json j;
  j["page"] = page;
  j["page_size"] = page_size;
  j["total"] = total;
  j["items"] = items;
  return {200, j.dump()};
}

ServiceResponse AnnotationService::get_case(std::string_view case_id) const {
  const CaseDocument* doc = find_case(case_id);
  if (!doc) return error_response(404, "not-found", "unknown case " + std::string(case_id));
  ordered_json j;
  j["case_id"] = doc->case_id;
  j["page_count"] = doc->page_count;
  j["body_text"] = doc->body_text;
  auto rec = records_.find(case_id);
  if (rec != records_.end()) {
    j["record"] = json::parse(record_to_json(rec->second));
    auto lint = ordered_json::array();
    for (const auto& f : lint_record(rec->second))
      lint.push_back({{"rule_id", f.rule_id},
                      {"severity", severity_name(f.severity)},
                      {"section", aspect_key(f.section)},
                      {"message", f.message}});
    j["lint"] = lint;
  } else {
    j["record"] = nullptr;
    j["lint"] = ordered_json::array();
  }
  const auto annotation = store_.load(case_id);
  j["annotation"] = annotation ? json::parse(annotation_to_json(*annotation)) : json(nullptr);
  j["version"] = annotation ? annotation->version : 0;
  j["status"] = annotation ? "done" : "pending";
  return {200, j.dump()};
}

ServiceResponse AnnotationService::put_annotation(std::string_view case_id, std::string_view body) {
  if (!find_case(case_id)) return error_response(404, "not-found", "unknown case " + std::string(case_id));
  json request;
  try {
    request = json::parse(body);
  } catch (const json::exception& e) {
    return error_response(400, "bad-request", e.what());
  }
  if (!request.is_object() || !request.contains("annotation") || !request.contains("expected_version"))
    return error_response(400, "bad-request", "body needs 'annotation' and 'expected_version'");

  QualityAnnotation a;
  std::int64_t expected = 0;
  try {
    auto& aj = request["annotation"];
    if (!aj.contains("case_id")) aj["case_id"] = std::string(case_id);
    a = annotation_from_json(aj.dump());
    expected = request["expected_version"].get<std::int64_t>();
  } catch (const std::exception& e) {
    return error_response(400, "bad-request", e.what());
  }
  if (a.case_id != case_id)
    return error_response(422, "validation", "annotation case_id does not match the URL");

  if (auto violations = validate_annotation(a); !violations.empty()) {
    ordered_json j;
    j["error"] = "validation";
    j["violations"] = violations;
    return {422, j.dump()};
  }
  if (a.annotated_at.empty()) a.annotated_at = utc_now_iso();
  try {
    const auto version = store_.store(a, expected);
    ordered_json j;
    j["case_id"] = a.case_id;
    j["version"] = version;
    return {200, j.dump()};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kWriteConflict) throw;
    ordered_json j;
    j["error"] = "conflict";
    j["message"] = e.what();
    const auto current = store_.load(case_id);
    j["current_version"] = current ? current->version : 0;
    j["current"] = current ? json::parse(annotation_to_json(*current)) : json(nullptr);
    return {409, j.dump()};
  }
}

ServiceResponse AnnotationService::stats() const {
  const auto annotations = sampled_annotations();
  ordered_json j;
  j["annotated"] = annotations.size();
  j["sampled"] = cases_.size();
  if (annotations.empty()) {
    j["table"] = nullptr;
    j["suitability"] = nullptr;
    return {200, j.dump()};
  }
  std::vector<ExtractionRecord> records;
  for (const auto& [id, r] : records_) records.push_back(r);
  try {
    const auto table = summarize(annotations, records, convention_);
    j["table"] = json::parse(table_to_json(table));
    std::map<std::string, int> pages;
    for (const auto& doc : cases_) pages[doc.case_id] = doc.page_count;
    const auto rate = suitability_rate(annotations, pages);
    j["suitability"] = {{"count", rate.count},
                        {"total", rate.total},
                        {"percent", rate.percent_display},
                        {"multipage_count", rate.multipage_count}};
  } catch (const Error& e) {
    return error_response(500, error_code_name(e.code()), e.what());
  }
  return {200, j.dump()};
}

ServiceResponse AnnotationService::rubric() const { return {200, rubric_json()}; }

void AnnotationService::bind(httplib::Server& server, const std::optional<std::filesystem::path>& ui_dir) {
  auto send = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json; charset=utf-8");
  };
  auto int_param = [](const httplib::Request& req, const char* name, int fallback) {
    if (!req.has_param(name)) return fallback;
    try {
      return std::stoi(req.get_param_value(name));
    } catch (const std::exception&) {
      return fallback;
    }
  };

  server.Get("/api/cases", [this, send, int_param](const httplib::Request& req, httplib::Response& res) {
    const std::string status = req.has_param("status") ? req.get_param_value("status") : "all";
    send(res, list_cases(status, int_param(req, "page", 1), int_param(req, "page_size", 50)));
  });
  server.Put(R"(/api/cases/(.+)/annotation)",
             [this, send](const httplib::Request& req, httplib::Response& res) {
               send(res, put_annotation(req.matches[1].str(), req.body));
             });
  server.Get(R"(/api/cases/(.+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_case(req.matches[1].str()));
  });
  server.Get("/api/stats", [this, send](const httplib::Request&, httplib::Response& res) { send(res, stats()); });
  server.Get("/api/rubric", [this, send](const httplib::Request&, httplib::Response& res) { send(res, rubric()); });

  if (ui_dir && std::filesystem::is_directory(*ui_dir)) {
    server.set_mount_point("/", ui_dir->string());
  } else {
    server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(
          "<!doctype html><title>UKET review</title><p>Review UI assets are not installed. "
          "The JSON API is available under <code>/api/</code>.</p>",
          "text/html; charset=utf-8");
    });
  }
}

}  // namespace uket
