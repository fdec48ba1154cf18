#include "uket/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "uket/error.hpp"
#include "uket/text_util.hpp"

namespace uket {

std::string filename_to_case_id(std::string_view stem) {
  std::string id(stem);
  std::replace(id.begin(), id.end(), '_', '/');
  return id;
}

namespace {

void tally_lints(const ExtractionRecord& record, ExtractionSummary& summary) {
  for (const auto& f : lint_record(record))
    (f.severity == Severity::kError ? summary.lint_errors : summary.lint_warnings)++;
}

void sort_failures(ExtractionSummary& summary) {
  std::sort(summary.failures.begin(), summary.failures.end(),
            [](const auto& a, const auto& b) { return a.case_id < b.case_id; });
}

}  // namespace

ExtractionSummary run_extraction(std::span<const CaseDocument> cases, const PromptRegistry& registry,
                                 Gateway& gateway, const ExtractionJob& job) {
  std::filesystem::create_directories(job.records_dir);
  if (!job.responses_dir.empty()) std::filesystem::create_directories(job.responses_dir);

  ExtractionSummary summary;
  std::mutex summary_mutex;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      const CaseDocument& doc = cases[i];
      try {
        const ChatRequest request = build_request(registry, job.template_id, job.version, doc, job.model);
        const CompletionResult completion = gateway.complete(request, job.mode);
        if (!job.responses_dir.empty())
          write_file_atomic(job.responses_dir / (case_id_to_filename(doc.case_id) + ".txt"),
                            completion.raw_text);
        const ExtractionRecord record = parse_extraction(doc.case_id, completion.raw_text);
        write_record(job.records_dir, record);
        std::lock_guard lock(summary_mutex);
        ++summary.succeeded;
        tally_lints(record, summary);
      } catch (const Error& e) {
        std::lock_guard lock(summary_mutex);
        summary.failures.push_back({doc.case_id, std::string(error_code_name(e.code())) + ": " + e.what()});
      }
    }
  };

  const int workers = std::max(1, std::min<int>(job.workers, static_cast<int>(cases.size())));
  std::vector<std::jthread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();

  sort_failures(summary);
  return summary;
}

ExtractionSummary parse_response_dir(const std::filesystem::path& responses_dir,
                                     const std::filesystem::path& records_dir) {
  if (!std::filesystem::is_directory(responses_dir))
    throw Error(ErrorCode::kIo, "not a directory: " + responses_dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(responses_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  ExtractionSummary summary;
  for (const auto& file : files) {
    const std::string case_id = filename_to_case_id(file.stem().string());
    try {
      const ExtractionRecord record = parse_extraction(case_id, read_file(file));
      write_record(records_dir, record);
      ++summary.succeeded;
      tally_lints(record, summary);
    } catch (const Error& e) {
      summary.failures.push_back({case_id, std::string(error_code_name(e.code())) + ": " + e.what()});
    }
  }
  sort_failures(summary);
  return summary;
}

}  // namespace uket
