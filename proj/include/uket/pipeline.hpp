#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "uket/corpus.hpp"
#include "uket/extraction.hpp"
#include "uket/llm_gateway.hpp"
#include "uket/prompting.hpp"

namespace uket {

struct ExtractionJob {
  std::string template_id = std::string(kFinalTemplateId);
  std::string version = std::string(kFinalTemplateVersion);
  ModelConfig model;
  Mode mode = Mode::kReplayStrict;
  std::filesystem::path records_dir;
  std::filesystem::path responses_dir;  // raw responses are kept when non-empty
  int workers = 1;
};

struct CaseFailure {
  std::string case_id;
  std::string error;
};

struct ExtractionSummary {
  int succeeded = 0;
  std::vector<CaseFailure> failures;  // sorted by case_id
  int lint_warnings = 0;
  int lint_errors = 0;
};

// Request -> completion -> parse -> records/<id>.json for every case. Per-case
// failures are collected, not thrown. Output files depend only on the inputs.
ExtractionSummary run_extraction(std::span<const CaseDocument> cases, const PromptRegistry& registry,
                                 Gateway& gateway, const ExtractionJob& job);

// Parses responses/<file>.txt into records/<file>.json ('_' in the file stem maps back to '/').
ExtractionSummary parse_response_dir(const std::filesystem::path& responses_dir,
                                     const std::filesystem::path& records_dir);

std::string filename_to_case_id(std::string_view stem);

}  // namespace uket
