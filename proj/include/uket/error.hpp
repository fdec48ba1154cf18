#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uket {

enum class ErrorCode {
  kInvalidDocument,
  kCorpusIntegrity,
  kInvalidPlan,
  kUnknownTemplate,
  kRegistryLoad,
  kCacheMiss,
  kExhaustedRetries,
  kAuthentication,
  kOverBudget,
  kHttp,
  kMissingSection,
  kAmbiguousSection,
  kUnparseableLabel,
  kInvalidAnnotation,
  kWriteConflict,
  kDanglingReference,
  kEmptyInput,
  kEmptyExport,
  kIo,
  kFormat,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace uket
