#include "uket/aspect.hpp"

#include "uket/error.hpp"

namespace uket {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidDocument: return "invalid-document";
    case ErrorCode::kCorpusIntegrity: return "corpus-integrity";
    case ErrorCode::kInvalidPlan: return "invalid-plan";
    case ErrorCode::kUnknownTemplate: return "unknown-template";
    case ErrorCode::kRegistryLoad: return "registry-load";
    case ErrorCode::kCacheMiss: return "cache-miss";
    case ErrorCode::kExhaustedRetries: return "exhausted-retries";
    case ErrorCode::kAuthentication: return "authentication";
    case ErrorCode::kOverBudget: return "over-budget";
    case ErrorCode::kHttp: return "http";
    case ErrorCode::kMissingSection: return "missing-section";
    case ErrorCode::kAmbiguousSection: return "ambiguous-section";
    case ErrorCode::kUnparseableLabel: return "unparseable-label";
    case ErrorCode::kInvalidAnnotation: return "invalid-annotation";
    case ErrorCode::kWriteConflict: return "write-conflict";
    case ErrorCode::kDanglingReference: return "dangling-reference";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kEmptyExport: return "empty-export";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kFormat: return "format";
  }
  return "unknown";
}

std::string_view aspect_key(Aspect a) {
  switch (a) {
    case Aspect::kFacts: return "facts";
    case Aspect::kClaims: return "claims";
    case Aspect::kStatuteRefs: return "statute_refs";
    case Aspect::kPrecedentRefs: return "precedent_refs";
    case Aspect::kGeneralOutcome: return "general_outcome";
    case Aspect::kOutcomeLabel: return "outcome_label";
    case Aspect::kOrderRemedies: return "order_remedies";
    case Aspect::kReasons: return "reasons";
  }
  return "";
}

std::optional<Aspect> aspect_from_key(std::string_view key) {
  for (Aspect a : kAllAspects)
    if (aspect_key(a) == key) return a;
  return std::nullopt;
}

std::string_view aspect_title(Aspect a) {
  switch (a) {
    case Aspect::kFacts: return "facts of the case";
    case Aspect::kClaims: return "claims made";
    case Aspect::kStatuteRefs: return "references to legal statutes";
    case Aspect::kPrecedentRefs: return "references to precedents";
    case Aspect::kGeneralOutcome: return "general case outcome";
    case Aspect::kOutcomeLabel: return "general case outcome summarised";
    case Aspect::kOrderRemedies: return "detailed order and remedies";
    case Aspect::kReasons: return "essential reasons for the decision";
  }
  return "";
}

std::string_view aspect_table_label(Aspect a) {
  switch (a) {
    case Aspect::kFacts: return "(1) facts";
    case Aspect::kClaims: return "(2) claims";
    case Aspect::kStatuteRefs: return "(3) references to legal statutes";
    case Aspect::kPrecedentRefs: return "(4) references to precedents";
    case Aspect::kGeneralOutcome: return "(5) general outcomes";
    case Aspect::kOutcomeLabel: return "(6) general outcomes in one of four labels";
    case Aspect::kOrderRemedies: return "(7) detailed outcomes";
    case Aspect::kReasons: return "(8) reasons";
  }
  return "";
}

}  // namespace uket
