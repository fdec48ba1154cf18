#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace uket {

// The eight extracted aspects, in the order the prompt numbers them.
enum class Aspect {
  kFacts,
  kClaims,
  kStatuteRefs,
  kPrecedentRefs,
  kGeneralOutcome,
  kOutcomeLabel,
  kOrderRemedies,
  kReasons,
};

inline constexpr std::array<Aspect, 8> kAllAspects = {
    Aspect::kFacts,          Aspect::kClaims,       Aspect::kStatuteRefs,
    Aspect::kPrecedentRefs,  Aspect::kGeneralOutcome, Aspect::kOutcomeLabel,
    Aspect::kOrderRemedies,  Aspect::kReasons,
};

inline constexpr std::size_t aspect_index(Aspect a) { return static_cast<std::size_t>(a); }

// 1-based position in the prompt's numbered list.
inline constexpr int aspect_number(Aspect a) { return static_cast<int>(a) + 1; }

// Stable machine key ("facts", "statute_refs", ...) used in JSON documents.
std::string_view aspect_key(Aspect a);
std::optional<Aspect> aspect_from_key(std::string_view key);

// Human-readable heading, e.g. "references to legal statutes".
std::string_view aspect_title(Aspect a);

// Row label as printed in the accuracy table, e.g. "(6) general outcomes in one of four labels".
std::string_view aspect_table_label(Aspect a);

// Fixed-size map from aspect to value.
template <typename T>
using PerAspect = std::array<T, kAllAspects.size()>;

}  // namespace uket
