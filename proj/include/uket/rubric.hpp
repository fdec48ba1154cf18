#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "uket/aspect.hpp"

namespace uket {

// Annotator-facing guidance for the two-part check. Documentation only; nothing
// here is evaluated automatically.
struct RubricEntry {
  std::string_view topic;
  std::string_view guidance;
};

std::string_view rubric_for_aspect(Aspect a);
const std::vector<RubricEntry>& rubric_part2();
const std::vector<RubricEntry>& rubric_conventions();

// Whole rubric as a JSON document (served at /api/rubric).
std::string rubric_json();

}  // namespace uket
