#include "uket/rubric.hpp"

#include <json.hpp>

namespace uket {

std::string_view rubric_for_aspect(Aspect a) {
  switch (a) {
    case Aspect::kFacts:
      return "Score 1 when the facts are correct and cover the workplace events the judge relied on. "
             "Substantive and procedural facts are both acceptable, as are correct accessory details "
             "(parties, venue). Score 0 for an error or when the decisive substantive facts are left out. "
             "If the judgment itself states no facts, an explicit statement that none are given scores 1; "
             "for a procedural decision, omitting procedural events is acceptable.";
    case Aspect::kClaims:
      return "Score 1 when the claim is identified correctly. If the case file contains no claim details, "
             "the output must say so explicitly (e.g. that the document does not provide details of the "
             "claims) to score 1. If the judge describes the claim, an output that only alludes to a claim "
             "without detailing it, or says the details are not in the file, scores 0.";
    case Aspect::kStatuteRefs:
      return "Score 1 only if every statute, regulation and procedural rule cited in the file is listed. "
             "Any omission or imprecision scores 0.";
    case Aspect::kPrecedentRefs:
      return "Score 1 only if every cited decision is listed. Any omission or imprecision scores 0.";
    case Aspect::kGeneralOutcome:
      return "Score 1 when the outcome is accurate and complete; with several claims, each claim's "
             "outcome must be given.";
    case Aspect::kOutcomeLabel:
      return "Score 1 when the label matches the accepted conventions below and is applied consistently "
             "across similar cases. 'other' is for results that cannot be determined or cannot be framed "
             "as winning or losing.";
    case Aspect::kOrderRemedies:
      return "Score 1 when the orders and remedies are accurate and complete and complement the general "
             "outcome (e.g. a declaration with no further order, or a sum the respondent must pay).";
    case Aspect::kReasons:
      return "Score 1 when the facts that decided the outcome are identified. For a substantive decision the "
             "decisive legal arguments must also appear; for a procedural decision the procedural grounds "
             "must appear.";
  }
  return "";
}

const std::vector<RubricEntry>& rubric_part2() {
  static const std::vector<RubricEntry> kEntries = {
      {"suitable",
       "Mark 1 when facts, claims and the outcome label are all present and informative. Mark 0 when any is "
       "missing, only states that the file gives no information, or holds accessory details only. A section "
       "can score 1 for accuracy in part one and still make the case unsuitable here."},
      {"procedural",
       "Only answered when suitable = 1. Mark 1 when the facts consist of, or are dominated by, procedural "
       "events (withdrawal, non-compliance with an order, a decision turning on a procedural point). Mark 0 "
       "when the facts are mainly workplace events. Suitable + procedural cases serve procedural "
       "prediction only; suitable + not procedural cases serve substantive prediction."},
  };
  return kEntries;
}

const std::vector<RubricEntry>& rubric_conventions() {
  static const std::vector<RubricEntry> kEntries = {
      {"withdrawal", "A withdrawn claim is labelled 'claimant loses'. Labelling it 'other' is a mistake."},
      {"counterclaim",
       "The claimant is always the original claimant. Claim and counterclaim both upheld: 'claimant partly "
       "wins'. Respondent succeeds on its own counterclaim: 'claimant loses'."},
      {"contributory fault", "Success reduced for contributory fault is labelled 'claimant partly wins'."},
      {"partial amounts",
       "If the file does not state the amount originally claimed, an award of less than that amount may "
       "still be 'claimant wins'. Several claims with some won and some lost: 'claimant partly wins'."},
      {"claim proceeds to hearing",
       "When the tribunal lets a claim proceed to a final hearing instead of deciding it, 'other' is the "
       "accepted label; apply it consistently."},
      {"absent information",
       "An explicit statement that the file does not provide a section's information is accurate when the "
       "file really lacks it. An output that merely mentions a claim (for example that a claim was made and "
       "later withdrawn) without stating that details are absent is not such a statement, and scores 0 "
       "when the file gives no claim details."},
  };
  return kEntries;
}

std::string rubric_json() {
  nlohmann::ordered_json j;
  nlohmann::ordered_json part1;
  for (Aspect a : kAllAspects)
    part1[std::string(aspect_key(a))] = {{"title", aspect_title(a)}, {"guidance", rubric_for_aspect(a)}};
  j["part1"] = part1;
  auto list = [](const std::vector<RubricEntry>& entries) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : entries) arr.push_back({{"topic", e.topic}, {"guidance", e.guidance}});
    return arr;
  };
  j["part2"] = list(rubric_part2());
  j["conventions"] = list(rubric_conventions());
  return j.dump(2) + "\n";
}

}  // namespace uket
