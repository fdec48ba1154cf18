#include "uket/prompting.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>

#include <json.hpp>

#include "uket/digest.hpp"
#include "uket/error.hpp"
#include "uket/text_util.hpp"

namespace uket {

std::string_view final_prompt_text() {
  static constexpr std::string_view kText =
    "You are a legal assistant. Your task is to read through the court decisions that I "
    "will send you, and extract the following information for each input: 1. facts of the "
    "case of the specific court decision; 2. claims made in the specific court decision "
    "and considered in the specific court decision. Do not include any claim which has "
    "already been decided in any previous decision; 3. any references to legal statutes, "
    "acts, regulations, provisions and rules, including the specific number(s), "
    "section(s) and article(s) of each of them, and including procedural tribunal rules; "
    "4. references to precedents and other court decisions; 5. general case outcome; 6. "
    "general case outcome summarised using one of the following four labels - “claimant "
    "wins”, “claimant loses”, “claimant partly wins” and “other”. Note that the label "
    "“other” is to be reserved for situations in which the result cannot be determined or "
    "where the outcome cannot be described in terms of winning or losing (e.g., an "
    "evidence collection); 7. detailed order and remedies; 8. essential reasons for the "
    "decision (procedural and substantive). If there are multiple claimants or "
    "respondents, extract the case outcome for each and all of the claimants or "
    "respondents separately.";
  return kText;
}

PromptRegistry PromptRegistry::with_builtin() {
  PromptRegistry r;
  r.register_template({std::string(kFinalTemplateId), std::string(kFinalTemplateVersion),
                       std::string(final_prompt_text())});
  return r;
}

PromptRegistry::PromptRegistry(PromptRegistry&& other) noexcept {
  std::unique_lock lock(other.mutex_);
  templates_ = std::move(other.templates_);
}

PromptRegistry& PromptRegistry::operator=(PromptRegistry&& other) noexcept {
  if (this != &other) {
    std::scoped_lock lock(mutex_, other.mutex_);
    templates_ = std::move(other.templates_);
  }
  return *this;
}

PromptRegistry PromptRegistry::from_directory(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  PromptRegistry r = with_builtin();
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kRegistryLoad, "not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    const auto rel = fs::relative(file, dir);
    if (std::distance(rel.begin(), rel.end()) != 2)
      throw Error(ErrorCode::kRegistryLoad, "expected <id>/<version>.txt, got " + rel.string());
    PromptTemplate t{rel.begin()->string(), file.stem().string(), read_file(file)};
    if (!t.text.empty() && t.text.back() == '\n') t.text.pop_back();
    if (t.template_id == kFinalTemplateId && t.version == kFinalTemplateVersion) {
      if (t.text != final_prompt_text())
        throw Error(ErrorCode::kRegistryLoad, file.string() + " differs from the built-in uket-final/v1");
      continue;
    }
    r.register_template(std::move(t));
  }
  return r;
}

void PromptRegistry::register_template(PromptTemplate t) {
  if (t.template_id.empty() || t.version.empty())
    throw Error(ErrorCode::kRegistryLoad, "template id and version must be non-empty");
  if (t.text.empty())
    throw Error(ErrorCode::kRegistryLoad, "empty text for " + t.template_id + "/" + t.version);
  std::unique_lock lock(mutex_);
  auto key = std::make_pair(t.template_id, t.version);
  if (templates_.contains(key))
    throw Error(ErrorCode::kRegistryLoad, "duplicate template " + key.first + "/" + key.second);
  templates_.emplace(std::move(key), std::move(t));
}

void PromptRegistry::load_bundle(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kRegistryLoad, std::string("bundle: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::kRegistryLoad, "bundle must be a JSON array");
  std::vector<PromptTemplate> incoming;
  for (const auto& e : j) {
    PromptTemplate t{e.value("template_id", ""), e.value("version", ""), e.value("text", "")};
    for (const auto& prior : incoming)
      if (prior.template_id == t.template_id && prior.version == t.version)
        throw Error(ErrorCode::kRegistryLoad,
                    "duplicate template " + t.template_id + "/" + t.version + " in bundle");
    incoming.push_back(std::move(t));
  }
  for (auto& t : incoming) register_template(std::move(t));
}

PromptTemplate PromptRegistry::get(std::string_view template_id, std::string_view version) const {
  std::shared_lock lock(mutex_);
  auto it = templates_.find({std::string(template_id), std::string(version)});
  if (it == templates_.end())
    throw Error(ErrorCode::kUnknownTemplate,
                "unknown template " + std::string(template_id) + "/" + std::string(version));
  return it->second;
}

std::vector<TemplateSummary> PromptRegistry::list_templates() const {
  std::shared_lock lock(mutex_);
  std::vector<TemplateSummary> out;
  for (const auto& [key, t] : templates_) {
    std::string summary(t.text.substr(0, t.text.find('\n')));
    if (utf8_length(summary) > 60) {
      std::size_t cut = 57;
      while (cut > 0 && (static_cast<unsigned char>(summary[cut]) & 0xC0) == 0x80) --cut;
      summary = summary.substr(0, cut) + "...";
    }
    out.push_back({t.template_id, t.version, std::move(summary)});
  }
  return out;
}

std::pair<std::string, std::string> PromptRegistry::split_ref(std::string_view ref) {
  const auto slash = ref.rfind('/');
  if (slash == std::string_view::npos || slash == 0 || slash + 1 == ref.size())
    throw Error(ErrorCode::kUnknownTemplate, "expected <id>/<version>, got " + std::string(ref));
  return {std::string(ref.substr(0, slash)), std::string(ref.substr(slash + 1))};
}

std::string replay_key(std::string_view template_id, std::string_view version,
                       std::string_view case_id, std::string_view model_id, double temperature) {
  char temp[64];
  std::snprintf(temp, sizeof temp, "%.17g", temperature);
  std::string canonical = "uket-replay-key/1\n";
  canonical += "template_id=" + std::string(template_id) + "\n";
  canonical += "version=" + std::string(version) + "\n";
  canonical += "case_id=" + std::string(case_id) + "\n";
  canonical += "model_id=" + std::string(model_id) + "\n";
  canonical += "temperature=" + std::string(temp) + "\n";
  return sha256_hex(canonical);
}

std::string ChatRequest::digest() const {
  return replay_key(template_id, version, case_id, model_id, temperature);
}

ChatRequest build_request(const PromptRegistry& registry, std::string_view template_id,
                          std::string_view version, const CaseDocument& doc,
                          const ModelConfig& model) {
  const PromptTemplate t = registry.get(template_id, version);
  if (doc.body_text.empty()) throw Error(ErrorCode::kInvalidDocument, "empty body text for " + doc.case_id);
  if (doc.case_id.empty()) throw Error(ErrorCode::kInvalidDocument, "empty case_id");
  if (!(model.temperature >= 0.0)) throw Error(ErrorCode::kFormat, "temperature must be >= 0");
  ChatRequest r;
  r.template_id = t.template_id;
  r.version = t.version;
  r.case_id = doc.case_id;
  r.system_text = t.text;
  r.user_text = doc.body_text;
  r.model_id = model.model_id;
  r.temperature = model.temperature;
  r.max_output_tokens = model.max_output_tokens;
  return r;
}

std::string chat_request_body(const ChatRequest& request) {
  nlohmann::ordered_json j;
  j["model"] = request.model_id;
  j["messages"] = nlohmann::ordered_json::array(
      {{{"role", "system"}, {"content", request.system_text}},
       {{"role", "user"}, {"content", request.user_text}}});
  j["temperature"] = request.temperature;
  j["max_tokens"] = request.max_output_tokens;
  return j.dump();
}

}  // namespace uket
