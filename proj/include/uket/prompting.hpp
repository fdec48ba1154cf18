#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uket/corpus.hpp"

namespace uket {

struct PromptTemplate {
  std::string template_id;
  std::string version;
  std::string text;  // system-message text

  bool operator==(const PromptTemplate&) const = default;
};

inline constexpr std::string_view kFinalTemplateId = "uket-final";
inline constexpr std::string_view kFinalTemplateVersion = "v1";

// The shipped final extraction prompt, character for character.
std::string_view final_prompt_text();

struct TemplateSummary {
  std::string template_id;
  std::string version;
  std::string summary;
};

// Versioned prompt registry. Reads are concurrent; registration is serialized.
class PromptRegistry {
 public:
  // Registry holding only the built-in `uket-final/v1`.
  static PromptRegistry with_builtin();

  // Loads prompts/<id>/<version>.txt on top of the built-in template. A file for
  // uket-final/v1 must match the built-in text byte for byte.
  static PromptRegistry from_directory(const std::filesystem::path& dir);

  PromptRegistry() = default;
  PromptRegistry(PromptRegistry&& other) noexcept;
  PromptRegistry& operator=(PromptRegistry&& other) noexcept;

  // Throws kRegistryLoad on a duplicate (id, version) or empty text.
  void register_template(PromptTemplate t);

  // JSON bundle: [{"template_id", "version", "text"}, ...]. Duplicates are a load error.
  void load_bundle(std::string_view json_text);

  // Throws kUnknownTemplate.
  PromptTemplate get(std::string_view template_id, std::string_view version) const;

  std::vector<TemplateSummary> list_templates() const;

  // Parses "id/version".
  static std::pair<std::string, std::string> split_ref(std::string_view ref);

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::pair<std::string, std::string>, PromptTemplate> templates_;
};

struct ModelConfig {
  std::string model_id = "gpt-4-32k";
  double temperature = 0.0;
  int max_output_tokens = 4096;
};

struct ChatRequest {
  std::string template_id;
  std::string version;
  std::string case_id;
  std::string system_text;
  std::string user_text;
  std::string model_id;
  double temperature = 0.0;
  int max_output_tokens = 0;

  // Replay key over (template_id, version, case_id, model_id, temperature).
  std::string digest() const;
};

std::string replay_key(std::string_view template_id, std::string_view version,
                       std::string_view case_id, std::string_view model_id, double temperature);

// Throws kUnknownTemplate, kInvalidDocument (empty body).
ChatRequest build_request(const PromptRegistry& registry, std::string_view template_id,
                          std::string_view version, const CaseDocument& doc,
                          const ModelConfig& model);

// Chat-completions wire body: system message then user message.
std::string chat_request_body(const ChatRequest& request);

}  // namespace uket
