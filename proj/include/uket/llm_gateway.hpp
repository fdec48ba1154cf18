#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uket/prompting.hpp"

namespace uket {

struct HttpResponse {
  int status = 0;  // 0: no response (connection failure, timeout)
  std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const std::string& url, const HttpHeaders& headers,
                            const std::string& body) = 0;
};

// cpp-httplib client; one connection per call.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::chrono::seconds timeout = std::chrono::seconds(600))
      : timeout_(timeout) {}
  HttpResponse post(const std::string& url, const HttpHeaders& headers,
                    const std::string& body) override;

 private:
  std::chrono::seconds timeout_;
};

enum class Mode { kLive, kReplayStrict, kRecord };

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view name);

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double backoff_factor = 2.0;
};

// Price per 1000 tokens.
struct RateCard {
  double prompt_per_1k = 0.0;
  double completion_per_1k = 0.0;
};

struct GatewayConfig {
  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  std::string api_key;
  RetryPolicy retry;
  RateCard rates;
  std::optional<double> spend_cap;
  int max_in_flight = 4;
};

struct LlmConfig {
  GatewayConfig gateway;
  ModelConfig model;
};

inline constexpr const char* kApiKeyEnv = "LLM_API_KEY";

// JSON config file; the API key always comes from LLM_API_KEY, never the file.
LlmConfig load_llm_config(const std::filesystem::path& path);
LlmConfig llm_config_from_json(std::string_view text);

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
};

struct CompletionResult {
  std::string raw_text;
  TokenUsage usage;
  std::int64_t latency_ms = 0;
  std::string backend_tag;  // "live" | "replay"
};

// Directory of <hex digest>.txt (raw response) plus <hex digest>.json (metadata).
class ReplayCache {
 public:
  explicit ReplayCache(std::filesystem::path dir);

  std::optional<CompletionResult> get(const std::string& key) const;
  void put(const std::string& key, const ChatRequest& request, const CompletionResult& result);
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
};

struct SpendReport {
  std::int64_t live_requests = 0;
  std::int64_t replay_hits = 0;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  double estimated_cost = 0.0;
};

class Gateway {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  // transport may be null when only replay-strict is used.
  Gateway(GatewayConfig config, std::shared_ptr<Transport> transport,
          std::shared_ptr<ReplayCache> cache, Sleeper sleeper = {});

  // Errors: kCacheMiss, kExhaustedRetries, kAuthentication, kOverBudget, kHttp.
  CompletionResult complete(const ChatRequest& request, Mode mode);

  SpendReport spend_report() const;

 private:
  CompletionResult complete_live(const ChatRequest& request);

  GatewayConfig config_;
  std::shared_ptr<Transport> transport_;
  std::shared_ptr<ReplayCache> cache_;
  Sleeper sleeper_;
  std::counting_semaphore<1024> in_flight_;
  mutable std::mutex spend_mutex_;
  SpendReport spend_;
};

// Parses a chat-completions response body into text and usage.
CompletionResult parse_completion_body(std::string_view body);

}  // namespace uket
