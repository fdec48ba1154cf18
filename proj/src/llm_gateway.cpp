#include "uket/llm_gateway.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "uket/error.hpp"
#include "uket/text_util.hpp"

namespace uket {

using nlohmann::json;

HttpResponse HttpTransport::post(const std::string& url, const HttpHeaders& headers,
                                 const std::string& body) {
  // Split "scheme://host[:port]/path".
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::kHttp, "bad endpoint url " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  auto res = client.Post(path, h, body, "application/json");
  if (!res) return {0, httplib::to_string(res.error())};
  return {res->status, res->body};
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kLive: return "live";
    case Mode::kReplayStrict: return "replay-strict";
    case Mode::kRecord: return "record";
  }
  return "";
}

Mode parse_mode(std::string_view name) {
  if (name == "live") return Mode::kLive;
  if (name == "replay-strict") return Mode::kReplayStrict;
  if (name == "record") return Mode::kRecord;
  throw Error(ErrorCode::kFormat, "unknown mode " + std::string(name));
}

LlmConfig llm_config_from_json(std::string_view text) {
  LlmConfig c;
  try {
    const auto j = json::parse(text);
    auto& g = c.gateway;
    g.endpoint_url = j.value("endpoint_url", g.endpoint_url);
    g.retry.max_attempts = j.value("max_attempts", g.retry.max_attempts);
    g.retry.initial_backoff = std::chrono::milliseconds(
        j.value("initial_backoff_ms", static_cast<std::int64_t>(g.retry.initial_backoff.count())));
    g.retry.backoff_factor = j.value("backoff_factor", g.retry.backoff_factor);
    g.max_in_flight = j.value("max_in_flight", g.max_in_flight);
    if (j.contains("rate_card")) {
      g.rates.prompt_per_1k = j["rate_card"].value("prompt_per_1k", 0.0);
      g.rates.completion_per_1k = j["rate_card"].value("completion_per_1k", 0.0);
    }
    if (j.contains("spend_cap") && !j["spend_cap"].is_null()) g.spend_cap = j["spend_cap"].get<double>();
    c.model.model_id = j.value("model_id", c.model.model_id);
    c.model.temperature = j.value("temperature", c.model.temperature);
    c.model.max_output_tokens = j.value("max_output_tokens", c.model.max_output_tokens);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("llm config: ") + e.what());
  }
  if (c.gateway.retry.max_attempts < 1 || c.gateway.max_in_flight < 1 || c.model.temperature < 0)
    throw Error(ErrorCode::kFormat, "llm config: attempts, in-flight and temperature out of range");
  if (const char* key = std::getenv(kApiKeyEnv)) c.gateway.api_key = key;
  return c;
}

LlmConfig load_llm_config(const std::filesystem::path& path) {
  return llm_config_from_json(read_file(path));
}

ReplayCache::ReplayCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<CompletionResult> ReplayCache::get(const std::string& key) const {
  std::shared_lock lock(mutex_);
  const auto text_path = dir_ / (key + ".txt");
  if (!std::filesystem::exists(text_path)) return std::nullopt;
  CompletionResult r;
  r.raw_text = read_file(text_path);
  r.backend_tag = "replay";
  const auto meta_path = dir_ / (key + ".json");
  if (std::filesystem::exists(meta_path)) {
    try {
      const auto meta = nlohmann::json::parse(read_file(meta_path));
      r.usage.prompt_tokens = meta.value("prompt_tokens", std::int64_t{0});
      r.usage.completion_tokens = meta.value("completion_tokens", std::int64_t{0});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormat, meta_path.string() + ": " + e.what());
    }
  }
  return r;
}

void ReplayCache::put(const std::string& key, const ChatRequest& request,
                      const CompletionResult& result) {
  std::unique_lock lock(mutex_);
  std::filesystem::create_directories(dir_);
  nlohmann::ordered_json meta;
  meta["replay_key"] = key;
  meta["template_id"] = request.template_id;
  meta["version"] = request.version;
  meta["case_id"] = request.case_id;
  meta["model_id"] = request.model_id;
  meta["temperature"] = request.temperature;
  meta["prompt_tokens"] = result.usage.prompt_tokens;
  meta["completion_tokens"] = result.usage.completion_tokens;
  write_file_atomic(dir_ / (key + ".txt"), result.raw_text);
  write_file_atomic(dir_ / (key + ".json"), meta.dump(2) + "\n");
}

CompletionResult parse_completion_body(std::string_view body) {
  CompletionResult r;
  try {
    const auto j = json::parse(body);
    r.raw_text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    if (j.contains("usage")) {
      r.usage.prompt_tokens = j["usage"].value("prompt_tokens", std::int64_t{0});
      r.usage.completion_tokens = j["usage"].value("completion_tokens", std::int64_t{0});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kHttp, std::string("malformed completion body: ") + e.what());
  }
  if (r.raw_text.empty()) throw Error(ErrorCode::kHttp, "empty completion text");
  return r;
}

Gateway::Gateway(GatewayConfig config, std::shared_ptr<Transport> transport,
                 std::shared_ptr<ReplayCache> cache, Sleeper sleeper)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      cache_(std::move(cache)),
      sleeper_(std::move(sleeper)),
      in_flight_(std::clamp(config_.max_in_flight, 1, 1024)) {
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

CompletionResult Gateway::complete(const ChatRequest& request, Mode mode) {
  const std::string key = request.digest();
  if (mode == Mode::kReplayStrict) {
    if (!cache_) throw Error(ErrorCode::kCacheMiss, "no replay cache configured; key " + key);
    auto hit = cache_->get(key);
    if (!hit) throw Error(ErrorCode::kCacheMiss, "replay cache miss for key " + key);
    std::lock_guard lock(spend_mutex_);
    ++spend_.replay_hits;
    return *hit;
  }
  if (mode == Mode::kRecord && !cache_)
    throw Error(ErrorCode::kCacheMiss, "record mode needs a replay cache");
  CompletionResult result = complete_live(request);
  if (mode == Mode::kRecord) cache_->put(key, request, result);
  return result;
}

namespace {

bool is_transient(int status) { return status == 0 || status == 408 || status == 429 || status >= 500; }

}  // namespace

CompletionResult Gateway::complete_live(const ChatRequest& request) {
  if (config_.api_key.empty())
    throw Error(ErrorCode::kAuthentication, std::string(kApiKeyEnv) + " is not set");
  if (!transport_) throw Error(ErrorCode::kHttp, "no transport configured for live requests");
  {
    std::lock_guard lock(spend_mutex_);
    if (config_.spend_cap && spend_.estimated_cost >= *config_.spend_cap)
      throw Error(ErrorCode::kOverBudget, "spend cap reached");
  }

  const std::string body = chat_request_body(request);
  const HttpHeaders headers = {{"Authorization", "Bearer " + config_.api_key}};
  auto backoff = config_.retry.initial_backoff;
  std::string last_failure;
  for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
    const auto start = std::chrono::steady_clock::now();
    HttpResponse res;
    {
      in_flight_.acquire();
      struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
      } release{in_flight_};
      res = transport_->post(config_.endpoint_url, headers, body);
    }
    const auto elapsed = std::chrono::steady_clock::now() - start;

    if (res.status == 200) {
      CompletionResult r = parse_completion_body(res.body);
      r.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
      r.backend_tag = "live";
      std::lock_guard lock(spend_mutex_);
      ++spend_.live_requests;
      spend_.prompt_tokens += r.usage.prompt_tokens;
      spend_.completion_tokens += r.usage.completion_tokens;
      spend_.estimated_cost += r.usage.prompt_tokens * config_.rates.prompt_per_1k / 1000.0 +
                               r.usage.completion_tokens * config_.rates.completion_per_1k / 1000.0;
      return r;
    }
    if (res.status == 401 || res.status == 403)
      throw Error(ErrorCode::kAuthentication, "endpoint rejected credentials (HTTP " +
                                                  std::to_string(res.status) + ")");
    if (!is_transient(res.status))
      throw Error(ErrorCode::kHttp, "HTTP " + std::to_string(res.status) + ": " + res.body);

    last_failure = res.status == 0 ? "no response (" + res.body + ")" : "HTTP " + std::to_string(res.status);
    if (attempt < config_.retry.max_attempts) {
      sleeper_(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<std::int64_t>(backoff.count() * config_.retry.backoff_factor));
    }
  }
  throw Error(ErrorCode::kExhaustedRetries,
              "gave up after " + std::to_string(config_.retry.max_attempts) +
                  " attempts; last failure: " + last_failure);
}

SpendReport Gateway::spend_report() const {
  std::lock_guard lock(spend_mutex_);
  return spend_;
}

}  // namespace uket
