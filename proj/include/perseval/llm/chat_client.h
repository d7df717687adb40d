#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include "perseval/llm/endpoint_config.h"
#include "perseval/llm/response_cache.h"

namespace perseval::llm {

// Client for an OpenAI-compatible POST /v1/chat/completions endpoint. The
// prompt is sent as a single user message. Transient failures (connection
// errors, timeouts, 408, 429, 5xx) are retried with capped exponential backoff
// and jitter; a Retry-After header raises the wait. Safe to call from several
// threads at once.
class ChatClient {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  // `cache` may be null. The key is kept only in memory.
  ChatClient(EndpointConfig config, Secret api_key, std::shared_ptr<ResponseCache> cache);

  // Served from the cache when possible; otherwise queried and stored.
  // Throws EndpointError for a non-transient failure and RetryExhaustedError
  // once all attempts are used up.
  CompletionResponse complete(const CompletionRequest& request);

  CompletionRequest make_request(std::string prompt) const;

  const EndpointConfig& config() const { return config_; }
  std::size_t upstream_requests() const { return upstream_requests_.load(); }

  void set_sleeper(Sleeper s) { sleeper_ = std::move(s); }

 private:
  struct Attempt;
  Attempt attempt_once(const std::string& body) const;

  EndpointConfig config_;
  Secret api_key_;
  std::shared_ptr<ResponseCache> cache_;
  Sleeper sleeper_;
  std::string scheme_host_port_;
  std::string path_;
  mutable std::atomic<std::size_t> upstream_requests_{0};
};

}  // namespace perseval::llm
