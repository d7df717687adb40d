#pragma once

#include <chrono>
#include <filesystem>
#include <string>

#include "perseval/common/jsonl.h"

namespace perseval::llm {

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds base_backoff{500};
  std::chrono::milliseconds max_backoff{30'000};
};

// Holds the API key. Deliberately not streamable or JSON-convertible.
class Secret {
 public:
  Secret() = default;
  explicit Secret(std::string value) : value_(std::move(value)) {}
  const std::string& reveal() const { return value_; }
  bool empty() const { return value_.empty(); }

 private:
  std::string value_;
};

struct EndpointConfig {
  // scheme://host[:port][/prefix]; "/v1/chat/completions" is appended unless
  // the prefix already ends in "/v1".
  std::string base_url;
  std::string model_name;
  // Name of the environment variable holding the key, never the key itself.
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 0.0;
  int max_tokens = 256;
  std::chrono::milliseconds timeout{60'000};
  int max_parallel = 4;
  RetryPolicy retry;
  std::filesystem::path cache_dir;

  // Throws ConfigError on temperature < 0, max_parallel < 1, etc.
  void validate() const;
};

// Reads the key named by api_key_env; an unset variable yields an empty secret
// (local servers usually need none).
Secret load_api_key(const EndpointConfig& config);

// Parses the [endpoint] table of a run config (already converted to JSON).
EndpointConfig endpoint_config_from_json(const Json& j);

}  // namespace perseval::llm
