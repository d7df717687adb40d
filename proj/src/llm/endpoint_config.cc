#include "perseval/llm/endpoint_config.h"

#include <set>

#include <cstdlib>

#include "perseval/common/error.h"

namespace perseval::llm {

void EndpointConfig::validate() const {
  if (base_url.empty()) throw ConfigError("endpoint base_url is empty");
  if (!base_url.starts_with("http://") && !base_url.starts_with("https://")) {
    throw ConfigError("endpoint base_url must start with http:// or https://");
  }
  if (model_name.empty()) throw ConfigError("endpoint model name is empty");
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  if (max_tokens < 1) throw ConfigError("max_tokens must be >= 1");
  if (max_parallel < 1) throw ConfigError("max_parallel must be >= 1");
  if (retry.max_attempts < 1) throw ConfigError("retry max_attempts must be >= 1");
  if (timeout.count() <= 0) throw ConfigError("timeout must be positive");
}

Secret load_api_key(const EndpointConfig& config) {
  if (config.api_key_env.empty()) return {};
  const char* v = std::getenv(config.api_key_env.c_str());
  return v ? Secret(v) : Secret();
}

EndpointConfig endpoint_config_from_json(const Json& j) {
  EndpointConfig c;
  try {
    c.base_url = j.at("base_url").get<std::string>();
    c.model_name = j.at("model").get<std::string>();
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.temperature = j.value("temperature", c.temperature);
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.timeout = std::chrono::milliseconds(
        static_cast<long long>(j.value("timeout_s", 60.0) * 1000.0));
    c.max_parallel = j.value("max_parallel", c.max_parallel);
    c.retry.max_attempts = j.value("max_attempts", c.retry.max_attempts);
    c.retry.base_backoff = std::chrono::milliseconds(j.value("base_backoff_ms", 500));
    c.retry.max_backoff = std::chrono::milliseconds(j.value("max_backoff_ms", 30'000));
    c.cache_dir = j.value("cache_dir", std::string());
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("invalid endpoint config: ") + e.what());
  }
  if (j.contains("api_key")) {
    throw ConfigError("api keys are read from the environment only; remove 'api_key' from the config");
  }
  static const std::set<std::string> known{"base_url",    "model",        "api_key_env",     "temperature",
                                           "max_tokens",  "timeout_s",    "max_parallel",    "max_attempts",
                                           "base_backoff_ms", "max_backoff_ms", "cache_dir"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown endpoint key '" + key + "'");
  }
  c.validate();
  return c;
}

}  // namespace perseval::llm
