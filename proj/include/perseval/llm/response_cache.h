#pragma once

#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>

namespace perseval::llm {

struct CompletionRequest {
  std::string prompt;
  std::string model_name;
  double temperature = 0.0;
  int max_tokens = 256;

  // sha256 over (model_name, prompt, temperature, max_tokens).
  std::string cache_key() const;
};

struct CompletionResponse {
  std::string text;
  std::string finish_reason;
  int prompt_tokens = 0;
  int completion_tokens = 0;
  double latency_ms = 0.0;
  bool from_cache = false;
};

// Content-addressed on-disk cache: <dir>/<key[0:2]>/<key>.json holding
// {key, request_digest, response, timestamp}. Readers run concurrently,
// writers are serialized; files appear atomically.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<CompletionResponse> get(const std::string& key) const;
  void put(const std::string& key, const std::string& request_digest,
           const CompletionResponse& response);

  std::filesystem::path entry_path(const std::string& key) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::shared_mutex mu_;
};

}  // namespace perseval::llm
