#include "perseval/llm/response_cache.h"

#include <chrono>
#include <mutex>

#include "perseval/common/digest.h"
#include "perseval/common/error.h"
#include "perseval/common/jsonl.h"

namespace perseval::llm {

std::string CompletionRequest::cache_key() const {
  Json key = Json::array({model_name, prompt, temperature, max_tokens});
  return sha256_hex(key.dump());
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path ResponseCache::entry_path(const std::string& key) const {
  return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<CompletionResponse> ResponseCache::get(const std::string& key) const {
  std::shared_lock lock(mu_);
  const auto path = entry_path(key);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    const auto j = Json::parse(read_file(path));
    if (j.at("key").get<std::string>() != key) return std::nullopt;
    const auto& r = j.at("response");
    CompletionResponse out;
    out.text = r.at("text").get<std::string>();
    out.finish_reason = r.value("finish_reason", std::string());
    out.prompt_tokens = r.value("prompt_tokens", 0);
    out.completion_tokens = r.value("completion_tokens", 0);
    out.latency_ms = r.value("latency_ms", 0.0);
    out.from_cache = true;
    return out;
  } catch (const Json::exception&) {
    // A corrupt entry behaves like a miss and is overwritten on the next put.
    return std::nullopt;
  }
}

void ResponseCache::put(const std::string& key, const std::string& request_digest,
                        const CompletionResponse& response) {
  OrderedJson j;
  j["key"] = key;
  j["request_digest"] = request_digest;
  OrderedJson r;
  r["text"] = response.text;
  r["finish_reason"] = response.finish_reason;
  r["prompt_tokens"] = response.prompt_tokens;
  r["completion_tokens"] = response.completion_tokens;
  r["latency_ms"] = response.latency_ms;
  j["response"] = std::move(r);
  j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  std::unique_lock lock(mu_);
  write_file_atomic(entry_path(key), j.dump(2) + "\n");
}

}  // namespace perseval::llm
