#include "perseval/llm/chat_client.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "perseval/common/digest.h"
#include "perseval/common/error.h"
#include "perseval/common/jsonl.h"
#include "perseval/common/rng.h"

namespace perseval::llm {

namespace {

constexpr std::size_t kBodyExcerpt = 512;

struct ProxySettings {
  std::string host;
  int port = 0;
  std::string user;
  std::string password;
};

std::string getenv_any(std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (const char* v = std::getenv(n); v && *v) return v;
  }
  return {};
}

bool host_bypasses_proxy(const std::string& host) {
  const std::string no_proxy = getenv_any({"NO_PROXY", "no_proxy"});
  std::size_t pos = 0;
  while (pos <= no_proxy.size()) {
    auto end = no_proxy.find(',', pos);
    if (end == std::string::npos) end = no_proxy.size();
    std::string entry = no_proxy.substr(pos, end - pos);
    entry.erase(0, entry.find_first_not_of(' '));
    entry.erase(entry.find_last_not_of(' ') + 1);
    if (!entry.empty()) {
      if (entry == "*") return true;
      if (entry.front() == '.') entry.erase(0, 1);
      if (host == entry ||
          (host.size() > entry.size() && host.ends_with(entry) &&
           host[host.size() - entry.size() - 1] == '.')) {
        return true;
      }
    }
    pos = end + 1;
  }
  return false;
}

std::optional<ProxySettings> proxy_for(bool https, const std::string& host) {
  std::string url = https ? getenv_any({"HTTPS_PROXY", "https_proxy"})
                          : getenv_any({"HTTP_PROXY", "http_proxy"});
  if (url.empty()) url = getenv_any({"ALL_PROXY", "all_proxy"});
  if (url.empty() || host_bypasses_proxy(host)) return std::nullopt;
  ProxySettings p;
  if (auto s = url.find("://"); s != std::string::npos) url = url.substr(s + 3);
  if (auto at = url.rfind('@'); at != std::string::npos) {
    const std::string cred = url.substr(0, at);
    url = url.substr(at + 1);
    const auto colon = cred.find(':');
    p.user = cred.substr(0, colon);
    if (colon != std::string::npos) p.password = cred.substr(colon + 1);
  }
  if (auto slash = url.find('/'); slash != std::string::npos) url.resize(slash);
  const auto colon = url.rfind(':');
  p.host = url.substr(0, colon);
  p.port = colon == std::string::npos ? 80 : std::atoi(url.c_str() + colon + 1);
  return p;
}

bool is_transient_status(int status) {
  return status == 408 || status == 429 || (status >= 500 && status <= 599);
}

std::string excerpt(const std::string& body) {
  return body.size() <= kBodyExcerpt ? body : body.substr(0, kBodyExcerpt) + "...";
}

}  // namespace

struct ChatClient::Attempt {
  bool transient = false;
  int status = 0;
  std::string message;
  std::optional<std::chrono::milliseconds> retry_after;
  std::optional<CompletionResponse> response;
};

ChatClient::ChatClient(EndpointConfig config, Secret api_key, std::shared_ptr<ResponseCache> cache)
    : config_(std::move(config)), api_key_(std::move(api_key)), cache_(std::move(cache)) {
  config_.validate();
  sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  const auto scheme_end = config_.base_url.find("://") + 3;
  const auto path_start = config_.base_url.find('/', scheme_end);
  scheme_host_port_ = config_.base_url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : config_.base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix.ends_with("/v1") ? prefix + "/chat/completions" : prefix + "/v1/chat/completions";
}

CompletionRequest ChatClient::make_request(std::string prompt) const {
  return {std::move(prompt), config_.model_name, config_.temperature, config_.max_tokens};
}

ChatClient::Attempt ChatClient::attempt_once(const std::string& body) const {
  httplib::Client client(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  const bool https = scheme_host_port_.starts_with("https://");
  const std::string host = scheme_host_port_.substr(scheme_host_port_.find("://") + 3);
  if (auto proxy = proxy_for(https, host.substr(0, host.rfind(':')))) {
    client.set_proxy(proxy->host, proxy->port);
    if (!proxy->user.empty()) client.set_proxy_basic_auth(proxy->user, proxy->password);
  }

  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_.reveal());

  ++upstream_requests_;
  const auto started = std::chrono::steady_clock::now();
  auto res = client.Post(path_, headers, body, "application/json");
  const double latency_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();

  Attempt a;
  if (!res) {
    a.transient = true;
    a.message = "transport error: " + httplib::to_string(res.error());
    return a;
  }
  a.status = res->status;
  if (res->status != 200) {
    a.transient = is_transient_status(res->status);
    a.message = "HTTP " + std::to_string(res->status) + ": " + excerpt(res->body);
    if (res->has_header("Retry-After")) {
      const double secs_after = std::atof(res->get_header_value("Retry-After").c_str());
      if (secs_after > 0) {
        a.retry_after = std::chrono::milliseconds(static_cast<long long>(secs_after * 1000));
      }
    }
    return a;
  }
  try {
    const auto j = Json::parse(res->body);
    const auto& choice = j.at("choices").at(0);
    CompletionResponse r;
    const auto& content = choice.at("message").at("content");
    r.text = content.is_null() ? std::string() : content.get<std::string>();
    if (auto it = choice.find("finish_reason"); it != choice.end() && it->is_string()) {
      r.finish_reason = it->get<std::string>();
    }
    if (auto it = j.find("usage"); it != j.end() && it->is_object()) {
      r.prompt_tokens = it->value("prompt_tokens", 0);
      r.completion_tokens = it->value("completion_tokens", 0);
    }
    r.latency_ms = latency_ms;
    a.response = std::move(r);
  } catch (const Json::exception& e) {
    a.message = std::string("malformed completion body: ") + e.what() + ": " + excerpt(res->body);
  }
  return a;
}

CompletionResponse ChatClient::complete(const CompletionRequest& request) {
  const std::string key = request.cache_key();
  if (cache_) {
    if (auto hit = cache_->get(key)) return *hit;
  }

  OrderedJson body;
  body["model"] = request.model_name;
  body["messages"] = OrderedJson::array({{{"role", "user"}, {"content", request.prompt}}});
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  const std::string body_text = body.dump();

  DeterministicRng jitter(derive_seed(0, key));
  const auto& retry = config_.retry;
  Attempt last;
  for (int attempt = 1; attempt <= retry.max_attempts; ++attempt) {
    last = attempt_once(body_text);
    if (last.response) {
      if (cache_) cache_->put(key, sha256_hex(body_text), *last.response);
      return *last.response;
    }
    if (!last.transient) throw EndpointError(last.status, "endpoint error: " + last.message);
    if (attempt == retry.max_attempts) break;

    const auto exp = std::min<long long>(retry.base_backoff.count() << std::min(attempt - 1, 20),
                                         retry.max_backoff.count());
    auto delay = std::chrono::milliseconds(
        static_cast<long long>(static_cast<double>(exp) * (0.5 + 0.5 * jitter.uniform01())));
    if (last.retry_after) delay = std::max(delay, std::min(*last.retry_after, retry.max_backoff));
    spdlog::warn("attempt {}/{} failed ({}); retrying in {} ms", attempt, retry.max_attempts,
                 last.message, delay.count());
    sleeper_(delay);
  }
  throw RetryExhaustedError(last.status, "all " + std::to_string(retry.max_attempts) +
                                             " attempts failed; last: " + last.message);
}

}  // namespace perseval::llm
