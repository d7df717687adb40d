#include "perseval/llm/batch.h"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "perseval/common/error.h"

namespace perseval::llm {

std::vector<parser::PredictionRecord> run_batch(ChatClient& client,
                                                std::span<const promptgen::PromptInstance> prompts,
                                                const BatchOptions& options) {
  std::vector<parser::PredictionRecord> out(prompts.size());
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    out[i].text_id = prompts[i].text_id;
    out[i].annotator_id = prompts[i].annotator_id;
    out[i].scenario = std::string(scenario_key(prompts[i].scenario));
  }
  if (prompts.empty()) return out;

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mu;
  std::exception_ptr config_failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= prompts.size()) return;
      auto& rec = out[i];
      {
        std::lock_guard lock(failure_mu);
        if (config_failure) {
          rec.error = "aborted";
          continue;
        }
      }
      if (options.stop.stop_requested()) {
        rec.error = "cancelled";
        continue;
      }
      try {
        rec.raw_response = client.complete(client.make_request(prompts[i].prompt_text)).text;
      } catch (const ConfigError&) {
        std::lock_guard lock(failure_mu);
        if (!config_failure) config_failure = std::current_exception();
        rec.error = "aborted";
      } catch (const std::exception& e) {
        rec.error = e.what();
      }
      const auto n = ++done;
      if (options.progress) {
        std::lock_guard lock(progress_mu);
        options.progress(n, prompts.size());
      }
    }
  };

  const auto workers = std::min<std::size_t>(
      static_cast<std::size_t>(client.config().max_parallel), prompts.size());
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (config_failure) std::rethrow_exception(config_failure);
  return out;
}

}  // namespace perseval::llm
