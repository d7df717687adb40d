#pragma once

#include <functional>
#include <span>
#include <stop_token>
#include <vector>

#include "perseval/llm/chat_client.h"
#include "perseval/parser/prediction.h"
#include "perseval/promptgen/prompt.h"

namespace perseval::llm {

struct BatchOptions {
  // Requesting a stop lets in-flight calls finish; untouched items are
  // returned with error "cancelled".
  std::stop_token stop;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

// Runs the prompts with at most config().max_parallel concurrent calls.
// output[i] always corresponds to prompts[i]. Per-item failures are recorded in
// the record's error field; only ConfigError aborts the batch. Every success
// is cached as it arrives, so a rerun after an interruption only queries the
// missing items.
std::vector<parser::PredictionRecord> run_batch(ChatClient& client,
                                                std::span<const promptgen::PromptInstance> prompts,
                                                const BatchOptions& options = {});

}  // namespace perseval::llm
