#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "perseval/common/jsonl.h"

namespace perseval::cli {

struct StageRecord {
  std::string stage;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  OrderedJson seeds = OrderedJson::object();
  OrderedJson params = OrderedJson::object();
};

// Adds or replaces the stage entry in <dir>/manifest.json. File digests are
// keyed by their path relative to `root` (when inside it).
void record_stage(const std::filesystem::path& dir, const std::filesystem::path& root,
                  const StageRecord& record);

std::string utc_timestamp();

}  // namespace perseval::cli
