#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "perseval/baseline/trainer.h"
#include "perseval/common/jsonl.h"
#include "perseval/common/scenario.h"
#include "perseval/corpus/annotation.h"
#include "perseval/llm/endpoint_config.h"

namespace perseval::cli {

struct DatasetEntry {
  std::string name;
  std::filesystem::path schema;
  std::filesystem::path input;
  // "jsonl" (normalized) or "csv" (raw export through the schema's columns).
  std::string format = "jsonl";
};

struct BaselineSettings {
  baseline::Hyper hyper;
  baseline::FeatureConfig features;
};

struct RunConfig {
  std::filesystem::path output_dir = "runs";
  std::filesystem::path templates_dir = "templates";
  std::uint64_t seed = 0;
  // Name under which scores are reported; defaults to the endpoint model.
  std::string model_name;
  std::vector<ScenarioId> scenarios{kAllScenarios.begin(), kAllScenarios.end()};
  std::vector<DatasetEntry> datasets;
  double outlier_threshold = 0.05;
  corpus::SplitRatios ratios;
  std::optional<llm::EndpointConfig> endpoint;
  BaselineSettings baseline;

  // Paths in the file are resolved against its directory.
  static RunConfig load(const std::filesystem::path& path);
  static RunConfig from_toml_text(std::string_view text, const std::filesystem::path& base_dir);

  const DatasetEntry& dataset(const std::string& name) const;
  // Checks that referenced files exist and settings are in range.
  void validate() const;
};

Json toml_to_json(std::string_view text);

}  // namespace perseval::cli
