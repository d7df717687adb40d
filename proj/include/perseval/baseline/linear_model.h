#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "perseval/baseline/features.h"

namespace perseval::baseline {

// One-vs-rest logistic regression over the feature space of `config`.
struct LinearModel {
  static constexpr std::uint32_t kFormatVersion = 1;

  FeatureConfig config;
  std::string dataset;
  std::vector<std::string> labels;
  UserIndex users;
  // weights[label] has config.total_dim() entries.
  std::vector<std::vector<double>> weights;
  std::vector<double> bias;

  std::uint64_t seed = 0;
  std::vector<double> loss_curve;
  std::vector<double> validation_f1_curve;
  int best_epoch = 0;

  double margin(std::size_t label, const SparseVector& x) const;
  // sha256 over biases and weights (little-endian IEEE-754).
  std::string weight_digest() const;
};

// Layout: "PVLM" | u32 version | u64 header length | header JSON | per label
// total_dim little-endian f64 weights. Everything except the weights lives in
// the header.
void save_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_model(const std::filesystem::path& path);

}  // namespace perseval::baseline
