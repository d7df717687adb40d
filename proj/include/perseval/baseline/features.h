#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "perseval/corpus/annotation.h"

namespace perseval::baseline {

inline constexpr std::uint64_t kFeatureHashSeed = 0x70657273'6576616cULL;  // "perseval"

struct FeatureConfig {
  std::uint32_t hash_dim = 1U << 18;
  int ngram_max = 2;
  // The CLS / CLS-P switch: append a one-hot user block after the hashed block.
  bool with_user = false;
  std::size_t user_dim = 0;

  void validate() const;
  std::size_t total_dim() const { return hash_dim + (with_user ? user_dim : 0); }

  bool operator==(const FeatureConfig&) const = default;
};

struct SparseVector {
  std::vector<std::uint32_t> indices;  // strictly increasing
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }
  bool operator==(const SparseVector&) const = default;
};

struct Featurized {
  SparseVector vector;
  // with_user was set but the annotator has no index (all-zero user block).
  bool cold_start = false;
};

// Annotator id -> user index, assigned by first appearance in training order.
using UserIndex = std::map<std::string, std::size_t, std::less<>>;

UserIndex build_user_index(const corpus::AnnotationCorpus& train);

// Lowercased word tokens. ASCII letters, digits, '_' and '\'' are word
// characters; so is every byte >= 0x80, which keeps UTF-8 sequences whole.
std::vector<std::string> word_tokens(std::string_view text);

// Signed-hashed n-gram counts (MurmurHash64A, kFeatureHashSeed), L2-normalized;
// then the user one-hot at hash_dim + index when config.with_user.
Featurized featurize(std::string_view text, std::string_view annotator_id, const UserIndex& users,
                     const FeatureConfig& config);

}  // namespace perseval::baseline
