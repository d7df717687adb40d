#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "perseval/corpus/annotation.h"
#include "perseval/parser/prediction.h"

namespace perseval::metrics {

using corpus::LabelSchema;
using corpus::LabelSet;

struct LabelCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  bool operator==(const LabelCounts&) const = default;
};

// Per-label confusion counts. Forms a monoid under merge(), so shards of the
// evaluation can be counted independently and combined.
class ConfusionCounts {
 public:
  explicit ConfusionCounts(std::size_t num_labels = 0) : per_label_(num_labels) {}

  void add(const LabelSet& gold, const LabelSet& predicted);
  void merge(const ConfusionCounts& other);

  const std::vector<LabelCounts>& per_label() const { return per_label_; }
  std::size_t records() const { return records_; }

  bool operator==(const ConfusionCounts&) const = default;

 private:
  std::vector<LabelCounts> per_label_;
  std::size_t records_ = 0;
};

struct F1Scores {
  // Unweighted mean over all schema labels, 0/0 counted as 0.
  double macro = 0.0;
  // Mean over labels with gold support only (0 when no label has support).
  double macro_excluding_zero_support = 0.0;
  std::vector<double> per_label;
  std::vector<bool> supported;
};

// Per-label F1 = 2tp / (2tp + fp + fn), with 0/0 -> 0.
F1Scores f1_from_counts(const ConfusionCounts& counts);

struct LabelPair {
  LabelSet gold;
  LabelSet predicted;
};

F1Scores f1_macro(std::span<const LabelPair> pairs, const LabelSchema& schema);

struct JoinResult {
  std::vector<LabelPair> pairs;
  std::size_t missing_predictions = 0;
  std::size_t errored = 0;
  std::size_t with_unmatched = 0;
};

// Joins predictions to gold annotations by (text_id, annotator_id). A
// prediction with no gold record, or two predictions for one pair, raise
// JoinError. Errored predictions are scored as the empty set.
JoinResult join_predictions(const corpus::AnnotationCorpus& gold,
                            std::span<const parser::PredictionRecord> predictions);

}  // namespace perseval::metrics
