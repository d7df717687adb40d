#pragma once

#include <cstdint>
#include <vector>

#include "perseval/baseline/linear_model.h"
#include "perseval/corpus/annotation.h"

namespace perseval::baseline {

struct Hyper {
  int epochs = 10;
  // Step size in epoch t (1-based) is learning_rate / sqrt(t).
  double learning_rate = 0.1;
  double l2 = 1e-6;
  std::uint64_t seed = 0;
  // Labels are independent problems; >1 trains them on separate threads with
  // identical results.
  unsigned threads = 1;
};

// Per-label logistic regression trained by seeded SGD over the training
// partition. Biases start at the training log-odds of each label, weights at
// zero. The epoch with the best validation F1-macro is returned (the last one
// when validation is empty; the bias-only model when epochs == 0).
// `config.user_dim` is overwritten with the number of training users.
LinearModel train(const corpus::SplitCorpus& split, FeatureConfig config, const Hyper& hyper);

// Label l is predicted iff sigmoid(margin) >= 0.5. `config` must equal the
// model's configuration.
corpus::LabelSet predict(const LinearModel& model, const corpus::AnnotationRecord& record,
                         const FeatureConfig& config);

std::vector<double> predict_scores(const LinearModel& model, const corpus::AnnotationRecord& record);

}  // namespace perseval::baseline
