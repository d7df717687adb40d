#pragma once

#include <optional>

#include "perseval/baseline/trainer.h"
#include "perseval/metrics/report.h"

namespace perseval::baseline {

struct AbResult {
  double f1_cls = 0.0;
  double f1_clsp = 0.0;
  // Percent; empty when the CLS score is 0 and the gain is undefined.
  std::optional<double> gain;
  metrics::ScoreReport report;
  LinearModel cls;
  LinearModel clsp;
};

// Trains twin models that differ only in config.with_user and scores both on
// the test partition. `config.with_user` is ignored.
AbResult ab_evaluate(const corpus::SplitCorpus& split, FeatureConfig config, const Hyper& hyper);

std::vector<parser::PredictionRecord> predict_partition(const LinearModel& model,
                                                        const corpus::AnnotationCorpus& part,
                                                        ScenarioId scenario);

}  // namespace perseval::baseline
