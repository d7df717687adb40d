#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perseval/common/jsonl.h"
#include "perseval/common/scenario.h"
#include "perseval/metrics/f1.h"

namespace perseval::metrics {

// Scores are fractions in [0, 1]; percentage points appear only when rendered.
struct ScenarioScore {
  ScenarioId scenario = ScenarioId::kQ0S;
  double f1_macro = 0.0;
  double f1_macro_excl = 0.0;
  std::vector<double> per_label;
  std::size_t n_records = 0;
  double unmatched_rate = 0.0;
  std::size_t n_errors = 0;
  std::size_t n_missing = 0;
};

struct ScoreReport {
  std::string dataset;
  std::string model_name;
  std::vector<ScenarioScore> scenarios;

  const ScenarioScore* find(ScenarioId s) const;
};

ScenarioScore score_scenario(ScenarioId scenario, const corpus::AnnotationCorpus& gold,
                             std::span<const parser::PredictionRecord> predictions);

struct GainRow {
  std::string dataset;
  std::string model;
  ScenarioId baseline;
  ScenarioId personalized;
  double baseline_score;
  double personalized_score;
  double gain_pct;
};

// LM vs LM-P and CLS vs CLS-P for every report where both sides exist and the
// baseline is positive.
std::vector<GainRow> gain_rows(std::span<const ScoreReport> reports);

struct RenderedReport {
  std::string text;
  std::string csv;
  std::string gains_csv;
  std::string json;
};

RenderedReport render_report(std::span<const ScoreReport> reports);

OrderedJson report_to_json(const ScoreReport& r, const corpus::LabelSchema* schema = nullptr);
ScoreReport report_from_json(const Json& j);

}  // namespace perseval::metrics
