#include "perseval/baseline/ab_evaluate.h"

#include "perseval/metrics/gain.h"

namespace perseval::baseline {

std::vector<parser::PredictionRecord> predict_partition(const LinearModel& model,
                                                        const corpus::AnnotationCorpus& part,
                                                        ScenarioId scenario) {
  std::vector<parser::PredictionRecord> out;
  out.reserve(part.records.size());
  for (const auto& r : part.records) {
    parser::PredictionRecord p;
    p.text_id = r.text_id;
    p.annotator_id = r.annotator_id;
    p.scenario = std::string(scenario_key(scenario));
    p.labels = predict(model, r, model.config);
    p.exact = true;
    p.parsed = true;
    out.push_back(std::move(p));
  }
  return out;
}

AbResult ab_evaluate(const corpus::SplitCorpus& split, FeatureConfig config, const Hyper& hyper) {
  AbResult out;
  config.with_user = false;
  out.cls = train(split, config, hyper);
  config.with_user = true;
  out.clsp = train(split, config, hyper);

  const auto cls_pred = predict_partition(out.cls, split.test, ScenarioId::kCLS);
  const auto clsp_pred = predict_partition(out.clsp, split.test, ScenarioId::kCLSP);
  out.report.dataset = split.train.schema.dataset_name();
  out.report.model_name = "linear-baseline";
  out.report.scenarios.push_back(metrics::score_scenario(ScenarioId::kCLS, split.test, cls_pred));
  out.report.scenarios.push_back(metrics::score_scenario(ScenarioId::kCLSP, split.test, clsp_pred));
  out.f1_cls = out.report.scenarios[0].f1_macro;
  out.f1_clsp = out.report.scenarios[1].f1_macro;
  if (out.f1_cls > 0.0) out.gain = metrics::gain(out.f1_clsp, out.f1_cls);
  return out;
}

}  // namespace perseval::baseline
