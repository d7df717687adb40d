#include "perseval/metrics/f1.h"

#include <map>

#include "perseval/common/error.h"

namespace perseval::metrics {

void ConfusionCounts::add(const LabelSet& gold, const LabelSet& predicted) {
  ++records_;
  for (std::size_t i = 0; i < per_label_.size(); ++i) {
    const bool g = gold.contains(i);
    const bool p = predicted.contains(i);
    if (g && p) {
      ++per_label_[i].tp;
    } else if (p) {
      ++per_label_[i].fp;
    } else if (g) {
      ++per_label_[i].fn;
    }
  }
}

void ConfusionCounts::merge(const ConfusionCounts& other) {
  if (per_label_.size() < other.per_label_.size()) per_label_.resize(other.per_label_.size());
  for (std::size_t i = 0; i < other.per_label_.size(); ++i) {
    per_label_[i].tp += other.per_label_[i].tp;
    per_label_[i].fp += other.per_label_[i].fp;
    per_label_[i].fn += other.per_label_[i].fn;
  }
  records_ += other.records_;
}

F1Scores f1_from_counts(const ConfusionCounts& counts) {
  F1Scores s;
  const auto& pl = counts.per_label();
  double sum = 0.0;
  double sum_supported = 0.0;
  std::size_t n_supported = 0;
  for (const auto& c : pl) {
    const auto denom = 2 * c.tp + c.fp + c.fn;
    const double f1 = denom == 0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
    const bool supported = c.tp + c.fn > 0;
    s.per_label.push_back(f1);
    s.supported.push_back(supported);
    sum += f1;
    if (supported) {
      sum_supported += f1;
      ++n_supported;
    }
  }
  s.macro = pl.empty() ? 0.0 : sum / static_cast<double>(pl.size());
  s.macro_excluding_zero_support =
      n_supported == 0 ? 0.0 : sum_supported / static_cast<double>(n_supported);
  return s;
}

F1Scores f1_macro(std::span<const LabelPair> pairs, const LabelSchema& schema) {
  ConfusionCounts counts(schema.size());
  for (const auto& p : pairs) counts.add(p.gold, p.predicted);
  return f1_from_counts(counts);
}

JoinResult join_predictions(const corpus::AnnotationCorpus& gold,
                            std::span<const parser::PredictionRecord> predictions) {
  std::map<std::pair<std::string, std::string>, std::pair<const corpus::AnnotationRecord*, bool>>
      index;
  for (const auto& r : gold.records) index[{r.text_id, r.annotator_id}] = {&r, false};

  JoinResult out;
  for (const auto& p : predictions) {
    auto it = index.find({p.text_id, p.annotator_id});
    if (it == index.end()) {
      throw JoinError("prediction (text_id=" + p.text_id + ", annotator_id=" + p.annotator_id +
                      ") has no gold record");
    }
    if (it->second.second) {
      throw JoinError("duplicate prediction for (text_id=" + p.text_id +
                      ", annotator_id=" + p.annotator_id + ")");
    }
    it->second.second = true;
    LabelSet predicted = p.error ? LabelSet{} : p.labels;
    if (p.error) ++out.errored;
    if (!p.unmatched.empty()) ++out.with_unmatched;
    out.pairs.push_back({it->second.first->labels, predicted});
  }
  out.missing_predictions = gold.records.size() - out.pairs.size();
  return out;
}

}  // namespace perseval::metrics
