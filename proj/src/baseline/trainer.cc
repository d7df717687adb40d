#include "perseval/baseline/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "perseval/common/error.h"
#include "perseval/common/rng.h"
#include "perseval/metrics/f1.h"

namespace perseval::baseline {

namespace {

struct Example {
  SparseVector x;
  corpus::LabelSet y;
};

std::vector<Example> featurize_all(const corpus::AnnotationCorpus& c, const UserIndex& users,
                                   const FeatureConfig& config) {
  std::vector<Example> out;
  out.reserve(c.records.size());
  for (const auto& r : c.records) {
    out.push_back({featurize(r.text, r.annotator_id, users, config).vector, r.labels});
  }
  return out;
}

// log(1 + exp(-z)) without overflow.
double log1p_exp_neg(double z) {
  return z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// One SGD epoch for one label with the scaled-weight trick: w = scale * v, so
// the L2 shrink costs O(1) per step. Returns the summed log-loss.
double sgd_epoch(std::vector<double>& v, double& bias, std::size_t label,
                 const std::vector<Example>& data, const std::vector<std::size_t>& order,
                 double lr, double l2) {
  double scale = 1.0;
  double loss = 0.0;
  const double shrink = 1.0 - lr * l2;
  for (std::size_t i : order) {
    const auto& ex = data[i];
    double dot = 0.0;
    for (std::size_t k = 0; k < ex.x.nnz(); ++k) dot += v[ex.x.indices[k]] * ex.x.values[k];
    const double z = scale * dot + bias;
    const double y = ex.y.contains(label) ? 1.0 : 0.0;
    loss += y > 0 ? log1p_exp_neg(z) : log1p_exp_neg(-z);
    const double g = sigmoid(z) - y;

    scale *= shrink;
    if (scale < 1e-9) {
      for (auto& w : v) w *= scale;
      scale = 1.0;
    }
    const double step = lr * g / scale;
    for (std::size_t k = 0; k < ex.x.nnz(); ++k) v[ex.x.indices[k]] -= step * ex.x.values[k];
    bias -= lr * g;
  }
  if (scale != 1.0) {
    for (auto& w : v) w *= scale;
  }
  return loss;
}

double validation_f1(const LinearModel& m, const std::vector<Example>& val) {
  metrics::ConfusionCounts counts(m.labels.size());
  for (const auto& ex : val) {
    corpus::LabelSet pred;
    for (std::size_t l = 0; l < m.labels.size(); ++l) {
      if (m.margin(l, ex.x) >= 0.0) pred.insert(l);
    }
    counts.add(ex.y, pred);
  }
  return metrics::f1_from_counts(counts).macro;
}

template <typename Fn>
void for_each_label(std::size_t num_labels, unsigned threads, Fn fn) {
  if (threads <= 1 || num_labels <= 1) {
    for (std::size_t l = 0; l < num_labels; ++l) fn(l);
    return;
  }
  std::vector<std::jthread> pool;
  const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(num_labels));
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t l = t; l < num_labels; l += n) fn(l);
    });
  }
}

}  // namespace

LinearModel train(const corpus::SplitCorpus& split, FeatureConfig config, const Hyper& hyper) {
  const auto& schema = split.train.schema;
  if (split.train.records.empty()) throw DataError("training partition is empty");
  if (hyper.epochs < 0) throw ConfigError("epochs must be >= 0");
  if (!(hyper.learning_rate > 0)) throw ConfigError("learning rate must be positive");
  if (!(hyper.l2 >= 0)) throw ConfigError("l2 must be >= 0");

  LinearModel m;
  m.users = build_user_index(split.train);
  config.user_dim = config.with_user ? m.users.size() : 0;
  config.validate();
  m.config = config;
  m.dataset = schema.dataset_name();
  m.labels = schema.labels();
  m.seed = hyper.seed;

  const auto train_data = featurize_all(split.train, m.users, config);
  const auto val_data = featurize_all(split.validation, m.users, config);
  const std::size_t num_labels = schema.size();
  const double n = static_cast<double>(train_data.size());

  m.weights.assign(num_labels, std::vector<double>(config.total_dim(), 0.0));
  m.bias.assign(num_labels, 0.0);
  for (std::size_t l = 0; l < num_labels; ++l) {
    double pos = 0;
    for (const auto& ex : train_data) pos += ex.y.contains(l) ? 1.0 : 0.0;
    const double prior = std::clamp(pos / n, 1e-3, 1.0 - 1e-3);
    m.bias[l] = std::log(prior / (1.0 - prior));
  }

  std::vector<std::size_t> order(train_data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  LinearModel best;
  double best_f1 = -1.0;
  std::vector<double> label_loss(num_labels);

  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    DeterministicRng rng(mix64(hyper.seed ^ static_cast<std::uint64_t>(epoch)));
    rng.shuffle(std::span<std::size_t>(order));
    const double lr = hyper.learning_rate / std::sqrt(static_cast<double>(epoch));
    for_each_label(num_labels, hyper.threads, [&](std::size_t l) {
      label_loss[l] = sgd_epoch(m.weights[l], m.bias[l], l, train_data, order, lr, hyper.l2);
    });
    const double loss = std::accumulate(label_loss.begin(), label_loss.end(), 0.0) /
                        (n * static_cast<double>(num_labels));
    if (!std::isfinite(loss)) {
      throw TrainingError("non-finite loss in epoch " + std::to_string(epoch));
    }
    m.loss_curve.push_back(loss);
    const double f1 = val_data.empty() ? 0.0 : validation_f1(m, val_data);
    m.validation_f1_curve.push_back(f1);
    if (val_data.empty() || f1 > best_f1) {
      best_f1 = f1;
      m.best_epoch = epoch;
      best.weights = m.weights;
      best.bias = m.bias;
    }
  }
  if (hyper.epochs > 0) {
    m.weights = std::move(best.weights);
    m.bias = std::move(best.bias);
  }
  return m;
}

std::vector<double> predict_scores(const LinearModel& model, const corpus::AnnotationRecord& record) {
  const auto x = featurize(record.text, record.annotator_id, model.users, model.config).vector;
  std::vector<double> out(model.labels.size());
  for (std::size_t l = 0; l < out.size(); ++l) out[l] = sigmoid(model.margin(l, x));
  return out;
}

corpus::LabelSet predict(const LinearModel& model, const corpus::AnnotationRecord& record,
                         const FeatureConfig& config) {
  if (!(config == model.config)) {
    throw ConfigError("feature configuration does not match the model's (dim " +
                      std::to_string(config.total_dim()) + " vs " +
                      std::to_string(model.config.total_dim()) + ")");
  }
  const auto x = featurize(record.text, record.annotator_id, model.users, model.config).vector;
  corpus::LabelSet out;
  for (std::size_t l = 0; l < model.labels.size(); ++l) {
    if (model.margin(l, x) >= 0.0) out.insert(l);
  }
  return out;
}

}  // namespace perseval::baseline
