#include "perseval/baseline/synthetic.h"

#include <numeric>
#include <string>
#include <vector>

#include "perseval/common/error.h"
#include "perseval/common/rng.h"

namespace perseval::baseline {

namespace {

enum class Stance { kRule, kAlways, kNever };

std::string label_name(std::size_t i) { return "topic " + std::string(1, static_cast<char>('a' + i)); }

}  // namespace

corpus::LabelSchema synthetic_schema(std::size_t num_labels) {
  if (num_labels == 0 || num_labels > 26) throw ConfigError("synthetic label count must be 1..26");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < num_labels; ++i) labels.push_back(label_name(i));
  return corpus::LabelSchema("synthetic", labels, "topic");
}

corpus::AnnotationCorpus make_persona_corpus(const SyntheticSpec& spec) {
  if (spec.annotators_per_text == 0 || spec.annotators_per_text > spec.num_users) {
    throw ConfigError("annotators_per_text must be in 1..num_users");
  }
  if (spec.stance_rate < 0 || spec.stance_rate > 0.5) throw ConfigError("stance_rate must be in [0, 0.5]");
  corpus::AnnotationCorpus out{synthetic_schema(spec.num_labels), {}, {}};
  DeterministicRng rng(spec.seed);

  std::vector<std::vector<Stance>> stance(spec.num_users, std::vector<Stance>(spec.num_labels));
  for (auto& user : stance) {
    for (auto& s : user) {
      const double u = rng.uniform01();
      s = u < spec.stance_rate ? Stance::kAlways
          : u < 2 * spec.stance_rate ? Stance::kNever
                                     : Stance::kRule;
    }
  }

  std::vector<std::size_t> users(spec.num_users);
  std::iota(users.begin(), users.end(), std::size_t{0});
  for (std::size_t t = 0; t < spec.num_texts; ++t) {
    corpus::LabelSet active;
    active.insert(rng.uniform_index(spec.num_labels));
    if (spec.num_labels > 1 && rng.bernoulli(0.5)) active.insert(rng.uniform_index(spec.num_labels));
    const auto topics = active.indices();

    std::string text;
    const std::size_t n_words = spec.topic_words + spec.filler_words;
    for (std::size_t w = 0; w < n_words; ++w) {
      if (!text.empty()) text += ' ';
      if (w < spec.topic_words) {
        const auto l = topics[rng.uniform_index(topics.size())];
        text += std::string(1, static_cast<char>('a' + l)) + "w" +
                std::to_string(rng.uniform_index(spec.vocab_per_label));
      } else {
        text += "f" + std::to_string(rng.uniform_index(spec.filler_vocab));
      }
    }

    rng.shuffle(std::span<std::size_t>(users));
    const std::string text_id = "t" + std::to_string(t);
    for (std::size_t a = 0; a < spec.annotators_per_text; ++a) {
      const std::size_t u = users[a];
      corpus::LabelSet labels;
      for (std::size_t l = 0; l < spec.num_labels; ++l) {
        bool on = stance[u][l] == Stance::kAlways   ? true
                  : stance[u][l] == Stance::kNever ? false
                                                    : active.contains(l);
        if (rng.bernoulli(spec.label_noise)) on = !on;
        if (on) labels.insert(l);
      }
      if (labels.empty()) {
        ++out.provenance.log.dropped_empty;
        continue;
      }
      out.records.push_back({text_id, text, "u" + std::to_string(u), labels});
    }
  }
  out.provenance.log.rows_read = out.records.size() + out.provenance.log.dropped_empty;
  return out;
}

corpus::AnnotationCorpus make_single_rule_corpus(SyntheticSpec spec) {
  spec.stance_rate = 0.0;
  return make_persona_corpus(spec);
}

}  // namespace perseval::baseline
