#pragma once

#include <cstdint>

#include "perseval/corpus/annotation.h"

namespace perseval::baseline {

// Generator for corpora with a known labeling process. Each text is built from
// one or two active topics (words drawn from per-topic vocabularies mixed with
// filler words); the shared rule labels a text with its active topics.
struct SyntheticSpec {
  std::size_t num_users = 24;
  std::size_t num_texts = 1000;
  std::size_t annotators_per_text = 6;
  std::size_t num_labels = 8;
  std::size_t topic_words = 6;
  std::size_t filler_words = 6;
  std::size_t vocab_per_label = 20;
  std::size_t filler_vocab = 300;
  // Per (user, label): probability the user always assigns the label, and
  // separately that they never do, regardless of the text.
  double stance_rate = 0.15;
  // Independent per-label flip applied after the rule.
  double label_noise = 0.02;
  std::uint64_t seed = 1;
};

corpus::LabelSchema synthetic_schema(std::size_t num_labels);

// Users disagree with the shared rule through their per-label stances.
corpus::AnnotationCorpus make_persona_corpus(const SyntheticSpec& spec);

// Same texts and rule with no stances: every user applies one labeling function.
corpus::AnnotationCorpus make_single_rule_corpus(SyntheticSpec spec);

}  // namespace perseval::baseline
