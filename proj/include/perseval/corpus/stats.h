#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "perseval/common/jsonl.h"
#include "perseval/corpus/annotation.h"

namespace perseval::corpus {

struct CorpusSummary {
  std::size_t annotator_count = 0;
  std::size_t record_count = 0;
  std::size_t text_count = 0;
  // Indexed like the schema labels.
  std::vector<std::size_t> label_frequencies;
  std::map<std::string, std::size_t> per_annotator;

  bool operator==(const CorpusSummary&) const = default;
};

CorpusSummary corpus_stats(const AnnotationCorpus& corpus);

struct SplitSummary {
  CorpusSummary train;
  CorpusSummary validation;
  CorpusSummary test;
  CorpusSummary total;
};

SplitSummary corpus_stats(const SplitCorpus& split);

OrderedJson summary_to_json(const CorpusSummary& s, const LabelSchema& schema);

}  // namespace perseval::corpus
