#include "perseval/corpus/stats.h"

#include <set>

namespace perseval::corpus {

namespace {

void accumulate(CorpusSummary& s, const AnnotationCorpus& c, std::set<std::string>& texts) {
  if (s.label_frequencies.size() < c.schema.size()) s.label_frequencies.resize(c.schema.size());
  for (const auto& r : c.records) {
    ++s.record_count;
    ++s.per_annotator[r.annotator_id];
    texts.insert(r.text_id);
    for (auto i : r.labels.indices()) ++s.label_frequencies[i];
  }
  s.annotator_count = s.per_annotator.size();
  s.text_count = texts.size();
}

}  // namespace

CorpusSummary corpus_stats(const AnnotationCorpus& corpus) {
  CorpusSummary s;
  std::set<std::string> texts;
  accumulate(s, corpus, texts);
  return s;
}

SplitSummary corpus_stats(const SplitCorpus& split) {
  SplitSummary out;
  out.train = corpus_stats(split.train);
  out.validation = corpus_stats(split.validation);
  out.test = corpus_stats(split.test);
  std::set<std::string> texts;
  for (auto p : kAllPartitions) accumulate(out.total, split.part(p), texts);
  return out;
}

OrderedJson summary_to_json(const CorpusSummary& s, const LabelSchema& schema) {
  OrderedJson j;
  j["annotator_count"] = s.annotator_count;
  j["record_count"] = s.record_count;
  j["text_count"] = s.text_count;
  OrderedJson freq = OrderedJson::object();
  for (std::size_t i = 0; i < s.label_frequencies.size() && i < schema.size(); ++i) {
    freq[schema.labels()[i]] = s.label_frequencies[i];
  }
  j["label_frequencies"] = std::move(freq);
  OrderedJson per = OrderedJson::object();
  for (const auto& [a, n] : s.per_annotator) per[a] = n;
  j["per_annotator"] = std::move(per);
  return j;
}

}  // namespace perseval::corpus
