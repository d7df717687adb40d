#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "perseval/corpus/label_schema.h"

namespace perseval::corpus {

struct AnnotationRecord {
  std::string text_id;
  std::string text;
  std::string annotator_id;
  LabelSet labels;

  bool operator==(const AnnotationRecord&) const = default;
};

// One entry per cleaning step that removed something.
struct CleaningStep {
  std::string step;
  std::size_t records_removed = 0;
  std::vector<std::string> annotators_removed;
};

struct CleaningLog {
  std::size_t rows_read = 0;
  std::size_t dropped_empty = 0;
  std::vector<CleaningStep> steps;
  std::vector<std::string> flags;
};

struct Provenance {
  std::string source_digest;
  CleaningLog log;
};

struct AnnotationCorpus {
  LabelSchema schema;
  std::vector<AnnotationRecord> records;
  Provenance provenance;

  bool empty() const { return records.empty(); }
};

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

enum class Partition { kTrain, kValidation, kTest };

const char* partition_name(Partition p);

struct SplitCorpus {
  AnnotationCorpus train;
  AnnotationCorpus validation;
  AnnotationCorpus test;
  std::uint64_t split_seed = 0;
  SplitRatios ratios;

  const AnnotationCorpus& part(Partition p) const;
  AnnotationCorpus& part(Partition p);
};

inline constexpr Partition kAllPartitions[] = {Partition::kTrain, Partition::kValidation,
                                               Partition::kTest};

}  // namespace perseval::corpus
