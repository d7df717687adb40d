#pragma once

#include <cstdint>

#include "perseval/corpus/annotation.h"

namespace perseval::corpus {

inline constexpr double kDefaultOutlierThreshold = 0.05;

// Removes every annotator whose annotation count is strictly below
// threshold * (max annotator count). The threshold is applied at a resolution
// of 1e-6 using integer arithmetic, so boundary cases are exact.
// threshold must lie in [0, 1].
AnnotationCorpus filter_outlier_annotators(const AnnotationCorpus& corpus,
                                           double threshold = kDefaultOutlierThreshold);

// Sorts the distinct text ids, shuffles them with a seeded generator and
// assigns floor(r_val * N) texts to validation, floor(r_test * N) to test and
// the rest to train. Records keep their corpus order inside a partition.
SplitCorpus split_by_text(const AnnotationCorpus& corpus, const SplitRatios& ratios,
                          std::uint64_t seed);

// Keeps only annotators present in all three partitions.
SplitCorpus enforce_annotator_coverage(const SplitCorpus& split);

// drop-empty (already done by ingest) -> filter -> split -> coverage.
SplitCorpus clean_and_split(const AnnotationCorpus& corpus, double threshold,
                            const SplitRatios& ratios, std::uint64_t seed);

}  // namespace perseval::corpus
