#include "perseval/corpus/cleaning.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "perseval/common/error.h"
#include "perseval/common/rng.h"

namespace perseval::corpus {

namespace {

AnnotationCorpus with_records(const AnnotationCorpus& like, std::vector<AnnotationRecord> records) {
  AnnotationCorpus out;
  out.schema = like.schema;
  out.provenance = like.provenance;
  out.records = std::move(records);
  return out;
}

std::set<std::string> annotator_set(const AnnotationCorpus& c) {
  std::set<std::string> out;
  for (const auto& r : c.records) out.insert(r.annotator_id);
  return out;
}

// Keeps records whose annotator is in `keep`; returns the number removed.
std::size_t retain_annotators(AnnotationCorpus& c, const std::set<std::string>& keep) {
  const auto before = c.records.size();
  std::erase_if(c.records, [&](const AnnotationRecord& r) { return !keep.contains(r.annotator_id); });
  return before - c.records.size();
}

}  // namespace

AnnotationCorpus filter_outlier_annotators(const AnnotationCorpus& corpus, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("outlier threshold must lie in [0, 1], got " + std::to_string(threshold));
  }
  const auto threshold_ppm = static_cast<std::uint64_t>(std::llround(threshold * 1e6));

  std::map<std::string, std::uint64_t> counts;
  for (const auto& r : corpus.records) ++counts[r.annotator_id];
  std::uint64_t max_count = 0;
  for (const auto& [_, n] : counts) max_count = std::max(max_count, n);

  std::set<std::string> keep;
  CleaningStep step{"filter_outlier_annotators", 0, {}};
  for (const auto& [annotator, n] : counts) {
    // n < threshold * max  <=>  n * 1e6 < ppm * max
    if (n * 1'000'000ULL < threshold_ppm * max_count) {
      step.annotators_removed.push_back(annotator);
    } else {
      keep.insert(annotator);
    }
  }

  AnnotationCorpus out = with_records(corpus, corpus.records);
  step.records_removed = retain_annotators(out, keep);
  out.provenance.log.steps.push_back(std::move(step));
  if (out.records.empty()) out.provenance.log.flags.push_back("empty after outlier filtering");
  return out;
}

SplitCorpus split_by_text(const AnnotationCorpus& corpus, const SplitRatios& ratios,
                          std::uint64_t seed) {
  if (!(ratios.train > 0 && ratios.validation > 0 && ratios.test > 0) ||
      std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be positive and sum to 1");
  }
  std::vector<std::string> text_ids;
  {
    std::unordered_set<std::string> seen;
    for (const auto& r : corpus.records) {
      if (seen.insert(r.text_id).second) text_ids.push_back(r.text_id);
    }
  }
  if (text_ids.size() < 3) {
    throw SplitError("need at least 3 distinct texts, got " + std::to_string(text_ids.size()));
  }
  std::sort(text_ids.begin(), text_ids.end());
  DeterministicRng rng(seed);
  rng.shuffle(std::span<std::string>(text_ids));

  const auto n = static_cast<double>(text_ids.size());
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  const auto n_val = static_cast<std::size_t>(std::floor(ratios.validation * n + 1e-9));
  const auto n_test = static_cast<std::size_t>(std::floor(ratios.test * n + 1e-9));
  const std::size_t n_train = text_ids.size() - n_val - n_test;

  std::unordered_map<std::string, Partition> assignment;
  for (std::size_t i = 0; i < text_ids.size(); ++i) {
    Partition p = i < n_train                ? Partition::kTrain
                  : i < n_train + n_val      ? Partition::kValidation
                                             : Partition::kTest;
    assignment.emplace(text_ids[i], p);
  }

  SplitCorpus split;
  split.split_seed = seed;
  split.ratios = ratios;
  for (auto p : kAllPartitions) {
    split.part(p).schema = corpus.schema;
    split.part(p).provenance = corpus.provenance;
  }
  for (const auto& r : corpus.records) split.part(assignment.at(r.text_id)).records.push_back(r);
  return split;
}

SplitCorpus enforce_annotator_coverage(const SplitCorpus& split) {
  SplitCorpus out = split;
  std::vector<std::string> removed;
  std::size_t records_removed = 0;
  for (int pass = 0;; ++pass) {
    const auto a = annotator_set(out.train);
    const auto b = annotator_set(out.validation);
    const auto c = annotator_set(out.test);
    std::set<std::string> ab, common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(ab, ab.end()));
    std::set_intersection(ab.begin(), ab.end(), c.begin(), c.end(),
                          std::inserter(common, common.end()));
    std::set<std::string> all = a;
    all.insert(b.begin(), b.end());
    all.insert(c.begin(), c.end());
    if (common.size() == all.size()) break;
    // Removing whole annotators never uncovers another one, so this loop runs
    // its body at most once.
    if (pass > 0) throw Error(ErrorKind::kInternal, "annotator coverage did not converge");
    std::set_difference(all.begin(), all.end(), common.begin(), common.end(),
                        std::back_inserter(removed));
    for (auto p : kAllPartitions) records_removed += retain_annotators(out.part(p), common);
  }
  for (auto p : kAllPartitions) {
    auto& part = out.part(p);
    if (part.records.empty()) {
      throw CoverageError(std::string(partition_name(p)) +
                          " partition is empty after annotator coverage enforcement");
    }
    part.provenance.log.steps.push_back({"enforce_annotator_coverage", records_removed, removed});
  }
  return out;
}

SplitCorpus clean_and_split(const AnnotationCorpus& corpus, double threshold,
                            const SplitRatios& ratios, std::uint64_t seed) {
  return enforce_annotator_coverage(
      split_by_text(filter_outlier_annotators(corpus, threshold), ratios, seed));
}

}  // namespace perseval::corpus
