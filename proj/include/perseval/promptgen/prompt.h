#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "perseval/common/jsonl.h"
#include "perseval/common/scenario.h"
#include "perseval/corpus/annotation.h"
#include "perseval/promptgen/template.h"
#include "perseval/promptgen/user_context.h"

namespace perseval::promptgen {

struct PromptInstance {
  ScenarioId scenario = ScenarioId::kQ0S;
  std::string prompt_text;
  std::string text_id;
  std::string annotator_id;
  corpus::LabelSet gold_labels;
  std::uint64_t render_seed = 0;
};

struct TrainRecord {
  ScenarioId scenario = ScenarioId::kLM;
  std::string prompt_text;
  std::string text_id;
  std::string annotator_id;
  // LM family: canonical label string. CLS family: one 0/1 entry per label.
  std::optional<std::string> target_text;
  std::optional<std::vector<int>> target_vector;
};

// Fills the scenario's template for one annotation. Personalized scenarios and
// few-shot scenarios need `user`; its index is rendered as the user id.
PromptInstance build_prompt(ScenarioId scenario, const corpus::AnnotationRecord& record,
                            const corpus::LabelSchema& schema, const TemplateSet& templates,
                            const UserContext* user, std::uint64_t seed);

// Fine-tune families only (LM, LM-P, CLS, CLS-P).
TrainRecord build_train_record(ScenarioId scenario, const corpus::AnnotationRecord& record,
                               const corpus::LabelSchema& schema, const TemplateSet& templates,
                               const UserContext* user);

OrderedJson prompt_to_json(const PromptInstance& p, const corpus::LabelSchema& schema);
OrderedJson train_record_to_json(const TrainRecord& r);

// Reads inference lines back (used by the query stage).
PromptInstance prompt_from_json(const Json& j, const corpus::LabelSchema& schema,
                                const std::string& where);

struct EmitCounts {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;

  bool operator==(const EmitCounts&) const = default;
};

// Null sinks are skipped.
struct EmitSinks {
  std::ostream* train = nullptr;
  std::ostream* validation = nullptr;
  std::ostream* test = nullptr;
};

// Query scenarios emit inference lines for the test partition only; the
// fine-tune families emit training lines for every partition. Lines are sorted
// by (text_id, annotator_id). User indices come from the training partition.
EmitCounts emit_corpus(const corpus::SplitCorpus& split, ScenarioId scenario,
                       const TemplateSet& templates, std::uint64_t seed, const EmitSinks& sinks);

}  // namespace perseval::promptgen
