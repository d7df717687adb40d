#include "perseval/promptgen/prompt.h"

#include <algorithm>

#include "perseval/common/error.h"
#include "perseval/parser/response_parser.h"

namespace perseval::promptgen {

namespace {

std::string label_list(const corpus::LabelSchema& schema) {
  std::string out;
  for (const auto& l : schema.labels()) {
    if (!out.empty()) out += "\n- ";
    out += l;
  }
  return out;
}

const UserContext& require_user(ScenarioId scenario, const corpus::AnnotationRecord& record,
                                const UserContext* user) {
  if (!user) {
    throw DataError("scenario " + std::string(scenario_display(scenario)) +
                    " needs a user context for annotator '" + record.annotator_id + "'");
  }
  if (user->user_id != record.annotator_id) {
    throw DataError("user context '" + user->user_id + "' does not belong to annotator '" +
                    record.annotator_id + "'");
  }
  return *user;
}

std::string render_for(ScenarioId scenario, const corpus::AnnotationRecord& record,
                       const corpus::LabelSchema& schema, const TemplateSet& templates,
                       const UserContext* user, std::uint64_t seed) {
  SlotMap slots;
  slots.emplace(slot::kText, record.text);
  slots.emplace(slot::kLabelList, label_list(schema));
  if (is_personalized(scenario)) {
    slots.emplace(slot::kUserId, std::to_string(require_user(scenario, record, user).user_index));
  }
  if (const int k = few_shot_count(scenario); k > 0) {
    const auto& u = require_user(scenario, record, user);
    const auto examples =
        select_few_shot(u, static_cast<std::size_t>(k), record.text_id, record.text, seed);
    if (k == 1) {
      slots.emplace(slot::kExampleText, examples[0].text);
      slots.emplace(slot::kExampleResponse, parser::serialize_labels(examples[0].labels, schema));
    } else {
      slots.emplace(slot::kFirstExampleText, examples[0].text);
      slots.emplace(slot::kFirstExampleResponse,
                    parser::serialize_labels(examples[0].labels, schema));
      slots.emplace(slot::kSecondExampleText, examples[1].text);
      slots.emplace(slot::kSecondExampleResponse,
                    parser::serialize_labels(examples[1].labels, schema));
    }
  }
  return render_template(templates.get(scenario), slots);
}

std::vector<const corpus::AnnotationRecord*> sorted_records(const corpus::AnnotationCorpus& c) {
  std::vector<const corpus::AnnotationRecord*> out;
  out.reserve(c.records.size());
  for (const auto& r : c.records) out.push_back(&r);
  std::sort(out.begin(), out.end(), [](const auto* a, const auto* b) {
    return std::tie(a->text_id, a->annotator_id) < std::tie(b->text_id, b->annotator_id);
  });
  return out;
}

}  // namespace

PromptInstance build_prompt(ScenarioId scenario, const corpus::AnnotationRecord& record,
                            const corpus::LabelSchema& schema, const TemplateSet& templates,
                            const UserContext* user, std::uint64_t seed) {
  PromptInstance p;
  p.scenario = scenario;
  p.prompt_text = render_for(scenario, record, schema, templates, user, seed);
  p.text_id = record.text_id;
  p.annotator_id = record.annotator_id;
  p.gold_labels = record.labels;
  p.render_seed = seed;
  return p;
}

TrainRecord build_train_record(ScenarioId scenario, const corpus::AnnotationRecord& record,
                               const corpus::LabelSchema& schema, const TemplateSet& templates,
                               const UserContext* user) {
  if (is_query(scenario)) {
    throw ConfigError("scenario " + std::string(scenario_display(scenario)) +
                      " has no training records");
  }
  TrainRecord r;
  r.scenario = scenario;
  r.prompt_text = render_for(scenario, record, schema, templates, user, 0);
  r.text_id = record.text_id;
  r.annotator_id = record.annotator_id;
  if (is_generative(scenario)) {
    r.target_text = parser::serialize_labels(record.labels, schema);
  } else {
    std::vector<int> v(schema.size(), 0);
    for (auto i : record.labels.indices()) v.at(i) = 1;
    r.target_vector = std::move(v);
  }
  return r;
}

OrderedJson prompt_to_json(const PromptInstance& p, const corpus::LabelSchema& schema) {
  OrderedJson j;
  j["scenario"] = std::string(scenario_key(p.scenario));
  j["text_id"] = p.text_id;
  j["annotator_id"] = p.annotator_id;
  j["prompt"] = p.prompt_text;
  j["gold"] = corpus::label_names(p.gold_labels, schema);
  return j;
}

OrderedJson train_record_to_json(const TrainRecord& r) {
  OrderedJson j;
  j["scenario"] = std::string(scenario_key(r.scenario));
  j["text_id"] = r.text_id;
  j["annotator_id"] = r.annotator_id;
  j["prompt"] = r.prompt_text;
  if (r.target_text) j["target_text"] = *r.target_text;
  if (r.target_vector) j["target_vector"] = *r.target_vector;
  return j;
}

PromptInstance prompt_from_json(const Json& j, const corpus::LabelSchema& schema,
                                const std::string& where) {
  PromptInstance p;
  try {
    const auto key = j.at("scenario").get<std::string>();
    auto s = parse_scenario(key);
    if (!s) throw DataError(where + ": unknown scenario '" + key + "'");
    p.scenario = *s;
    p.text_id = j.at("text_id").get<std::string>();
    p.annotator_id = j.at("annotator_id").get<std::string>();
    p.prompt_text = j.at("prompt").get<std::string>();
    if (auto it = j.find("gold"); it != j.end()) {
      p.gold_labels = corpus::to_label_set(it->get<std::vector<std::string>>(), schema);
    }
  } catch (const Json::exception& e) {
    throw DataError(where + ": invalid prompt record: " + e.what());
  }
  return p;
}

EmitCounts emit_corpus(const corpus::SplitCorpus& split, ScenarioId scenario,
                       const TemplateSet& templates, std::uint64_t seed, const EmitSinks& sinks) {
  const UserDirectory users(split.train);
  const auto& schema = split.train.schema;
  EmitCounts counts;
  auto emit_part = [&](corpus::Partition part, std::ostream* sink, std::size_t& count) {
    if (!sink) return;
    for (const auto* r : sorted_records(split.part(part))) {
      const UserContext* user = users.find(r->annotator_id);
      if (is_query(scenario)) {
        write_jsonl_line(*sink,
                         prompt_to_json(build_prompt(scenario, *r, schema, templates, user, seed),
                                        schema),
                         count);
      } else {
        write_jsonl_line(*sink,
                         train_record_to_json(
                             build_train_record(scenario, *r, schema, templates, user)),
                         count);
      }
      ++count;
    }
  };
  if (!is_query(scenario)) {
    emit_part(corpus::Partition::kTrain, sinks.train, counts.train);
    emit_part(corpus::Partition::kValidation, sinks.validation, counts.validation);
  }
  emit_part(corpus::Partition::kTest, sinks.test, counts.test);
  return counts;
}

}  // namespace perseval::promptgen
