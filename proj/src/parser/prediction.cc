#include "perseval/parser/prediction.h"

#include "perseval/common/error.h"

namespace perseval::parser {

OrderedJson prediction_to_json(const PredictionRecord& p, const LabelSchema& schema) {
  OrderedJson j;
  j["text_id"] = p.text_id;
  j["annotator_id"] = p.annotator_id;
  j["scenario"] = p.scenario;
  if (p.raw_response) {
    j["raw_response"] = *p.raw_response;
  } else {
    j["raw_response"] = nullptr;
  }
  if (p.parsed) {
    j["labels"] = corpus::label_names(p.labels, schema);
    j["unmatched"] = p.unmatched;
    j["exact"] = p.exact;
  }
  if (p.error) j["error"] = *p.error;
  return j;
}

PredictionRecord prediction_from_json(const Json& j, const LabelSchema& schema,
                                      const std::string& where) {
  PredictionRecord p;
  try {
    p.text_id = j.at("text_id").get<std::string>();
    p.annotator_id = j.at("annotator_id").get<std::string>();
    p.scenario = j.value("scenario", std::string());
    if (auto it = j.find("raw_response"); it != j.end() && it->is_string()) {
      p.raw_response = it->get<std::string>();
    }
    if (auto it = j.find("labels"); it != j.end()) {
      p.labels = corpus::to_label_set(it->get<std::vector<std::string>>(), schema);
      p.parsed = true;
      p.exact = j.value("exact", !p.raw_response.has_value());
      p.unmatched = j.value("unmatched", std::vector<std::string>{});
    }
    if (auto it = j.find("error"); it != j.end() && it->is_string()) {
      p.error = it->get<std::string>();
    }
  } catch (const Json::exception& e) {
    throw DataError(where + ": invalid prediction record: " + e.what());
  }
  return p;
}

void parse_prediction(PredictionRecord& p, const LabelSchema& schema) {
  if (!p.raw_response) {
    if (!p.parsed) {
      p.parsed = true;
      p.exact = false;
    }
    return;
  }
  auto r = parse_label_list(*p.raw_response, schema);
  p.labels = r.labels;
  p.unmatched = std::move(r.unmatched);
  p.exact = r.exact;
  p.parsed = true;
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path,
                                               const LabelSchema& schema) {
  std::vector<PredictionRecord> out;
  for_each_jsonl_file(path, [&](const Json& j, std::size_t line) {
    out.push_back(prediction_from_json(j, schema, path.string() + ":" + std::to_string(line)));
  });
  return out;
}

}  // namespace perseval::parser
