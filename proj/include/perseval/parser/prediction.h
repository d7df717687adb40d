#pragma once

#include <optional>
#include <string>
#include <vector>

#include "perseval/common/jsonl.h"
#include "perseval/parser/response_parser.h"

namespace perseval::parser {

// One model answer, joinable to gold by (text_id, annotator_id).
struct PredictionRecord {
  std::string text_id;
  std::string annotator_id;
  std::string scenario;
  std::optional<std::string> raw_response;
  LabelSet labels;
  std::vector<std::string> unmatched;
  bool exact = false;
  bool parsed = false;
  std::optional<std::string> error;
};

// {text_id, annotator_id, scenario, raw_response, labels, unmatched, exact}
// plus "error" when the upstream call failed. Unparsed records omit the
// label fields.
OrderedJson prediction_to_json(const PredictionRecord& p, const LabelSchema& schema);

// Accepts lines with or without parse results. Lines that carry "labels" but
// no raw_response (classification heads) are taken as parsed and exact.
PredictionRecord prediction_from_json(const Json& j, const LabelSchema& schema,
                                      const std::string& where);

// Fills labels / unmatched / exact from raw_response. Records without a raw
// response keep whatever labels they already carry.
void parse_prediction(PredictionRecord& p, const LabelSchema& schema);

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path,
                                               const LabelSchema& schema);

}  // namespace perseval::parser
