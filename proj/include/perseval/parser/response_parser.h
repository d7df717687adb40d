#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "perseval/corpus/label_schema.h"

namespace perseval::parser {

using corpus::LabelSchema;
using corpus::LabelSet;

struct ParseResult {
  LabelSet labels;
  // Raw (whitespace-trimmed) pieces of the response that did not map to a label.
  std::vector<std::string> unmatched;
  // True iff the response was a clean ", "-style list of canonical labels.
  bool exact = false;
};

// Lowercase, trim, collapse internal whitespace, strip leading list markers
// ("-", "*", "12.") and trailing "." / ";", repeated until nothing changes.
std::string normalize_token(std::string_view raw);

// Splits on commas and newlines and maps each normalized piece to a schema
// label by exact comparison. Two extra rules apply to a piece that is not
// itself a label:
//   * a preamble ending in ':' ("The labels are: hostile") is dropped;
//   * if the piece starts with a label followed by a space, the longest such
//     label is taken and the remainder is reported as unmatched.
// Never throws.
ParseResult parse_label_list(std::string_view raw, const LabelSchema& schema);

// Canonical serialization: schema order, joined by ", ". Throws
// SerializationError for an index outside the schema.
std::string serialize_labels(const LabelSet& labels, const LabelSchema& schema);

}  // namespace perseval::parser
