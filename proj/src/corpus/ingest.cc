#include "perseval/corpus/ingest.h"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "perseval/common/digest.h"
#include "perseval/common/error.h"
#include "perseval/corpus/csv.h"

namespace perseval::corpus {

namespace {

class RecordCollector {
 public:
  RecordCollector(const LabelSchema& schema, std::string source)
      : source_(std::move(source)) {
    corpus_.schema = schema;
  }

  void add(AnnotationRecord r, std::size_t line) {
    ++corpus_.provenance.log.rows_read;
    if (!seen_.emplace(r.text_id, r.annotator_id).second) {
      throw IngestError("duplicate (text_id, annotator_id) pair (" + r.text_id + ", " +
                        r.annotator_id + ") at " + source_ + ":" + std::to_string(line));
    }
    if (r.labels.empty()) {
      ++corpus_.provenance.log.dropped_empty;
      return;
    }
    corpus_.records.push_back(std::move(r));
  }

  AnnotationCorpus finish(std::string digest) {
    corpus_.provenance.source_digest = std::move(digest);
    return std::move(corpus_);
  }

 private:
  std::string source_;
  AnnotationCorpus corpus_;
  std::set<std::pair<std::string, std::string>> seen_;
};

bool truthy(std::string_view cell) {
  std::string c = canonical_label(cell);
  return c == "1" || c == "1.0" || c == "true";
}

std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string id_field(const Json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw IngestError(where + ": missing field '" + key + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw IngestError(where + ": field '" + key + "' must be a string");
}

}  // namespace

const char* partition_name(Partition p) {
  switch (p) {
    case Partition::kTrain: return "train";
    case Partition::kValidation: return "validation";
    case Partition::kTest: return "test";
  }
  return "?";
}

const AnnotationCorpus& SplitCorpus::part(Partition p) const {
  switch (p) {
    case Partition::kTrain: return train;
    case Partition::kValidation: return validation;
    case Partition::kTest: return test;
  }
  return train;
}

AnnotationCorpus& SplitCorpus::part(Partition p) {
  return const_cast<AnnotationCorpus&>(std::as_const(*this).part(p));
}

AnnotationCorpus ingest(std::istream& in, const LabelSchema& schema,
                        const std::string& source_name) {
  const std::string bytes = slurp(in);
  std::istringstream lines(bytes);
  RecordCollector collector(schema, source_name);
  for_each_jsonl(lines, source_name, [&](const Json& j, std::size_t line) {
    const std::string where = source_name + ":" + std::to_string(line);
    if (!j.is_object()) throw IngestError(where + ": expected a JSON object");
    AnnotationRecord r;
    r.text_id = id_field(j, "text_id", where);
    r.annotator_id = id_field(j, "annotator_id", where);
    const auto text = j.find("text");
    if (text == j.end() || !text->is_string()) {
      throw IngestError(where + ": missing string field 'text'");
    }
    r.text = text->get<std::string>();
    const auto labels = j.find("labels");
    if (labels == j.end() || !labels->is_array()) {
      throw IngestError(where + ": missing array field 'labels'");
    }
    for (const auto& l : *labels) {
      if (!l.is_string()) throw IngestError(where + ": labels must be strings");
      const auto idx = schema.index_of(canonical_label(l.get<std::string>()));
      if (!idx) {
        throw SchemaError("unknown label '" + l.get<std::string>() + "' at " + where);
      }
      r.labels.insert(*idx);
    }
    collector.add(std::move(r), line);
  });
  return collector.finish(sha256_hex(bytes));
}

AnnotationCorpus ingest_file(const std::filesystem::path& path, const LabelSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return ingest(in, schema, path.string());
}

AnnotationCorpus import_csv(std::istream& in, const LabelSchema& schema,
                            const std::string& source_name) {
  const auto& cols = schema.raw_columns();
  if (cols.empty()) {
    throw SchemaError("schema '" + schema.dataset_name() + "' has no import column mapping");
  }
  const std::string bytes = slurp(in);
  std::istringstream stream(bytes);
  CsvReader reader(stream);
  auto header = reader.next_row();
  if (!header) throw IngestError(source_name + ": empty CSV");

  std::unordered_map<std::string, std::size_t> column_index;
  for (std::size_t i = 0; i < header->size(); ++i) {
    std::string name = (*header)[i];
    if (i == 0 && name.starts_with("\xEF\xBB\xBF")) name.erase(0, 3);
    column_index.emplace(name, i);
  }
  auto require = [&](const std::string& column) {
    auto it = column_index.find(column);
    if (it == column_index.end()) {
      throw SchemaError("column '" + column + "' not found in " + source_name);
    }
    return it->second;
  };
  const std::size_t text_id_col = require(cols.text_id);
  const std::size_t text_col = require(cols.text);
  const std::size_t annotator_col = require(cols.annotator_id);
  std::vector<std::pair<std::size_t, std::size_t>> label_cols;  // (column, label)
  for (std::size_t l = 0; l < schema.size(); ++l) {
    auto it = cols.labels.find(schema.labels()[l]);
    if (it == cols.labels.end()) {
      throw SchemaError("no import column for label '" + schema.labels()[l] + "'");
    }
    label_cols.emplace_back(require(it->second), l);
  }

  RecordCollector collector(schema, source_name);
  while (auto row = reader.next_row()) {
    if (row->size() == 1 && (*row)[0].empty()) continue;
    if (row->size() != header->size()) {
      throw IngestError(source_name + ":" + std::to_string(reader.line()) + ": expected " +
                        std::to_string(header->size()) + " columns, got " +
                        std::to_string(row->size()));
    }
    AnnotationRecord r;
    r.text_id = (*row)[text_id_col];
    r.text = (*row)[text_col];
    r.annotator_id = (*row)[annotator_col];
    for (auto [col, label] : label_cols) {
      if (truthy((*row)[col])) r.labels.insert(label);
    }
    collector.add(std::move(r), reader.line());
  }
  return collector.finish(sha256_hex(bytes));
}

AnnotationCorpus import_csv_file(const std::filesystem::path& path, const LabelSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return import_csv(in, schema, path.string());
}

OrderedJson record_to_json(const AnnotationRecord& r, const LabelSchema& schema) {
  OrderedJson j;
  j["text_id"] = r.text_id;
  j["text"] = r.text;
  j["annotator_id"] = r.annotator_id;
  j["labels"] = label_names(r.labels, schema);
  return j;
}

void write_corpus_jsonl(std::ostream& out, const AnnotationCorpus& corpus) {
  std::size_t line = 0;
  for (const auto& r : corpus.records) {
    write_jsonl_line(out, record_to_json(r, corpus.schema), line++);
  }
}

OrderedJson cleaning_log_to_json(const CleaningLog& log) {
  OrderedJson j;
  j["rows_read"] = log.rows_read;
  j["dropped_empty"] = log.dropped_empty;
  j["steps"] = OrderedJson::array();
  for (const auto& s : log.steps) {
    OrderedJson step;
    step["step"] = s.step;
    step["records_removed"] = s.records_removed;
    step["annotators_removed"] = s.annotators_removed;
    j["steps"].push_back(std::move(step));
  }
  j["flags"] = log.flags;
  return j;
}

}  // namespace perseval::corpus
