#include "perseval/corpus/label_schema.h"

#include <set>

#include "json.hpp"
#include "perseval/common/error.h"
#include "perseval/common/jsonl.h"
#include "toml.hpp"

namespace perseval::corpus {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

RawColumns raw_columns_from_json(const Json& j) {
  RawColumns rc;
  rc.text_id = j.at("text_id").get<std::string>();
  rc.text = j.at("text").get<std::string>();
  rc.annotator_id = j.at("annotator_id").get<std::string>();
  for (const auto& [label, column] : j.at("labels").items()) {
    rc.labels[canonical_label(label)] = column.get<std::string>();
  }
  return rc;
}

}  // namespace

std::string canonical_label(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

LabelSchema::LabelSchema(std::string dataset_name, std::vector<std::string> labels,
                         std::string task_phrase, RawColumns raw_columns)
    : dataset_name_(std::move(dataset_name)),
      labels_(std::move(labels)),
      task_phrase_(std::move(task_phrase)),
      raw_columns_(std::move(raw_columns)) {
  if (dataset_name_.empty()) throw SchemaError("dataset_name is empty");
  if (labels_.empty()) throw SchemaError("schema '" + dataset_name_ + "' has no labels");
  if (labels_.size() > kMaxLabels) {
    throw SchemaError("schema '" + dataset_name_ + "' has more than 64 labels");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const auto& label = labels_[i];
    if (label.empty() || canonical_label(label) != label) {
      throw SchemaError("label '" + label + "' is not in canonical form");
    }
    if (!index_.emplace(label, i).second) {
      throw SchemaError("duplicate label '" + label + "'");
    }
  }
  if (!raw_columns_.empty()) {
    for (const auto& [label, column] : raw_columns_.labels) {
      if (!index_.contains(label)) {
        throw SchemaError("import mapping names unknown label '" + label + "'");
      }
    }
  }
}

LabelSchema LabelSchema::from_json_text(std::string_view text) {
  try {
    const auto j = Json::parse(text);
    RawColumns rc;
    if (j.contains("import")) rc = raw_columns_from_json(j.at("import"));
    return LabelSchema(j.at("dataset_name").get<std::string>(),
                       j.at("labels").get<std::vector<std::string>>(),
                       j.value("task_phrase", std::string("label")), std::move(rc));
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("invalid schema JSON: ") + e.what());
  }
}

LabelSchema LabelSchema::from_toml_text(std::string_view text) {
  toml::table tbl;
  try {
    tbl = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw SchemaError(std::string("invalid schema TOML: ") + std::string(e.description()));
  }
  auto name = tbl["dataset_name"].value<std::string>();
  auto phrase = tbl["task_phrase"].value_or(std::string("label"));
  const auto* arr = tbl["labels"].as_array();
  if (!name || !arr) throw SchemaError("schema TOML needs dataset_name and labels");
  std::vector<std::string> labels;
  for (const auto& node : *arr) {
    auto s = node.value<std::string>();
    if (!s) throw SchemaError("labels must be strings");
    labels.push_back(*s);
  }
  RawColumns rc;
  if (const auto* imp = tbl["import"].as_table()) {
    rc.text_id = (*imp)["text_id"].value_or(std::string());
    rc.text = (*imp)["text"].value_or(std::string());
    rc.annotator_id = (*imp)["annotator_id"].value_or(std::string());
    if (const auto* lab = (*imp)["labels"].as_table()) {
      for (const auto& [key, node] : *lab) {
        rc.labels[canonical_label(key.str())] = node.value_or(std::string());
      }
    }
  }
  return LabelSchema(*name, std::move(labels), phrase, std::move(rc));
}

LabelSchema LabelSchema::load(const std::filesystem::path& path) {
  const auto text = read_file(path);
  if (path.extension() == ".toml") return from_toml_text(text);
  return from_json_text(text);
}

std::optional<std::size_t> LabelSchema::index_of(std::string_view canonical) const {
  auto it = index_.find(canonical);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> LabelSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(static_cast<std::size_t>(__builtin_ctzll(b)));
  }
  return out;
}

std::vector<std::string> label_names(const LabelSet& set, const LabelSchema& schema) {
  std::vector<std::string> out;
  for (auto i : set.indices()) {
    if (i >= schema.size()) {
      throw SchemaError("label index " + std::to_string(i) + " outside schema '" +
                        schema.dataset_name() + "'");
    }
    out.push_back(schema.labels()[i]);
  }
  return out;
}

LabelSet to_label_set(const std::vector<std::string>& names, const LabelSchema& schema) {
  LabelSet set;
  for (const auto& name : names) {
    auto idx = schema.index_of(canonical_label(name));
    if (!idx) {
      throw SchemaError("unknown label '" + name + "' for schema '" + schema.dataset_name() +
                        "'");
    }
    set.insert(*idx);
  }
  return set;
}

}  // namespace perseval::corpus
