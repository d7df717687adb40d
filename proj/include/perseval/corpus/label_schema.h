#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace perseval::corpus {

// Column mapping used by the raw CSV import adapter. Empty when the schema is
// only used with the normalized JSONL format.
struct RawColumns {
  std::string text_id;
  std::string text;
  std::string annotator_id;
  // canonical label -> raw column name
  std::map<std::string, std::string> labels;

  bool empty() const { return text_id.empty(); }
};

// Lowercase ASCII letters and collapse runs of whitespace to a single space,
// trimming both ends.
std::string canonical_label(std::string_view raw);

class LabelSchema {
 public:
  static constexpr std::size_t kMaxLabels = 64;

  LabelSchema() = default;
  // Validates: non-empty, canonical, unique, at most kMaxLabels labels.
  LabelSchema(std::string dataset_name, std::vector<std::string> labels,
              std::string task_phrase, RawColumns raw_columns = {});

  // JSON or TOML, chosen by file extension.
  static LabelSchema load(const std::filesystem::path& path);
  static LabelSchema from_json_text(std::string_view text);
  static LabelSchema from_toml_text(std::string_view text);

  const std::string& dataset_name() const { return dataset_name_; }
  const std::string& task_phrase() const { return task_phrase_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const RawColumns& raw_columns() const { return raw_columns_; }
  std::size_t size() const { return labels_.size(); }

  std::optional<std::size_t> index_of(std::string_view canonical) const;

  bool operator==(const LabelSchema& other) const {
    return dataset_name_ == other.dataset_name_ && labels_ == other.labels_ &&
           task_phrase_ == other.task_phrase_;
  }

 private:
  std::string dataset_name_;
  std::vector<std::string> labels_;
  std::string task_phrase_;
  RawColumns raw_columns_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Subset of a schema's labels, stored as a bitmask over label indices.
class LabelSet {
 public:
  constexpr LabelSet() = default;
  static constexpr LabelSet from_bits(std::uint64_t bits) {
    LabelSet s;
    s.bits_ = bits;
    return s;
  }

  void insert(std::size_t index) { bits_ |= (std::uint64_t{1} << index); }
  void erase(std::size_t index) { bits_ &= ~(std::uint64_t{1} << index); }
  bool contains(std::size_t index) const { return (bits_ >> index) & 1U; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(__builtin_popcountll(bits_)); }
  std::uint64_t bits() const { return bits_; }

  // Indices in ascending (schema) order.
  std::vector<std::size_t> indices() const;

  bool operator==(const LabelSet&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

// Label strings in schema order.
std::vector<std::string> label_names(const LabelSet& set, const LabelSchema& schema);

// Maps label strings (canonicalized first) to a set. Unknown labels throw
// SchemaError naming the label.
LabelSet to_label_set(const std::vector<std::string>& names, const LabelSchema& schema);

}  // namespace perseval::corpus
