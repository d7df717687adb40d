#include "perseval/corpus/csv.h"

#include "perseval/common/error.h"

namespace perseval::corpus {

std::optional<std::vector<std::string>> CsvReader::next_row() {
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  const std::size_t start_line = line_ + 1;
  int ch;
  while ((ch = in_.get()) != std::char_traits<char>::eof()) {
    any = true;
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line_;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      ++line_;
      if (!field.empty() && field.back() == '\r') field.pop_back();
      row.push_back(std::move(field));
      return row;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) {
    throw DataError("unterminated quoted CSV field starting at line " +
                    std::to_string(start_line));
  }
  if (!any) return std::nullopt;
  ++line_;
  if (!field.empty() && field.back() == '\r') field.pop_back();
  row.push_back(std::move(field));
  return row;
}

}  // namespace perseval::corpus
