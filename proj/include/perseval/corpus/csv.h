#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace perseval::corpus {

// Minimal RFC 4180 reader: quoted fields may contain commas, doubled quotes
// and line breaks. A trailing CR before LF is discarded.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Next row, or nullopt at end of input. Throws DataError on an unterminated
  // quoted field.
  std::optional<std::vector<std::string>> next_row();

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

}  // namespace perseval::corpus
