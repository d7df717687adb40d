#pragma once

#include <filesystem>
#include <functional>
#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"

namespace perseval {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Calls `fn(object, line_number)` for every non-blank line. Malformed JSON is
// reported as a DataError naming the line.
void for_each_jsonl(std::istream& in, const std::string& source_name,
                    const std::function<void(const Json&, std::size_t)>& fn);

void for_each_jsonl_file(const std::filesystem::path& path,
                         const std::function<void(const Json&, std::size_t)>& fn);

// Writes one compact JSON line. Throws IoError with the line index on failure.
void write_jsonl_line(std::ostream& out, const OrderedJson& value, std::size_t line_index);

std::string read_file(const std::filesystem::path& path);

// Writes via a temporary sibling and rename, so readers never see partial files.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace perseval
