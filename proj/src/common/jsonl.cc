#include "perseval/common/jsonl.h"

#include <fstream>
#include <sstream>
#include <thread>

#include "perseval/common/error.h"

namespace perseval {

void for_each_jsonl(std::istream& in, const std::string& source_name,
                    const std::function<void(const Json&, std::size_t)>& fn) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json value;
    try {
      value = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw DataError(source_name + ":" + std::to_string(line_number) +
                      ": malformed JSON: " + e.what());
    }
    fn(value, line_number);
  }
  if (in.bad()) throw IoError("read failure in " + source_name);
}

void for_each_jsonl_file(const std::filesystem::path& path,
                         const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  for_each_jsonl(in, path.string(), fn);
}

void write_jsonl_line(std::ostream& out, const OrderedJson& value, std::size_t line_index) {
  out << value.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict) << '\n';
  if (!out) {
    throw IoError("write failed at output line " + std::to_string(line_index + 1));
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace perseval
