#include "perseval/cli/manifest.h"

#include <chrono>
#include <ctime>

#include "perseval/common/digest.h"
#include "perseval/common/error.h"

#ifndef PERSEVAL_VERSION
#define PERSEVAL_VERSION "0.0.0"
#endif

namespace perseval::cli {

namespace fs = std::filesystem;

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

std::string display_path(const fs::path& p, const fs::path& root) {
  const auto rel = p.lexically_normal().lexically_relative(root.lexically_normal());
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return p.lexically_normal().generic_string();
}

OrderedJson digests(const std::vector<fs::path>& files, const fs::path& root) {
  OrderedJson out = OrderedJson::object();
  for (const auto& f : files) out[display_path(f, root)] = sha256_file(f);
  return out;
}

}  // namespace

void record_stage(const fs::path& dir, const fs::path& root, const StageRecord& record) {
  const fs::path path = dir / "manifest.json";
  OrderedJson m;
  if (fs::exists(path)) {
    try {
      m = OrderedJson::parse(read_file(path));
    } catch (const OrderedJson::parse_error&) {
      m = OrderedJson();  // rewritten below
    }
  }
  if (!m.is_object()) m = OrderedJson::object();
  m["tool"] = "perseval";
  m["version"] = PERSEVAL_VERSION;
  if (!m.contains("stages")) m["stages"] = OrderedJson::object();

  OrderedJson entry;
  entry["inputs"] = digests(record.inputs, root);
  entry["outputs"] = digests(record.outputs, root);
  entry["seeds"] = record.seeds;
  entry["params"] = record.params;
  entry["timestamp"] = utc_timestamp();
  m["stages"][record.stage] = std::move(entry);
  fs::create_directories(dir);
  write_file_atomic(path, m.dump(2) + "\n");
}

}  // namespace perseval::cli
