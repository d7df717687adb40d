#include "perseval/cli/run_config.h"

#include <algorithm>
#include <sstream>

#include "perseval/common/error.h"
#include "toml.hpp"

namespace perseval::cli {

namespace fs = std::filesystem;

Json toml_to_json(std::string_view text) {
  toml::table tbl;
  try {
    tbl = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "invalid TOML at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }
  std::ostringstream out;
  out << toml::json_formatter{tbl};
  return Json::parse(out.str());
}

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::vector<ScenarioId> parse_scenarios(const Json& list) {
  std::vector<ScenarioId> out;
  for (const auto& item : list) {
    const auto name = item.get<std::string>();
    const auto s = parse_scenario(name);
    if (!s) throw ConfigError("unknown scenario '" + name + "'");
    out.push_back(*s);
  }
  return out;
}

void reject_unknown(const Json& table, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, value] : table.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

}  // namespace

RunConfig RunConfig::from_toml_text(std::string_view text, const fs::path& base_dir) {
  const Json j = toml_to_json(text);
  RunConfig c;
  reject_unknown(j, {"output_dir", "templates_dir", "seed", "model_name", "scenarios", "dataset", "cleaning", "split",
                     "endpoint", "baseline"},
                 "the run config");
  try {
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());
    c.templates_dir = resolve(base_dir, j.value("templates_dir", std::string("templates")));
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    c.model_name = j.value("model_name", std::string());
    if (j.contains("scenarios")) c.scenarios = parse_scenarios(j["scenarios"]);

    for (const auto& d : j.value("dataset", Json::array())) {
      reject_unknown(d, {"name", "schema", "input", "format"}, "[[dataset]]");
      DatasetEntry e;
      e.name = d.at("name").get<std::string>();
      e.schema = resolve(base_dir, d.at("schema").get<std::string>());
      e.input = resolve(base_dir, d.at("input").get<std::string>());
      e.format = d.value("format", e.format);
      c.datasets.push_back(std::move(e));
    }
    if (j.contains("cleaning")) {
      reject_unknown(j["cleaning"], {"outlier_threshold"}, "[cleaning]");
      c.outlier_threshold = j["cleaning"].value("outlier_threshold", c.outlier_threshold);
    }
    if (j.contains("split")) {
      const auto& s = j["split"];
      reject_unknown(s, {"train", "validation", "test"}, "[split]");
      c.ratios.train = s.value("train", c.ratios.train);
      c.ratios.validation = s.value("validation", c.ratios.validation);
      c.ratios.test = s.value("test", c.ratios.test);
    }
    if (j.contains("endpoint")) {
      Json e = j["endpoint"];
      if (e.contains("cache_dir")) e["cache_dir"] = resolve(base_dir, e["cache_dir"]).string();
      c.endpoint = llm::endpoint_config_from_json(e);
    }
    if (j.contains("baseline")) {
      const auto& b = j["baseline"];
      reject_unknown(b, {"epochs", "learning_rate", "l2", "threads", "hash_dim", "ngram_max"}, "[baseline]");
      auto& h = c.baseline.hyper;
      h.epochs = b.value("epochs", h.epochs);
      h.learning_rate = b.value("learning_rate", h.learning_rate);
      h.l2 = b.value("l2", h.l2);
      h.threads = b.value("threads", h.threads);
      auto& f = c.baseline.features;
      f.hash_dim = b.value("hash_dim", f.hash_dim);
      f.ngram_max = b.value("ngram_max", f.ngram_max);
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("invalid run config: ") + e.what());
  }
  c.baseline.hyper.seed = c.seed;
  if (c.model_name.empty() && c.endpoint) c.model_name = c.endpoint->model_name;
  return c;
}

RunConfig RunConfig::load(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  return from_toml_text(read_file(path), path.parent_path());
}

const DatasetEntry& RunConfig::dataset(const std::string& name) const {
  for (const auto& d : datasets) {
    if (d.name == name) return d;
  }
  throw ConfigError("dataset '" + name + "' is not in the config");
}

void RunConfig::validate() const {
  for (const auto& d : datasets) {
    if (d.format != "jsonl" && d.format != "csv") {
      throw ConfigError("dataset '" + d.name + "': format must be jsonl or csv");
    }
    if (!fs::exists(d.schema)) throw ConfigError("schema not found: " + d.schema.string());
    if (!d.input.empty() && !fs::exists(d.input)) throw ConfigError("dataset input not found: " + d.input.string());
  }
  if (!(outlier_threshold >= 0 && outlier_threshold <= 1)) {
    throw ConfigError("outlier_threshold must lie in [0, 1]");
  }
  baseline.features.validate();
  if (endpoint) endpoint->validate();
}

}  // namespace perseval::cli
