#include "perseval/cli/commands.h"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "perseval/baseline/ab_evaluate.h"
#include "perseval/baseline/synthetic.h"
#include "perseval/cli/manifest.h"
#include "perseval/cli/run_config.h"
#include "perseval/common/error.h"
#include "perseval/corpus/cleaning.h"
#include "perseval/corpus/ingest.h"
#include "perseval/corpus/stats.h"
#include "perseval/llm/batch.h"
#include "perseval/llm/chat_client.h"
#include "perseval/metrics/report.h"
#include "perseval/promptgen/prompt.h"
#include "perseval/parser/prediction.h"

namespace perseval::cli {

namespace {

namespace fs = std::filesystem;
using corpus::AnnotationCorpus;
using corpus::LabelSchema;
using corpus::SplitCorpus;

struct Options {
  std::string config_path;
  std::vector<std::string> datasets;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> scenarios;
  std::string output_dir;
  std::string templates_dir;
  std::string model;
  std::optional<double> threshold;
  std::optional<int> epochs;
  // Direct (config-free) inputs.
  std::string schema;
  std::string input;
  std::string format;
  std::string name;
  std::string gold;
  std::string predictions;
  std::string output;
  std::string synthetic;
};

struct Layout {
  fs::path root;

  fs::path corpus_dir(const std::string& ds) const { return root / ds / "corpus"; }
  fs::path split_dir(const std::string& ds) const { return root / ds / "split"; }
  fs::path scenario_dir(const std::string& ds, ScenarioId s) const {
    return root / ds / std::string(scenario_key(s));
  }
  fs::path baseline_dir(const std::string& ds) const { return root / ds / "baseline"; }
  fs::path report_dir() const { return root / "report"; }
};

struct Context {
  RunConfig config;
  Layout layout;
  std::vector<DatasetEntry> datasets;
  std::ostream& out;
  std::ostream& err;
  // Set when some per-item endpoint call failed; the run still completes.
  bool endpoint_failures = false;
};

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

void require_file(const fs::path& p, const std::string& hint) {
  if (!fs::exists(p)) throw DataError("missing " + p.string() + " (" + hint + ")");
}

template <typename Fn>
void write_lines(const fs::path& path, Fn fn) {
  std::ostringstream buf;
  fn(buf);
  fs::create_directories(path.parent_path());
  write_file_atomic(path, buf.str());
}

void write_json(const fs::path& path, const OrderedJson& j) {
  fs::create_directories(path.parent_path());
  write_file_atomic(path, j.dump(2) + "\n");
}

OrderedJson ratios_json(const corpus::SplitRatios& r) {
  return OrderedJson{{"train", r.train}, {"validation", r.validation}, {"test", r.test}};
}

RunConfig build_config(const Options& o) {
  RunConfig c = o.config_path.empty() ? RunConfig{} : RunConfig::load(o.config_path);
  if (o.seed) {
    c.seed = *o.seed;
    c.baseline.hyper.seed = *o.seed;
  }
  if (!o.scenarios.empty()) {
    c.scenarios.clear();
    for (const auto& name : o.scenarios) {
      const auto s = parse_scenario(name);
      if (!s) throw ConfigError("unknown scenario '" + name + "'");
      c.scenarios.push_back(*s);
    }
  }
  if (!o.output_dir.empty()) c.output_dir = o.output_dir;
  if (!o.templates_dir.empty()) c.templates_dir = o.templates_dir;
  if (!o.model.empty()) c.model_name = o.model;
  if (o.threshold) c.outlier_threshold = *o.threshold;
  if (o.epochs) c.baseline.hyper.epochs = *o.epochs;
  if (!o.schema.empty()) {
    DatasetEntry e;
    e.schema = o.schema;
    e.input = o.input;
    e.name = o.name.empty() ? LabelSchema::load(e.schema).dataset_name() : o.name;
    e.format = !o.format.empty()                 ? o.format
               : fs::path(o.input).extension() == ".csv" ? "csv"
                                                         : "jsonl";
    std::erase_if(c.datasets, [&](const DatasetEntry& d) { return d.name == e.name; });
    c.datasets.push_back(std::move(e));
  }
  if (c.model_name.empty()) c.model_name = "model";
  c.validate();
  return c;
}

std::vector<DatasetEntry> selected_datasets(const RunConfig& c, const Options& o) {
  if (o.datasets.empty()) return c.datasets;
  std::vector<DatasetEntry> out;
  for (const auto& name : o.datasets) out.push_back(c.dataset(name));
  return out;
}

SplitCorpus load_split(const Context& ctx, const DatasetEntry& d, const LabelSchema& schema) {
  const auto dir = ctx.layout.split_dir(d.name);
  SplitCorpus split;
  for (auto p : corpus::kAllPartitions) {
    const auto file = dir / (std::string(corpus::partition_name(p)) + ".jsonl");
    require_file(file, "run the split stage first");
    split.part(p) = corpus::ingest_file(file, schema);
  }
  split.split_seed = ctx.config.seed;
  split.ratios = ctx.config.ratios;
  return split;
}

// ---- stages ----

void stage_ingest(Context& ctx, const DatasetEntry& d) {
  if (d.input.empty()) throw ConfigError("dataset '" + d.name + "' has no input file");
  const auto schema = LabelSchema::load(d.schema);
  const auto c = d.format == "csv" ? corpus::import_csv_file(d.input, schema)
                                   : corpus::ingest_file(d.input, schema);
  const auto dir = ctx.layout.corpus_dir(d.name);
  const auto corpus_path = dir / "corpus.jsonl";
  const auto log_path = dir / "ingest_log.json";
  write_lines(corpus_path, [&](std::ostream& os) { corpus::write_corpus_jsonl(os, c); });
  OrderedJson log = corpus::cleaning_log_to_json(c.provenance.log);
  log["source_digest"] = c.provenance.source_digest;
  write_json(log_path, log);
  record_stage(dir, ctx.layout.root,
               {"ingest", {d.input, d.schema}, {corpus_path, log_path}, {},
                {{"format", d.format}}});
  ctx.out << "ingest " << d.name << ": " << c.records.size() << " records ("
          << c.provenance.log.dropped_empty << " empty rows dropped)\n";
}

void stage_clean(Context& ctx, const DatasetEntry& d) {
  const auto schema = LabelSchema::load(d.schema);
  const auto dir = ctx.layout.corpus_dir(d.name);
  const auto in_path = dir / "corpus.jsonl";
  require_file(in_path, "run the ingest stage first");
  auto c = corpus::ingest_file(in_path, schema);
  if (fs::exists(dir / "ingest_log.json")) {
    const auto log = Json::parse(read_file(dir / "ingest_log.json"));
    c.provenance.log.rows_read = log.value("rows_read", c.provenance.log.rows_read);
    c.provenance.log.dropped_empty = log.value("dropped_empty", std::size_t{0});
  }
  const auto cleaned = corpus::filter_outlier_annotators(c, ctx.config.outlier_threshold);
  const auto out_path = dir / "cleaned.jsonl";
  const auto log_path = dir / "cleaning_log.json";
  write_lines(out_path, [&](std::ostream& os) { corpus::write_corpus_jsonl(os, cleaned); });
  OrderedJson log = corpus::cleaning_log_to_json(cleaned.provenance.log);
  log["final"] = corpus::summary_to_json(corpus::corpus_stats(cleaned), schema);
  write_json(log_path, log);
  record_stage(dir, ctx.layout.root,
               {"clean", {in_path, d.schema}, {out_path, log_path}, {},
                {{"outlier_threshold", ctx.config.outlier_threshold}}});
  ctx.out << "clean " << d.name << ": " << cleaned.records.size() << " records, "
          << corpus::corpus_stats(cleaned).annotator_count << " annotators\n";
}

void stage_split(Context& ctx, const DatasetEntry& d) {
  const auto schema = LabelSchema::load(d.schema);
  const auto in_path = ctx.layout.corpus_dir(d.name) / "cleaned.jsonl";
  require_file(in_path, "run the clean stage first");
  const auto c = corpus::ingest_file(in_path, schema);
  const auto split = corpus::enforce_annotator_coverage(
      corpus::split_by_text(c, ctx.config.ratios, ctx.config.seed));

  const auto dir = ctx.layout.split_dir(d.name);
  std::vector<fs::path> outputs;
  OrderedJson log;
  for (auto p : corpus::kAllPartitions) {
    const std::string name = corpus::partition_name(p);
    const auto path = dir / (name + ".jsonl");
    write_lines(path, [&](std::ostream& os) { corpus::write_corpus_jsonl(os, split.part(p)); });
    outputs.push_back(path);
    log[name] = corpus::cleaning_log_to_json(split.part(p).provenance.log);
  }
  const auto stats = corpus::corpus_stats(split);
  OrderedJson sj;
  sj["train"] = corpus::summary_to_json(stats.train, schema);
  sj["validation"] = corpus::summary_to_json(stats.validation, schema);
  sj["test"] = corpus::summary_to_json(stats.test, schema);
  sj["total"] = corpus::summary_to_json(stats.total, schema);
  write_json(dir / "split_log.json", log);
  write_json(dir / "stats.json", sj);
  outputs.push_back(dir / "split_log.json");
  outputs.push_back(dir / "stats.json");
  record_stage(dir, ctx.layout.root,
               {"split", {in_path, d.schema}, outputs, {{"split_seed", ctx.config.seed}},
                {{"ratios", ratios_json(ctx.config.ratios)}}});
  ctx.out << "split " << d.name << ": train " << split.train.records.size() << ", validation "
          << split.validation.records.size() << ", test " << split.test.records.size()
          << " records; " << stats.total.annotator_count << " annotators\n";
}

void stage_gen_prompts(Context& ctx, const DatasetEntry& d, ScenarioId s) {
  const auto schema = LabelSchema::load(d.schema);
  const auto split = load_split(ctx, d, schema);
  const auto templates = promptgen::TemplateSet::load(ctx.config.templates_dir, schema.dataset_name());
  const auto dir = ctx.layout.scenario_dir(d.name, s);
  fs::create_directories(dir);

  std::ostringstream train, validation, test;
  promptgen::EmitSinks sinks;
  sinks.test = &test;
  if (!is_query(s)) {
    sinks.train = &train;
    sinks.validation = &validation;
  }
  const auto counts = promptgen::emit_corpus(split, s, templates, ctx.config.seed, sinks);

  std::vector<fs::path> outputs;
  if (is_query(s)) {
    write_file_atomic(dir / "prompts.jsonl", test.str());
    outputs.push_back(dir / "prompts.jsonl");
  } else {
    write_file_atomic(dir / "train.jsonl", train.str());
    write_file_atomic(dir / "validation.jsonl", validation.str());
    write_file_atomic(dir / "test.jsonl", test.str());
    outputs = {dir / "train.jsonl", dir / "validation.jsonl", dir / "test.jsonl"};
  }
  std::vector<fs::path> inputs;
  for (auto p : corpus::kAllPartitions) {
    inputs.push_back(ctx.layout.split_dir(d.name) / (std::string(corpus::partition_name(p)) + ".jsonl"));
  }
  inputs.push_back(ctx.config.templates_dir / schema.dataset_name() /
                   (std::string(scenario_key(s)) + ".txt"));
  record_stage(dir, ctx.layout.root,
               {"gen-prompts", inputs, outputs, {{"render_seed", ctx.config.seed}},
                {{"scenario", scenario_key(s)}}});
  ctx.out << "gen-prompts " << d.name << "/" << scenario_key(s) << ": " << counts.train
          << " train, " << counts.validation << " validation, " << counts.test << " test lines\n";
}

void stage_query(Context& ctx, const DatasetEntry& d, ScenarioId s) {
  if (!is_query(s)) {
    ctx.out << "query " << d.name << "/" << scenario_key(s)
            << ": skipped (fine-tune scenario; predictions come from an adapter)\n";
    return;
  }
  if (!ctx.config.endpoint) throw ConfigError("the query stage needs an [endpoint] table");
  auto endpoint = *ctx.config.endpoint;
  if (endpoint.cache_dir.empty()) endpoint.cache_dir = ctx.layout.root / "cache";

  const auto schema = LabelSchema::load(d.schema);
  const auto dir = ctx.layout.scenario_dir(d.name, s);
  const auto in_path = dir / "prompts.jsonl";
  require_file(in_path, "run gen-prompts first");
  std::vector<promptgen::PromptInstance> prompts;
  for_each_jsonl_file(in_path, [&](const Json& j, std::size_t line) {
    prompts.push_back(
        promptgen::prompt_from_json(j, schema, in_path.string() + ":" + std::to_string(line)));
  });

  auto cache = std::make_shared<llm::ResponseCache>(endpoint.cache_dir);
  llm::ChatClient client(endpoint, llm::load_api_key(endpoint), cache);

  std::stop_source stop;
  g_interrupted.store(false);
  auto previous = std::signal(SIGINT, on_sigint);
  std::jthread watcher([&](std::stop_token done) {
    while (!done.stop_requested()) {
      if (g_interrupted.load()) {
        stop.request_stop();
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  });
  llm::BatchOptions options;
  options.stop = stop.get_token();
  const auto results = llm::run_batch(client, prompts, options);
  watcher.request_stop();
  watcher.join();
  std::signal(SIGINT, previous);

  std::size_t failures = 0;
  const auto out_path = dir / "responses.jsonl";
  write_lines(out_path, [&](std::ostream& os) {
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (results[i].error) ++failures;
      write_jsonl_line(os, parser::prediction_to_json(results[i], schema), i);
    }
  });
  record_stage(dir, ctx.layout.root,
               {"query", {in_path}, {out_path}, {},
                {{"model", endpoint.model_name},
                 {"temperature", endpoint.temperature},
                 {"max_tokens", endpoint.max_tokens}}});
  ctx.out << "query " << d.name << "/" << scenario_key(s) << ": " << results.size()
          << " prompts, " << client.upstream_requests() << " upstream requests, " << failures
          << " failed\n";
  if (failures > 0) {
    ctx.endpoint_failures = true;
    ctx.err << "warning: " << failures << " prompts failed; rerun query to retry them\n";
  }
  if (stop.stop_requested()) throw EndpointError(0, "interrupted; completed responses are cached");
}

std::size_t parse_file(const fs::path& in, const fs::path& out, const LabelSchema& schema) {
  auto records = parser::read_predictions(in, schema);
  std::size_t with_unmatched = 0;
  write_lines(out, [&](std::ostream& os) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      parser::parse_prediction(records[i], schema);
      if (!records[i].unmatched.empty()) ++with_unmatched;
      write_jsonl_line(os, parser::prediction_to_json(records[i], schema), i);
    }
  });
  return with_unmatched;
}

void stage_parse(Context& ctx, const DatasetEntry& d, ScenarioId s) {
  const auto schema = LabelSchema::load(d.schema);
  const auto dir = ctx.layout.scenario_dir(d.name, s);
  const auto in_path = dir / "responses.jsonl";
  require_file(in_path, "run query, or place adapter output there");
  const auto out_path = dir / "predictions.jsonl";
  const auto unmatched = parse_file(in_path, out_path, schema);
  record_stage(dir, ctx.layout.root, {"parse", {in_path, d.schema}, {out_path}, {}, {}});
  ctx.out << "parse " << d.name << "/" << scenario_key(s) << ": " << unmatched
          << " responses with unmatched tokens\n";
}

void stage_eval(Context& ctx, const DatasetEntry& d, ScenarioId s) {
  const auto schema = LabelSchema::load(d.schema);
  const auto dir = ctx.layout.scenario_dir(d.name, s);
  const auto gold_path = ctx.layout.split_dir(d.name) / "test.jsonl";
  const auto pred_path = dir / "predictions.jsonl";
  require_file(gold_path, "run the split stage first");
  require_file(pred_path, "run the parse stage first");
  const auto gold = corpus::ingest_file(gold_path, schema);
  const auto preds = parser::read_predictions(pred_path, schema);

  metrics::ScoreReport report{d.name, ctx.config.model_name, {}};
  report.scenarios.push_back(metrics::score_scenario(s, gold, preds));
  write_json(dir / "scores.json", metrics::report_to_json(report, &schema));
  record_stage(dir, ctx.layout.root,
               {"eval", {gold_path, pred_path}, {dir / "scores.json"}, {},
                {{"model", ctx.config.model_name}}});
  ctx.out << metrics::render_report(std::span(&report, 1)).text;
}

std::vector<metrics::ScoreReport> collect_scores(const fs::path& root) {
  std::vector<fs::path> files;
  if (fs::exists(root)) {
    for (const auto& ds : fs::directory_iterator(root)) {
      if (!ds.is_directory()) continue;
      for (const auto& sub : fs::directory_iterator(ds.path())) {
        if (fs::exists(sub.path() / "scores.json")) files.push_back(sub.path() / "scores.json");
      }
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<metrics::ScoreReport> reports;
  for (const auto& f : files) {
    auto r = metrics::report_from_json(Json::parse(read_file(f)));
    auto it = std::find_if(reports.begin(), reports.end(), [&](const auto& x) {
      return x.dataset == r.dataset && x.model_name == r.model_name;
    });
    if (it == reports.end()) {
      reports.push_back(std::move(r));
      continue;
    }
    for (auto& s : r.scenarios) {
      std::erase_if(it->scenarios, [&](const auto& x) { return x.scenario == s.scenario; });
      it->scenarios.push_back(std::move(s));
    }
  }
  for (auto& r : reports) {
    std::sort(r.scenarios.begin(), r.scenarios.end(),
              [](const auto& a, const auto& b) { return a.scenario < b.scenario; });
  }
  return reports;
}

void stage_report(Context& ctx) {
  const auto reports = collect_scores(ctx.layout.root);
  const auto rendered = metrics::render_report(reports);
  const auto dir = ctx.layout.report_dir();
  fs::create_directories(dir);
  write_file_atomic(dir / "report.txt", rendered.text);
  write_file_atomic(dir / "report.csv", rendered.csv);
  write_file_atomic(dir / "gains.csv", rendered.gains_csv);
  write_file_atomic(dir / "report.json", rendered.json);
  record_stage(dir, ctx.layout.root,
               {"report", {}, {dir / "report.txt", dir / "report.csv", dir / "gains.csv",
                               dir / "report.json"}, {}, {}});
  ctx.out << rendered.text;
}

void write_baseline(Context& ctx, const fs::path& dir, const SplitCorpus& split,
                    const LabelSchema& schema, std::vector<fs::path> inputs) {
  const auto& cfg = ctx.config.baseline;
  const auto result = baseline::ab_evaluate(split, cfg.features, cfg.hyper);
  fs::create_directories(dir);
  baseline::save_model(result.cls, dir / "cls.model");
  baseline::save_model(result.clsp, dir / "clsp.model");
  for (auto [model, s] : {std::pair{&result.cls, ScenarioId::kCLS},
                          std::pair{&result.clsp, ScenarioId::kCLSP}}) {
    const auto preds = baseline::predict_partition(*model, split.test, s);
    write_lines(dir / ("predictions_" + std::string(scenario_key(s)) + ".jsonl"),
                [&](std::ostream& os) {
                  for (std::size_t i = 0; i < preds.size(); ++i) {
                    write_jsonl_line(os, parser::prediction_to_json(preds[i], schema), i);
                  }
                });
  }
  auto report_json = metrics::report_to_json(result.report, &schema);
  report_json["gain_pct"] = result.gain ? OrderedJson(*result.gain) : OrderedJson();
  write_json(dir / "scores.json", report_json);
  record_stage(dir, ctx.layout.root,
               {"baseline", std::move(inputs),
                {dir / "cls.model", dir / "clsp.model", dir / "predictions_cls.jsonl",
                 dir / "predictions_clsp.jsonl", dir / "scores.json"},
                {{"train_seed", cfg.hyper.seed}, {"split_seed", split.split_seed}},
                {{"epochs", cfg.hyper.epochs},
                 {"learning_rate", cfg.hyper.learning_rate},
                 {"l2", cfg.hyper.l2},
                 {"hash_dim", cfg.features.hash_dim},
                 {"ngram_max", cfg.features.ngram_max}}});
  ctx.out << fmt::format("baseline {}: CLS {:.2f}, CLS-P {:.2f}, gain {}\n", result.report.dataset,
                         100 * result.f1_cls, 100 * result.f1_clsp,
                         result.gain ? fmt::format("{:.2f}%", *result.gain) : "n/a (CLS scored 0)");
}

void stage_baseline(Context& ctx, const DatasetEntry& d) {
  const auto schema = LabelSchema::load(d.schema);
  const auto split = load_split(ctx, d, schema);
  std::vector<fs::path> inputs;
  for (auto p : corpus::kAllPartitions) {
    inputs.push_back(ctx.layout.split_dir(d.name) / (std::string(corpus::partition_name(p)) + ".jsonl"));
  }
  write_baseline(ctx, ctx.layout.baseline_dir(d.name), split, schema, inputs);
}

void stage_baseline_synthetic(Context& ctx, const std::string& kind) {
  baseline::SyntheticSpec spec;
  spec.seed = ctx.config.seed;
  AnnotationCorpus c;
  if (kind == "persona") {
    c = baseline::make_persona_corpus(spec);
  } else if (kind == "control") {
    c = baseline::make_single_rule_corpus(spec);
  } else {
    throw ConfigError("--synthetic must be 'persona' or 'control'");
  }
  const auto split = corpus::clean_and_split(c, ctx.config.outlier_threshold, ctx.config.ratios,
                                             ctx.config.seed);
  write_baseline(ctx, ctx.layout.root / ("synthetic-" + kind) / "baseline", split, c.schema, {});
}

// ---- direct-mode variants ----

void direct_parse(Context& ctx, const Options& o) {
  const auto schema = LabelSchema::load(o.schema);
  const auto unmatched = parse_file(o.input, o.output, schema);
  ctx.out << "parse: " << unmatched << " responses with unmatched tokens\n";
}

void direct_eval(Context& ctx, const Options& o) {
  const auto schema = LabelSchema::load(o.schema);
  require_file(o.gold, "--gold");
  require_file(o.predictions, "--predictions");
  const auto gold = corpus::ingest_file(o.gold, schema);
  const auto preds = parser::read_predictions(o.predictions, schema);
  std::optional<ScenarioId> s;
  if (!o.scenarios.empty()) s = parse_scenario(o.scenarios.front());
  if (!s && !preds.empty()) s = parse_scenario(preds.front().scenario);
  if (!s) throw ConfigError("cannot tell the scenario; pass --scenario");
  metrics::ScoreReport report{schema.dataset_name(), ctx.config.model_name, {}};
  report.scenarios.push_back(metrics::score_scenario(*s, gold, preds));
  if (!o.output.empty()) write_json(o.output, metrics::report_to_json(report, &schema));
  ctx.out << metrics::render_report(std::span(&report, 1)).text;
}

// ---- wiring ----

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "TOML run config");
  cmd->add_option("--dataset", o.datasets, "Restrict to these datasets (repeatable)");
  cmd->add_option("--seed", o.seed, "Seed for splitting, few-shot draws and training");
  cmd->add_option("--scenario", o.scenarios, "Scenarios to run (repeatable), e.g. q0s, lmp");
  cmd->add_option("--output-dir", o.output_dir, "Artifact root");
  cmd->add_option("--schema", o.schema, "Label schema (config-free mode)");
  cmd->add_option("--name", o.name, "Dataset name (config-free mode)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Personalized multi-label evaluation harness", "perseval"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PERSEVAL_VERSION);

  auto* ingest = app.add_subcommand("ingest", "Import a dataset into the normalized format");
  add_common(ingest, o);
  ingest->add_option("--input", o.input, "Raw CSV or normalized JSONL");
  ingest->add_option("--format", o.format, "csv or jsonl (default: by extension)");

  auto* clean = app.add_subcommand("clean", "Drop outlier annotators");
  add_common(clean, o);
  clean->add_option("--threshold", o.threshold, "Outlier threshold as a fraction of the max");

  auto* split = app.add_subcommand("split", "Text-disjoint split with annotator coverage");
  add_common(split, o);

  auto* gen = app.add_subcommand("gen-prompts", "Render prompts for each scenario");
  add_common(gen, o);
  gen->add_option("--templates", o.templates_dir, "Template root");

  auto* query = app.add_subcommand("query", "Send query-scenario prompts to the endpoint");
  add_common(query, o);

  auto* parse = app.add_subcommand("parse", "Parse raw responses into label sets");
  add_common(parse, o);
  parse->add_option("--input", o.input, "Responses JSONL (config-free mode)");
  parse->add_option("--output", o.output, "Predictions JSONL (config-free mode)");

  auto* eval = app.add_subcommand("eval", "Score predictions against gold annotations");
  add_common(eval, o);
  eval->add_option("--gold", o.gold, "Gold JSONL (config-free mode)");
  eval->add_option("--predictions", o.predictions, "Predictions JSONL (config-free mode)");
  eval->add_option("--output", o.output, "Write the score report JSON here");
  eval->add_option("--model", o.model, "Model name shown in the report");

  auto* report = app.add_subcommand("report", "Collect scores into tables and gain rows");
  add_common(report, o);

  auto* base = app.add_subcommand("baseline", "Train and compare CLS / CLS-P linear baselines");
  add_common(base, o);
  base->add_option("--epochs", o.epochs, "Training epochs");
  base->add_option("--synthetic", o.synthetic, "persona or control: use a generated corpus");

  auto* all = app.add_subcommand("run-all", "Run every stage for every configured dataset");
  add_common(all, o);
  all->add_option("--templates", o.templates_dir, "Template root");
  all->add_option("--model", o.model, "Model name shown in the report");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::kConfig);
  }

  try {
    const bool direct_parse_mode = parse->parsed() && !o.input.empty();
    const bool direct_eval_mode = eval->parsed() && !o.gold.empty();
    Context ctx{build_config(o), {}, {}, out, err};
    ctx.layout.root = ctx.config.output_dir;
    ctx.datasets = selected_datasets(ctx.config, o);

    if (direct_parse_mode) {
      if (o.schema.empty() || o.output.empty()) throw ConfigError("parse --input needs --schema and --output");
      direct_parse(ctx, o);
      return 0;
    }
    if (direct_eval_mode) {
      if (o.schema.empty() || o.predictions.empty()) {
        throw ConfigError("eval --gold needs --schema and --predictions");
      }
      direct_eval(ctx, o);
      return 0;
    }
    if (base->parsed() && !o.synthetic.empty()) {
      stage_baseline_synthetic(ctx, o.synthetic);
      return 0;
    }
    if (report->parsed()) {
      stage_report(ctx);
      return 0;
    }
    if (ctx.datasets.empty()) throw ConfigError("no dataset: pass --config or --schema");

    for (const auto& d : ctx.datasets) {
      if (ingest->parsed()) stage_ingest(ctx, d);
      if (clean->parsed()) stage_clean(ctx, d);
      if (split->parsed()) stage_split(ctx, d);
      if (base->parsed()) stage_baseline(ctx, d);
      for (auto s : ctx.config.scenarios) {
        if (gen->parsed()) stage_gen_prompts(ctx, d, s);
        if (query->parsed()) stage_query(ctx, d, s);
        if (parse->parsed()) stage_parse(ctx, d, s);
        if (eval->parsed()) stage_eval(ctx, d, s);
      }
      if (all->parsed()) {
        stage_ingest(ctx, d);
        stage_clean(ctx, d);
        stage_split(ctx, d);
        for (auto s : ctx.config.scenarios) stage_gen_prompts(ctx, d, s);
        for (auto s : ctx.config.scenarios) {
          const auto dir = ctx.layout.scenario_dir(d.name, s);
          if (is_query(s) && ctx.config.endpoint) stage_query(ctx, d, s);
          if (!fs::exists(dir / "responses.jsonl")) continue;
          stage_parse(ctx, d, s);
          stage_eval(ctx, d, s);
        }
        stage_baseline(ctx, d);
      }
    }
    if (all->parsed()) stage_report(ctx);
    return ctx.endpoint_failures ? static_cast<int>(ErrorKind::kEndpoint) : 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::kInternal);
  }
}

}  // namespace perseval::cli
