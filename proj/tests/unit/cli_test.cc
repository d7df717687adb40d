#include <gtest/gtest.h>

#include <fmt/format.h>

#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.h"
#include "mock_server.h"
#include "oracles.h"
#include "perseval/cli/commands.h"
#include "perseval/cli/run_config.h"
#include "perseval/common/digest.h"
#include "perseval/common/error.h"
#include "perseval/corpus/ingest.h"

namespace perseval::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "perseval");
  std::ostringstream out, err;
  const int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

fs::path fixture_dir(const std::string& ds) { return fixture::source_dir() / "tests" / "fixtures" / ds; }
std::string schema_path(const std::string& ds) {
  return (fixture::source_dir() / "schemas" / (ds + ".json")).string();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) n += !line.empty();
  return n;
}

// Removes every "timestamp" member, recursively.
Json strip_timestamps(Json j) {
  if (j.is_object()) {
    j.erase("timestamp");
    for (auto& [k, v] : j.items()) v = strip_timestamps(v);
  }
  return j;
}

TEST(Cli, EvalOnFixturePrintsOracleF1) {
  fixture::TempDir tmp("cli");
  const auto ds = std::string("goemotions");
  const auto schema = fixture::schema(ds);
  const auto gold = corpus::ingest_file(fixture_dir(ds) / "test.jsonl", schema);

  // hand-made predictions: one exact, one partial, one empty
  const std::vector<std::vector<std::string>> predicted{{"joy"}, {"anger", "sadness"}, {}};
  ASSERT_EQ(gold.records.size(), predicted.size());
  {
    std::ofstream os(tmp / "preds.jsonl");
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      Json j{{"text_id", gold.records[i].text_id},
             {"annotator_id", gold.records[i].annotator_id},
             {"scenario", "q0s"},
             {"raw_response", fmt::format("{}", fmt::join(predicted[i], ", "))}};
      os << j.dump() << "\n";
    }
  }
  std::vector<oracle::StringSet> g, p;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const auto names = corpus::label_names(gold.records[i].labels, schema);
    g.emplace_back(names.begin(), names.end());
    p.emplace_back(predicted[i].begin(), predicted[i].end());
  }
  const auto expected = oracle::brute_force_f1(g, p, schema.labels());

  const auto parsed = run({"parse", "--schema", schema_path(ds), "--input", (tmp / "preds.jsonl").string(),
                           "--output", (tmp / "parsed.jsonl").string()});
  ASSERT_EQ(parsed.status, 0) << parsed.err;
  const auto r = run({"eval", "--schema", schema_path(ds), "--gold", (fixture_dir(ds) / "test.jsonl").string(),
                      "--predictions", (tmp / "parsed.jsonl").string(), "--model", "fixture",
                      "--output", (tmp / "scores.json").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find(fmt::format("{:.2f}", 100 * expected.macro)), std::string::npos) << r.out;
  const auto scores = Json::parse(read_file(tmp / "scores.json"));
  EXPECT_NEAR(scores["scenarios"][0]["f1_macro"].get<double>(), expected.macro, 1e-12);
}

TEST(Cli, AdapterStyleLabelArraysAreScored) {
  fixture::TempDir tmp("cli");
  const auto ds = std::string("unhealthy_conversations");
  const auto schema = fixture::schema(ds);
  const auto gold = corpus::ingest_file(fixture_dir(ds) / "test.jsonl", schema);
  {
    std::ofstream os(tmp / "adapter.jsonl");
    for (const auto& rec : gold.records) {
      os << Json{{"text_id", rec.text_id},
                 {"annotator_id", rec.annotator_id},
                 {"scenario", "clsp"},
                 {"labels", corpus::label_names(rec.labels, schema)}}
                .dump()
         << "\n";
    }
  }
  const auto r = run({"eval", "--schema", schema_path(ds), "--gold", (fixture_dir(ds) / "test.jsonl").string(),
                      "--predictions", (tmp / "adapter.jsonl").string(), "--output",
                      (tmp / "s.json").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto s = Json::parse(read_file(tmp / "s.json"))["scenarios"][0];
  EXPECT_EQ(s["scenario"], "clsp");
  // perfect predictions: every label with support scores 1
  EXPECT_DOUBLE_EQ(s["f1_macro_excl"].get<double>(), 1.0);
}

class PipelineTest : public ::testing::Test {
 protected:
  fixture::ScopedEnv no_proxy_{"NO_PROXY", "127.0.0.1,localhost"};
  fixture::TempDir tmp_{"pipeline"};
  mock::MockEndpoint server_;

  void SetUp() override {
    // 40 texts x 5 annotators drawn from a handful of emotions
    const auto schema = fixture::schema("goemotions");
    std::mt19937_64 rng(7);
    std::ofstream os(tmp_ / "input.jsonl");
    const std::vector<std::string> pool{"joy", "anger", "sadness", "gratitude", "neutral", "surprise"};
    for (int t = 0; t < 40; ++t) {
      for (int u = 1; u <= 5; ++u) {
        std::vector<std::string> labels{pool[rng() % pool.size()]};
        if (rng() % 3 == 0) labels.push_back(pool[rng() % pool.size()]);
        os << Json{{"text_id", fmt::format("x{:02}", t)},
                   {"text", fmt::format("sample text {} about thing {}", t, t % 7)},
                   {"annotator_id", fmt::format("a{}", u)},
                   {"labels", labels}}
                  .dump()
           << "\n";
      }
    }
    server_.set_handler([](const std::string& prompt, int) {
      return mock::Reply{200, mock::completion_body(prompt.size() % 2 ? "joy, anger" : "Sadness"), ""};
    });
  }

  std::string write_config(const std::string& extra = "") {
    const auto text = fmt::format(R"(output_dir = "{}"
templates_dir = "{}"
seed = 5
scenarios = ["q0s", "q1s", "lmp", "cls"]

[[dataset]]
name = "goemotions"
schema = "{}"
input = "input.jsonl"

[baseline]
epochs = 3
hash_dim = 4096

[endpoint]
base_url = "{}"
model = "mock-model"
max_parallel = 4
cache_dir = "cache"
{})",
                                  (tmp_ / "runs").string(), (fixture::source_dir() / "templates").string(),
                                  schema_path("goemotions"), server_.base_url(), extra);
    write_file_atomic(tmp_ / "run.toml", text);
    return (tmp_ / "run.toml").string();
  }

  std::map<std::string, Json> manifests() const {
    std::map<std::string, Json> out;
    for (const auto& e : fs::recursive_directory_iterator(tmp_ / "runs")) {
      if (e.path().filename() == "manifest.json") {
        out[e.path().lexically_relative(tmp_ / "runs").string()] =
            strip_timestamps(Json::parse(read_file(e.path())));
      }
    }
    return out;
  }
};

TEST_F(PipelineTest, RunAllIsReproducible) {
  const auto cfg = write_config();
  const auto first = run({"run-all", "--config", cfg});
  ASSERT_EQ(first.status, 0) << first.err << first.out;
  const auto m1 = manifests();
  const int hits = server_.hits();
  EXPECT_GT(hits, 0);

  const auto root = tmp_ / "runs" / "goemotions";
  for (const char* f : {"corpus/corpus.jsonl", "corpus/cleaned.jsonl", "split/test.jsonl", "q0s/prompts.jsonl",
                        "q0s/responses.jsonl", "q0s/predictions.jsonl", "q0s/scores.json", "lmp/train.jsonl",
                        "cls/test.jsonl", "baseline/scores.json", "baseline/clsp.model"}) {
    EXPECT_TRUE(fs::exists(root / f)) << f;
  }
  EXPECT_FALSE(fs::exists(root / "lmp" / "responses.jsonl"));
  EXPECT_TRUE(fs::exists(tmp_ / "runs" / "report" / "report.txt"));
  EXPECT_EQ(line_count(root / "q0s" / "prompts.jsonl"), line_count(root / "split" / "test.jsonl"));

  const auto second = run({"run-all", "--config", cfg});
  ASSERT_EQ(second.status, 0) << second.err;
  EXPECT_EQ(server_.hits(), hits) << "second run must be served from the cache";
  const auto m2 = manifests();
  ASSERT_EQ(m1.size(), m2.size());
  for (const auto& [k, v] : m1) EXPECT_EQ(v.dump(2), m2.at(k).dump(2)) << k;
  EXPECT_GE(m1.size(), 6U);
  const auto& split_manifest = m1.at("goemotions/split/manifest.json");
  EXPECT_EQ(split_manifest["stages"]["split"]["seeds"]["split_seed"], 5);
}

TEST_F(PipelineTest, StagesComposeThroughFiles) {
  const auto cfg = write_config();
  for (const char* stage : {"ingest", "clean", "split"}) {
    const auto r = run({stage, "--config", cfg});
    ASSERT_EQ(r.status, 0) << stage << ": " << r.err;
  }
  const auto input_digest = sha256_file(tmp_ / "input.jsonl");
  auto r = run({"gen-prompts", "--config", cfg, "--scenario", "q2s"});
  ASSERT_EQ(r.status, 0) << r.err;
  r = run({"query", "--config", cfg, "--scenario", "q2s"});
  ASSERT_EQ(r.status, 0) << r.err;
  r = run({"parse", "--config", cfg, "--scenario", "q2s"});
  ASSERT_EQ(r.status, 0) << r.err;
  r = run({"eval", "--config", cfg, "--scenario", "q2s"});
  ASSERT_EQ(r.status, 0) << r.err;
  r = run({"report", "--config", cfg});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("goemotions"), std::string::npos);
  EXPECT_EQ(sha256_file(tmp_ / "input.jsonl"), input_digest);
}

TEST_F(PipelineTest, EmptyTestSplitGivesEmptyPromptFile) {
  const auto cfg = write_config();
  ASSERT_EQ(run({"run-all", "--config", cfg, "--scenario", "cls"}).status, 0);
  const auto split = tmp_ / "runs" / "goemotions" / "split";
  write_file_atomic(split / "test.jsonl", "");
  const auto r = run({"gen-prompts", "--config", cfg, "--scenario", "q0s"});
  EXPECT_EQ(r.status, 0) << r.err;
  const auto out = tmp_ / "runs" / "goemotions" / "q0s" / "prompts.jsonl";
  ASSERT_TRUE(fs::exists(out));
  EXPECT_EQ(fs::file_size(out), 0U);
}

TEST_F(PipelineTest, EndpointFailureExitsThree) {
  server_.set_handler([](const std::string&, int) { return mock::Reply{400, "nope", ""}; });
  const auto cfg = write_config();
  for (const char* stage : {"ingest", "clean", "split"}) ASSERT_EQ(run({stage, "--config", cfg}).status, 0);
  ASSERT_EQ(run({"gen-prompts", "--config", cfg, "--scenario", "q0s"}).status, 0);
  const auto r = run({"query", "--config", cfg, "--scenario", "q0s"});
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.err.find("failed"), std::string::npos);
}

TEST_F(PipelineTest, KeyInConfigIsAConfigError) {
  const auto cfg = write_config("api_key = \"sk-abc\"");
  const auto r = run({"split", "--config", cfg});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("environment"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  fixture::TempDir tmp("cli");
  EXPECT_EQ(run({"no-such-command"}).status, 1);
  EXPECT_EQ(run({"split", "--config", (tmp / "missing.toml").string()}).status, 1);
  write_file_atomic(tmp / "bad.toml", "seed = [unclosed");
  EXPECT_EQ(run({"split", "--config", (tmp / "bad.toml").string()}).status, 1);

  // data error: malformed input
  write_file_atomic(tmp / "broken.jsonl", "{\"text_id\": \"a\"\n");
  const auto r = run({"ingest", "--schema", schema_path("goemotions"), "--input", (tmp / "broken.jsonl").string(),
                      "--output-dir", (tmp / "runs").string()});
  EXPECT_EQ(r.status, 2);
  EXPECT_FALSE(r.err.empty());

  // data error: stage run before its inputs exist
  const auto s = run({"split", "--schema", schema_path("goemotions"), "--output-dir", (tmp / "runs").string()});
  EXPECT_EQ(s.status, 2) << s.err;
}

TEST(Cli, SyntheticBaselineReportsGain) {
  fixture::TempDir tmp("cli");
  const auto r = run({"baseline", "--synthetic", "persona", "--output-dir", (tmp / "runs").string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto s = Json::parse(read_file(tmp / "runs" / "synthetic-persona" / "baseline" / "scores.json"));
  EXPECT_GT(s["gain_pct"].get<double>(), 20.0);
  EXPECT_NE(r.out.find("gain"), std::string::npos);
}

TEST(RunConfigParsing, TomlKeysAndOverrides) {
  fixture::TempDir tmp("cfg");
  write_file_atomic(tmp / "in.jsonl", "");
  const auto c = RunConfig::from_toml_text(fmt::format(R"(seed = 11
model_name = "m"
scenarios = ["lm", "clsp"]
[[dataset]]
name = "goemotions"
schema = "{}"
input = "in.jsonl"
[cleaning]
outlier_threshold = 0.1
[split]
train = 0.7
validation = 0.15
test = 0.15
[baseline]
epochs = 4
learning_rate = 0.2
hash_dim = 1024
ngram_max = 1
)",
                                                           schema_path("goemotions")),
                                               tmp.path());
  EXPECT_EQ(c.seed, 11U);
  EXPECT_EQ(c.scenarios, (std::vector<ScenarioId>{ScenarioId::kLM, ScenarioId::kCLSP}));
  EXPECT_EQ(c.dataset("goemotions").input, tmp / "in.jsonl");
  EXPECT_DOUBLE_EQ(c.outlier_threshold, 0.1);
  EXPECT_DOUBLE_EQ(c.ratios.validation, 0.15);
  EXPECT_EQ(c.baseline.hyper.epochs, 4);
  EXPECT_EQ(c.baseline.features.hash_dim, 1024U);
  EXPECT_EQ(c.baseline.features.ngram_max, 1);
  EXPECT_FALSE(c.endpoint);
  EXPECT_NO_THROW(c.validate());
  EXPECT_THROW(c.dataset("other"), ConfigError);
  EXPECT_THROW(RunConfig::from_toml_text("scenarios = [\"q9s\"]", tmp.path()), ConfigError);
}

TEST(RunConfigParsing, UnknownKeysAreRejected) {
  fixture::TempDir tmp("cfg");
  EXPECT_THROW(RunConfig::from_toml_text("sed = 1", tmp.path()), ConfigError);
  EXPECT_THROW(RunConfig::from_toml_text("[split]\ntrian = 0.8", tmp.path()), ConfigError);
  EXPECT_THROW(RunConfig::from_toml_text("[endpoint]\nbase_url = \"http://x\"\nmodel = \"m\"\ntimeout_ms = 5",
                                         tmp.path()),
               ConfigError);
}

TEST(RunConfigParsing, ExampleConfigParses) {
  const auto c = RunConfig::load(fixture::source_dir() / "configs" / "example.toml");
  ASSERT_EQ(c.datasets.size(), 2U);
  EXPECT_EQ(c.datasets[0].format, "csv");
  ASSERT_TRUE(c.endpoint);
  EXPECT_EQ(c.endpoint->timeout, std::chrono::milliseconds(60'000));
  EXPECT_EQ(c.endpoint->api_key_env, "OPENAI_API_KEY");
  EXPECT_EQ(c.model_name, c.endpoint->model_name);
  EXPECT_EQ(c.scenarios.size(), kAllScenarios.size());
  EXPECT_EQ(c.baseline.hyper.threads, 4U);
}

}  // namespace
}  // namespace perseval::cli
