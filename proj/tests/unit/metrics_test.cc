#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <random>

#include "fixtures.h"
#include "oracles.h"
#include "perseval/common/error.h"
#include "perseval/metrics/f1.h"
#include "perseval/metrics/gain.h"
#include "perseval/metrics/report.h"

namespace perseval::metrics {
namespace {

using parser::PredictionRecord;

LabelSchema five() { return LabelSchema("five", {"a", "b", "c", "d", "e"}, "label"); }

LabelSet bits(std::uint64_t b) { return LabelSet::from_bits(b); }

oracle::StringSet to_strings(const LabelSet& s, const LabelSchema& schema) {
  const auto n = corpus::label_names(s, schema);
  return {n.begin(), n.end()};
}

TEST(F1, PerfectPredictionIsOne) {
  const auto schema = five();
  std::vector<LabelPair> pairs = {{bits(0b00011), bits(0b00011)}, {bits(0b11100), bits(0b11100)}};
  const auto f = f1_macro(pairs, schema);
  EXPECT_DOUBLE_EQ(f.macro, 1.0);
  EXPECT_DOUBLE_EQ(f.macro_excluding_zero_support, 1.0);
}

TEST(F1, EmptyPredictionsScoreZero) {
  const auto schema = five();
  std::vector<LabelPair> pairs = {{bits(0b00011), {}}, {bits(0b00100), {}}};
  const auto f = f1_macro(pairs, schema);
  EXPECT_EQ(f.macro, 0.0);
  for (double v : f.per_label) EXPECT_EQ(v, 0.0);
}

TEST(F1, ZeroSupportVariant) {
  const auto schema = five();
  // Label a: perfect. Labels b..e: no gold and no prediction -> 0/0 -> 0.
  std::vector<LabelPair> pairs = {{bits(1), bits(1)}};
  const auto f = f1_macro(pairs, schema);
  EXPECT_DOUBLE_EQ(f.macro, 0.2);
  EXPECT_DOUBLE_EQ(f.macro_excluding_zero_support, 1.0);
  EXPECT_EQ(f.supported, (std::vector<bool>{true, false, false, false, false}));
}

TEST(F1, HandComputed) {
  const auto schema = LabelSchema("two", {"x", "y"}, "label");
  // x: tp=1 fp=1 fn=0 -> 2/3. y: tp=0 fp=0 fn=1 -> 0.
  std::vector<LabelPair> pairs = {{bits(0b01), bits(0b01)}, {bits(0b10), bits(0b01)}};
  const auto f = f1_macro(pairs, schema);
  EXPECT_NEAR(f.per_label[0], 2.0 / 3.0, 1e-15);
  EXPECT_EQ(f.per_label[1], 0.0);
  EXPECT_NEAR(f.macro, 1.0 / 3.0, 1e-15);
}

TEST(F1, FiftyRecordsMatchOracle) {
  const auto schema = five();
  std::mt19937_64 rng(50);
  std::vector<LabelPair> pairs;
  std::vector<oracle::StringSet> g, p;
  for (int i = 0; i < 50; ++i) {
    pairs.push_back({bits(rng() & 31), bits(rng() & 31)});
    g.push_back(to_strings(pairs.back().gold, schema));
    p.push_back(to_strings(pairs.back().predicted, schema));
  }
  const auto f = f1_macro(pairs, schema);
  const auto ref = oracle::brute_force_f1(g, p, schema.labels());
  EXPECT_NEAR(f.macro, ref.macro, 1e-12);
  EXPECT_NEAR(f.macro_excluding_zero_support, ref.macro_excl, 1e-12);
  for (std::size_t l = 0; l < 5; ++l) EXPECT_NEAR(f.per_label[l], ref.per_label[l], 1e-12);
}

TEST(F1, CountsAreAMonoid) {
  std::mt19937_64 rng(4);
  ConfusionCounts all(5), left(5), right(5), empty(5);
  for (int i = 0; i < 40; ++i) {
    const auto g = bits(rng() & 31), p = bits(rng() & 31);
    all.add(g, p);
    (i < 17 ? left : right).add(g, p);
  }
  auto merged = left;
  merged.merge(right);
  EXPECT_EQ(merged, all);
  auto with_identity = all;
  with_identity.merge(empty);
  EXPECT_EQ(with_identity, all);
  for (std::size_t l = 0; l < 5; ++l) {
    const auto& c = all.per_label()[l];
    EXPECT_LE(c.tp + c.fn, 40U);
  }
}

TEST(F1, MonotoneUnderCorrection) {
  std::mt19937_64 rng(8);
  const auto schema = five();
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<LabelPair> pairs;
    for (int i = 0; i < 6; ++i) pairs.push_back({bits(rng() & 31), bits(rng() & 31)});
    const auto before = f1_macro(pairs, schema);
    // Flip one wrong bit of one prediction to match gold.
    auto fixed = pairs;
    const auto r = rng() % fixed.size();
    const auto wrong = fixed[r].gold.bits() ^ fixed[r].predicted.bits();
    if (wrong == 0) continue;
    const auto bit = std::uint64_t{1} << std::countr_zero(wrong);
    fixed[r].predicted = bits(fixed[r].predicted.bits() ^ bit);
    const auto after = f1_macro(fixed, schema);
    for (std::size_t l = 0; l < 5; ++l) ASSERT_GE(after.per_label[l] + 1e-15, before.per_label[l]);
  }
}

PredictionRecord pred(std::string t, std::string a, LabelSet labels) {
  PredictionRecord p;
  p.text_id = std::move(t);
  p.annotator_id = std::move(a);
  p.scenario = "q0s";
  p.labels = labels;
  p.parsed = true;
  return p;
}

corpus::AnnotationCorpus gold_corpus() {
  corpus::AnnotationCorpus c{five(), {}, {}};
  c.records = {{"t1", "x", "a1", bits(1)}, {"t1", "x", "a2", bits(2)}, {"t2", "y", "a1", bits(4)}};
  return c;
}

TEST(Join, ScoresPerAnnotatorAndCountsMissing) {
  const auto gold = gold_corpus();
  std::vector<PredictionRecord> preds = {pred("t1", "a2", bits(2)), pred("t1", "a1", bits(1))};
  const auto j = join_predictions(gold, preds);
  EXPECT_EQ(j.pairs.size(), 2U);
  EXPECT_EQ(j.missing_predictions, 1U);
  EXPECT_EQ(j.pairs[0].gold, bits(2));
}

TEST(Join, UnjoinedPredictionNamesPair) {
  const auto gold = gold_corpus();
  std::vector<PredictionRecord> preds = {pred("t9", "a1", bits(1))};
  try {
    join_predictions(gold, preds);
    FAIL();
  } catch (const JoinError& e) {
    EXPECT_NE(std::string(e.what()).find("text_id=t9"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("annotator_id=a1"), std::string::npos);
  }
}

TEST(Join, DuplicatePredictionRejected) {
  const auto gold = gold_corpus();
  std::vector<PredictionRecord> preds = {pred("t1", "a1", bits(1)), pred("t1", "a1", bits(1))};
  EXPECT_THROW(join_predictions(gold, preds), JoinError);
}

TEST(Join, ErroredPredictionsScoreAsEmpty) {
  const auto gold = gold_corpus();
  auto bad = pred("t1", "a1", bits(1));
  bad.error = "HTTP 400";
  std::vector<PredictionRecord> preds = {bad};
  const auto j = join_predictions(gold, preds);
  EXPECT_EQ(j.errored, 1U);
  EXPECT_TRUE(j.pairs[0].predicted.empty());
}

TEST(Gain, Examples) {
  EXPECT_NEAR(gain(43.94, 26.77), 64.14, 0.01);
  EXPECT_NEAR(gain(32.87, 28.99), 13.38, 0.005);
  EXPECT_EQ(gain(0.3, 0.3), 0.0);
  EXPECT_LT(gain(0.2, 0.3), 0.0);
  EXPECT_THROW(gain(0.3, 0.0), UndefinedGainError);
  EXPECT_THROW(gain(0.3, -1.0), UndefinedGainError);
}

TEST(Gain, ScaleInvariant) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.01, 1.0), scale(0.1, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double p = u(rng), b = u(rng), a = scale(rng);
    ASSERT_NEAR(gain(a * p, a * b), gain(p, b), 1e-9 * std::max(1.0, std::abs(gain(p, b))));
  }
}

ScoreReport phi2_goemotions() {
  ScoreReport r{"goemotions", "phi-2", {}};
  ScenarioScore lm, lmp;
  lm.scenario = ScenarioId::kLM;
  lm.f1_macro = 0.2899;
  lmp.scenario = ScenarioId::kLMP;
  lmp.f1_macro = 0.3287;
  r.scenarios = {lm, lmp};
  return r;
}

TEST(Report, GainColumn) {
  const std::vector<ScoreReport> reports = {phi2_goemotions()};
  const auto rows = gain_rows(reports);
  ASSERT_EQ(rows.size(), 1U);
  EXPECT_NEAR(rows[0].gain_pct, 13.38, 0.005);
  const auto r = render_report(reports);
  EXPECT_NE(r.text.find("13.38"), std::string::npos) << r.text;
  EXPECT_NE(r.gains_csv.find("goemotions,phi-2,lm_vs_lmp,28.99,32.87,13.38"), std::string::npos)
      << r.gains_csv;
  EXPECT_NE(r.csv.find("goemotions,phi-2,lm,28.99,"), std::string::npos) << r.csv;
}

TEST(Report, EmptyInputHasHeader) {
  const auto r = render_report({});
  EXPECT_EQ(r.csv, "dataset,model,scenario,f1_macro_pp,f1_macro_excl_pp,n_records,unmatched_rate\n");
  EXPECT_NE(r.text.find("model"), std::string::npos);
}

TEST(Report, CsvIsStable) {
  const std::vector<ScoreReport> reports = {phi2_goemotions()};
  EXPECT_EQ(render_report(reports).csv, render_report(reports).csv);
  EXPECT_EQ(render_report(reports).json, render_report(reports).json);
}

TEST(Report, JsonRoundTrip) {
  auto r = phi2_goemotions();
  r.scenarios[0].per_label = {0.1, 0.2, 0.3, 0.4, 0.5};
  r.scenarios[0].n_records = 12;
  const auto schema = five();
  const auto back = report_from_json(Json::parse(report_to_json(r, &schema).dump()));
  EXPECT_EQ(back.dataset, r.dataset);
  ASSERT_EQ(back.scenarios.size(), 2U);
  EXPECT_EQ(back.scenarios[0].f1_macro, r.scenarios[0].f1_macro);
  EXPECT_EQ(back.scenarios[0].per_label, r.scenarios[0].per_label);
  EXPECT_EQ(back.scenarios[0].n_records, 12U);
}

TEST(Report, UnmatchedRate) {
  const auto gold = gold_corpus();
  auto p1 = pred("t1", "a1", bits(1));
  p1.unmatched = {"junk"};
  std::vector<PredictionRecord> preds = {p1, pred("t1", "a2", bits(2))};
  const auto s = score_scenario(ScenarioId::kQ0S, gold, preds);
  EXPECT_DOUBLE_EQ(s.unmatched_rate, 0.5);
  EXPECT_EQ(s.n_missing, 1U);
  EXPECT_EQ(s.n_records, 2U);
}

}  // namespace
}  // namespace perseval::metrics
