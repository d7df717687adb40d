#include <gtest/gtest.h>

#include <random>

#include "fixtures.h"
#include "oracles.h"
#include "perseval/common/error.h"
#include "perseval/parser/prediction.h"
#include "perseval/parser/response_parser.h"

namespace perseval::parser {
namespace {

using corpus::LabelSchema;
using corpus::LabelSet;

const LabelSchema& goemotions() {
  static const auto s = fixture::schema("goemotions");
  return s;
}

const LabelSchema& unhealthy() {
  static const auto s = fixture::schema("unhealthy_conversations");
  return s;
}

std::vector<std::string> names(const LabelSet& s, const LabelSchema& schema) {
  return corpus::label_names(s, schema);
}

TEST(NormalizeToken, Examples) {
  EXPECT_EQ(normalize_token("  Joy."), "joy");
  EXPECT_EQ(normalize_token("- unfair generalization"), "unfair generalization");
  EXPECT_EQ(normalize_token("ADMIRATION"), "admiration");
  EXPECT_EQ(normalize_token("2. sarcastic;"), "sarcastic");
  EXPECT_EQ(normalize_token("* - joy ."), "joy");
  EXPECT_EQ(normalize_token(""), "");
}

TEST(NormalizeToken, Idempotent) {
  std::mt19937_64 rng(1);
  const std::string alphabet = " -*.;:1234aBc\t\n";
  for (int i = 0; i < 20000; ++i) {
    std::string s;
    const int len = static_cast<int>(rng() % 12);
    for (int k = 0; k < len; ++k) s += alphabet[rng() % alphabet.size()];
    const auto once = normalize_token(s);
    ASSERT_EQ(normalize_token(once), once) << "input: [" << s << "]";
  }
}

TEST(Parse, CleanList) {
  const auto r = parse_label_list("admiration, joy", goemotions());
  EXPECT_EQ(names(r.labels, goemotions()), (std::vector<std::string>{"admiration", "joy"}));
  EXPECT_TRUE(r.unmatched.empty());
  EXPECT_TRUE(r.exact);
}

TEST(Parse, EmptyString) {
  const auto r = parse_label_list("", goemotions());
  EXPECT_TRUE(r.labels.empty());
  EXPECT_TRUE(r.unmatched.empty());
  EXPECT_FALSE(r.exact);
}

TEST(Parse, PreambleAndTrailingConjunction) {
  const auto r = parse_label_list("The labels are: hostile,, sarcastic and dismissive", unhealthy());
  EXPECT_EQ(names(r.labels, unhealthy()), (std::vector<std::string>{"hostile", "sarcastic"}));
  EXPECT_EQ(r.unmatched, (std::vector<std::string>{"and dismissive"}));
  EXPECT_FALSE(r.exact);
}

TEST(Parse, MultiWordLabelsAreWholeTokens) {
  const auto r = parse_label_list("unfair generalization, generalization", unhealthy());
  EXPECT_EQ(names(r.labels, unhealthy()),
            (std::vector<std::string>{"generalization", "unfair generalization"}));
  EXPECT_TRUE(r.exact);
}

TEST(Parse, BulletedNewlineListIsNotExact) {
  const auto r = parse_label_list("- joy\n- Anger.\n", goemotions());
  EXPECT_EQ(names(r.labels, goemotions()), (std::vector<std::string>{"anger", "joy"}));
  EXPECT_TRUE(r.unmatched.empty());
  EXPECT_FALSE(r.exact);
}

TEST(Parse, DuplicatesCollapse) {
  const auto r = parse_label_list("joy, joy, JOY", goemotions());
  EXPECT_EQ(r.labels.size(), 1U);
  EXPECT_FALSE(r.exact);  // "JOY" is not canonical
}

TEST(Parse, GarbageGoesToUnmatched) {
  const auto r = parse_label_list("I cannot decide, sorry", goemotions());
  EXPECT_TRUE(r.labels.empty());
  EXPECT_EQ(r.unmatched, (std::vector<std::string>{"I cannot decide", "sorry"}));
}

TEST(Parse, UnmatchedNeverOverlapsLabels) {
  const auto r = parse_label_list("joy, - joy.", goemotions());
  EXPECT_EQ(r.labels.size(), 1U);
  EXPECT_TRUE(r.unmatched.empty());
}

TEST(Serialize, SchemaOrder) {
  const auto s = corpus::to_label_set({"joy", "anger"}, goemotions());
  EXPECT_EQ(serialize_labels(s, goemotions()), "anger, joy");
  EXPECT_EQ(serialize_labels({}, goemotions()), "");
}

TEST(Serialize, OutsideSchemaThrows) {
  LabelSet s;
  s.insert(40);
  EXPECT_THROW(serialize_labels(s, goemotions()), SerializationError);
}

TEST(Serialize, RoundTripRandomSubsets) {
  std::mt19937_64 rng(9);
  for (const auto* schema : {&goemotions(), &unhealthy()}) {
    for (int i = 0; i < 2000; ++i) {
      const auto bits = rng() & ((std::uint64_t{1} << schema->size()) - 1);
      const auto s = LabelSet::from_bits(bits);
      const auto r = parse_label_list(serialize_labels(s, *schema), *schema);
      ASSERT_EQ(r.labels, s);
      ASSERT_TRUE(r.unmatched.empty());
      ASSERT_EQ(r.exact, !s.empty());
    }
  }
}

std::string random_response(std::mt19937_64& rng, const LabelSchema& schema) {
  static const std::vector<std::string> noise = {
      "the labels are:", "and", "Response:", "- ", "* ", "1. ", ".", ";", " ", "\n", ",",
      "none", "I think", "ÄÖ", "🙂", "\t", ":", "labels: ", "really"};
  std::string s;
  const int parts = static_cast<int>(rng() % 8);
  for (int i = 0; i < parts; ++i) {
    if (rng() % 2) {
      std::string label = schema.labels()[rng() % schema.size()];
      if (rng() % 4 == 0) {
        for (auto& c : label) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      }
      s += label;
    } else {
      s += noise[rng() % noise.size()];
    }
    if (rng() % 3 == 0) s += rng() % 2 ? ", " : "\n";
  }
  return s;
}

TEST(Parse, AgreesWithReferenceTokenizer) {
  std::mt19937_64 rng(2718);
  for (const auto* schema : {&goemotions(), &unhealthy()}) {
    for (int i = 0; i < 200; ++i) {
      const auto raw = random_response(rng, *schema);
      const auto got = parse_label_list(raw, *schema);
      const auto ref = oracle::reference_parse(raw, schema->labels());
      const auto got_names = names(got.labels, *schema);
      ASSERT_EQ(oracle::StringSet(got_names.begin(), got_names.end()), ref.labels) << raw;
      ASSERT_EQ(got.unmatched, ref.unmatched) << raw;
    }
  }
}

TEST(Prediction, JsonRoundTrip) {
  PredictionRecord p;
  p.text_id = "t1";
  p.annotator_id = "a1";
  p.scenario = "q0s";
  p.raw_response = "joy, something";
  parse_prediction(p, goemotions());
  const auto j = prediction_to_json(p, goemotions());
  EXPECT_EQ(j["labels"], Json::array({"joy"}));
  EXPECT_EQ(j["unmatched"], Json::array({"something"}));
  EXPECT_EQ(j["exact"], false);
  const auto back = prediction_from_json(Json::parse(j.dump()), goemotions(), "mem");
  EXPECT_EQ(back.labels, p.labels);
  EXPECT_EQ(back.raw_response, p.raw_response);
  EXPECT_TRUE(back.parsed);
}

TEST(Prediction, ClassificationLinesWithoutRawResponse) {
  const auto j = Json::parse(
      R"({"text_id": "t1", "annotator_id": "a1", "scenario": "cls", "labels": ["anger", "joy"]})");
  const auto p = prediction_from_json(j, goemotions(), "mem");
  EXPECT_TRUE(p.parsed);
  EXPECT_TRUE(p.exact);
  EXPECT_EQ(p.labels.size(), 2U);
}

TEST(Prediction, ErrorRecordsKeepTheirError) {
  PredictionRecord p{"t1", "a1", "q0s", std::nullopt, {}, {}, false, false, "HTTP 400: bad"};
  const auto j = prediction_to_json(p, goemotions());
  const auto back = prediction_from_json(Json::parse(j.dump()), goemotions(), "mem");
  ASSERT_TRUE(back.error);
  EXPECT_EQ(*back.error, "HTTP 400: bad");
}

}  // namespace
}  // namespace perseval::parser
