#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "routerlab/io.hpp"
#include "routerlab/types.hpp"

using namespace routerlab;
using routerlab::testing::ans;
using routerlab::testing::level;

namespace {

const char* kLine1 =
    R"({"id":"q1","input_tokens":100,"pre_score":0.4,"slm_samples":[{"answer":" B ","correct":true,"tokens":50,"confidence_level":null,"refusal":false}],"llm":{"correct":true,"tokens":100}})";
const char* kLine2 =
    R"({"id":"q2","input_tokens":80,"slm_samples":[{"answer":null,"correct":false,"tokens":7,"confidence_level":0.7,"refusal":true}],"llm":{"correct":false,"tokens":300}})";
const char* kLine3 =
    R"({"id":"q3","input_tokens":60,"pre_score":null,"slm_samples":[],"llm":null})";

std::string three_lines() { return std::string(kLine1) + "\n" + kLine2 + "\n\n" + kLine3 + "\n"; }

}  // namespace

TEST(ConfidenceLevel, GridRoundTrip) {
  for (int t = 1; t <= 10; ++t) {
    auto c = ConfidenceLevel::from_value(t / 10.0);
    EXPECT_EQ(c.tenths(), t);
  }
  EXPECT_EQ(ConfidenceLevel::from_value(0.7 + 1e-12).tenths(), 7);
  EXPECT_EQ(all_confidence_levels().size(), 10u);
}

TEST(ConfidenceLevel, RejectsOffGrid) {
  EXPECT_THROW(ConfidenceLevel::from_value(0.55), ValidationError);
  EXPECT_THROW(ConfidenceLevel::from_value(0.0), ValidationError);
  EXPECT_THROW(ConfidenceLevel::from_value(1.1), ValidationError);
  EXPECT_THROW(ConfidenceLevel::from_tenths(11), ValidationError);
}

TEST(SampleRecord, RefusalWithAnswerIsRejected) {
  SampleRecord s = SampleRecord::refused(5);
  s.answer = "b";
  try {
    validate(s, "q9");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("refusal"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("q9"), std::string::npos);
  }
}

TEST(SampleRecord, AnswerRequiredUnlessRefusal) {
  SampleRecord s;
  s.answer.reset();
  EXPECT_THROW(validate(s), ValidationError);
  SampleRecord zero = ans("a", true, 1);
  zero.tokens = 0;
  EXPECT_THROW(validate(zero), ValidationError);
}

TEST(Pricing, RejectsNonPositive) {
  PricingSchedule p;
  p.llm_out = 0.0;
  EXPECT_THROW(p.validate(), ValidationError);
  EXPECT_NO_THROW(PricingSchedule{}.validate());
}

TEST(CanonicalAnswer, TrimsAndLowercases) { EXPECT_EQ(canonical_answer("  Paris\t"), "paris"); }

TEST(ReadDataset, ThreeValidLines) {
  std::istringstream in(three_lines());
  Dataset d = read_dataset(in);
  ASSERT_EQ(d.questions.size(), 3u);
  EXPECT_EQ(d.profile.n_questions, 3u);
  EXPECT_EQ(d.questions[0].slm_samples[0].answer, "b");
  EXPECT_DOUBLE_EQ(*d.questions[0].pre_score, 0.4);
  EXPECT_FALSE(d.questions[2].pre_score.has_value());
  EXPECT_FALSE(d.questions[2].llm.has_value());
  EXPECT_EQ(d.questions[1].slm_samples[0].confidence->tenths(), 7);
  EXPECT_EQ(d.profile.total_input_tokens, 240);
}

TEST(ReadDataset, AverageLlmTokens) {
  std::istringstream in(std::string(kLine1) + "\n" + kLine2 + "\n");
  Dataset d = read_dataset(in);
  ASSERT_TRUE(d.profile.avg_llm_tokens.has_value());
  EXPECT_DOUBLE_EQ(*d.profile.avg_llm_tokens, 200.0);
}

TEST(ReadDataset, RefusalWithAnswerReportsLine) {
  std::string bad =
      R"({"id":"qx","input_tokens":5,"slm_samples":[{"answer":"B","correct":false,"tokens":3,"refusal":true}]})";
  std::istringstream in(std::string(kLine1) + "\n" + bad + "\n");
  try {
    read_dataset(in);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("refusal"), std::string::npos) << msg;
    EXPECT_NE(msg.find("qx"), std::string::npos) << msg;
  }
}

TEST(ReadDataset, MalformedJsonReportsLine) {
  std::istringstream in(std::string(kLine1) + "\n{not json\n");
  try {
    read_dataset(in);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ReadDataset, DuplicateIdRejected) {
  std::istringstream in(std::string(kLine1) + "\n" + kLine1 + "\n");
  EXPECT_THROW(read_dataset(in), ValidationError);
}

TEST(ReadDataset, OffGridConfidenceRejected) {
  std::string bad =
      R"({"id":"q","input_tokens":5,"slm_samples":[{"answer":"a","correct":true,"tokens":3,"confidence_level":0.55,"refusal":false}]})";
  std::istringstream in(bad);
  EXPECT_THROW(read_dataset(in), ValidationError);
}

TEST(ReadDataset, UnknownFieldWarns) {
  std::string line =
      R"({"id":"q","input_tokens":5,"extra":1,"slm_samples":[{"answer":"a","correct":true,"tokens":3,"refusal":false,"why":2}]})";
  std::vector<std::string> warnings;
  std::istringstream in(line);
  read_dataset(in, [&](std::string_view w) { warnings.emplace_back(w); });
  ASSERT_EQ(warnings.size(), 2u);
  EXPECT_NE(warnings[0].find("extra"), std::string::npos);
  EXPECT_NE(warnings[1].find("why"), std::string::npos);
}

TEST(ReadDataset, RoundTripThroughWriter) {
  std::istringstream in(three_lines());
  Dataset d = read_dataset(in);
  std::ostringstream out;
  write_dataset(out, d.questions);
  std::istringstream again(out.str());
  Dataset d2 = read_dataset(again);
  EXPECT_EQ(d.questions, d2.questions);
}

TEST(Profile, NoLlmDataMeansNoAverage) {
  std::istringstream in{std::string(kLine3)};
  Dataset d = read_dataset(in);
  EXPECT_FALSE(d.profile.avg_llm_tokens.has_value());
  EXPECT_THROW(d.profile.total_llm_cost(PricingSchedule{}), Error);
}

TEST(Pricing, FromJson) {
  auto p = pricing_from_json(nlohmann::json::parse(
      R"({"slm_in":0.1,"slm_out":0.2,"llm_in":0.3,"llm_out":0.4})"));
  EXPECT_DOUBLE_EQ(p.slm_in, 0.1);
  EXPECT_DOUBLE_EQ(p.llm_out, 0.4);
  EXPECT_THROW(pricing_from_json(nlohmann::json::parse(R"({"slm_in":0.1})")), ValidationError);
}

TEST(Curve, FormatSinglePoint) {
  CurvePoint p{PointKind::kThreshold, 0.5, 0.3, 0.9, 4};
  const std::vector<CurvePoint> pts{p};
  EXPECT_EQ(format_curve(pts), "tau,cost,performance,n_routed\n0.5,0.300000,0.900000,4\n");
}

TEST(Curve, EmptyIsError) {
  EXPECT_THROW(format_curve(std::vector<CurvePoint>{}), Error);
}

TEST(Curve, ThirteenRowsOrderedWithSentinels) {
  Curve c;
  c.slm_only = {PointKind::kSlmOnly, 0, 0.07, 0.6, 0};
  c.llm_only = {PointKind::kLlmOnly, 0, 1.0, 0.9, 10};
  for (int t = 10; t >= 0; --t) c.points.push_back({PointKind::kThreshold, t / 10.0, 0.1 * t, 0.5, 0});
  auto all = c.all();
  const std::string csv = format_curve(all);
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> rows;
  std::getline(in, line);
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 13u);
  EXPECT_EQ(rows.front().rfind("slm_only,", 0), 0u);
  EXPECT_EQ(rows.back().rfind("llm_only,", 0), 0u);
  EXPECT_EQ(rows[1].rfind("0,", 0), 0u);
  EXPECT_EQ(rows[4].rfind("0.3,", 0), 0u);
  EXPECT_EQ(rows[11].rfind("1,", 0), 0u);

  std::istringstream back(csv);
  auto parsed = parse_curve(back);
  ASSERT_EQ(parsed.size(), 13u);
  EXPECT_EQ(parsed.front().kind, PointKind::kSlmOnly);
  EXPECT_DOUBLE_EQ(parsed[5].tau, 0.4);
  EXPECT_EQ(parsed.back().n_routed, 10u);
}

TEST(Metrics, JsonFieldsAndNulls) {
  MetricsReport r;
  r.set_toa(0.8);
  auto j = metrics_to_json(r, MetricsMode::kActual);
  EXPECT_DOUBLE_EQ(j["toa"].get<double>(), 0.8);
  EXPECT_DOUBLE_EQ(j["toga"].get<double>(), 0.8 - 0.5);
  EXPECT_TRUE(j["toa100"].is_null());
  EXPECT_TRUE(j["togr"].is_null());
  EXPECT_TRUE(j["arol"].is_null());
  EXPECT_EQ(j["mode"], "actual");
}

TEST(MetricsReport, TogaIsExactlyToaMinusHalf) {
  MetricsReport r;
  r.set_toa100(0.7312);
  EXPECT_EQ(*r.toga100, 0.7312 - 0.5);
}

TEST(TrainCorpus, RoundTrip) {
  TrainQuestion q{"t1", "What?", {{"x", true, 5}, {"yy", false, 9}}};
  std::istringstream in(to_json(q).dump() + "\n");
  auto back = read_train_corpus(in);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], q);
}

TEST(TrainingConfig, CarriesLossCoefficients) {
  auto j = training_config();
  EXPECT_DOUBLE_EQ(j["length_preference"]["pref_beta"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(j["length_preference"]["sft_coefficient"].get<double>(), 0.2);
  EXPECT_EQ(j["refusal"]["lora"]["rank"], 8);
}
