#include "routerlab/types.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace routerlab {

ConfidenceLevel ConfidenceLevel::from_tenths(int tenths) {
  if (tenths < 1 || tenths > kCount) {
    throw ValidationError("confidence level must be one of 0.1..1.0, got " +
                          std::to_string(tenths) + " tenths");
  }
  return ConfidenceLevel(tenths);
}

ConfidenceLevel ConfidenceLevel::from_value(double value) {
  if (!std::isfinite(value)) {
    throw ValidationError("confidence level is not finite");
  }
  const double scaled = std::round(value * 10.0);
  if (std::abs(value - scaled / 10.0) > kGridTolerance || scaled < 1 || scaled > kCount) {
    throw ValidationError("confidence level " + std::to_string(value) +
                          " is not on the 0.1..1.0 grid");
  }
  return ConfidenceLevel(static_cast<int>(scaled));
}

std::vector<ConfidenceLevel> all_confidence_levels() {
  std::vector<ConfidenceLevel> levels;
  levels.reserve(ConfidenceLevel::kCount);
  for (int t = 1; t <= ConfidenceLevel::kCount; ++t) {
    levels.push_back(ConfidenceLevel::from_tenths(t));
  }
  return levels;
}

void PricingSchedule::validate() const {
  for (double price : {slm_in, slm_out, llm_in, llm_out}) {
    if (!(price > 0.0) || !std::isfinite(price)) {
      throw ValidationError("all four prices must be finite and strictly positive");
    }
  }
}

PricingSchedule PricingSchedule::scaled(double factor) const {
  return {slm_in * factor, slm_out * factor, llm_in * factor, llm_out * factor};
}

SampleRecord SampleRecord::answered(std::string answer, bool correct, std::int64_t tokens,
                                    std::optional<ConfidenceLevel> confidence) {
  SampleRecord s{std::move(answer), correct, tokens, confidence, false};
  validate(s);
  return s;
}

SampleRecord SampleRecord::refused(std::int64_t tokens, std::optional<ConfidenceLevel> confidence) {
  SampleRecord s{std::nullopt, false, tokens, confidence, true};
  validate(s);
  return s;
}

double DatasetProfile::require_avg_llm_tokens() const {
  if (!avg_llm_tokens) {
    throw Error("dataset has no LLM records; LLM cost is undefined");
  }
  return *avg_llm_tokens;
}

double DatasetProfile::total_llm_cost(const PricingSchedule& pricing) const {
  const double avg = require_avg_llm_tokens();
  return (pricing.llm_in * static_cast<double>(total_input_tokens) +
          pricing.llm_out * avg * static_cast<double>(n_questions)) /
         1e6;
}

DatasetProfile make_profile(const std::vector<QuestionRecord>& questions) {
  DatasetProfile profile;
  profile.n_questions = questions.size();
  std::int64_t llm_tokens = 0;
  std::size_t llm_count = 0;
  for (const auto& q : questions) {
    profile.total_input_tokens += q.input_tokens;
    if (q.llm) {
      llm_tokens += q.llm->tokens;
      ++llm_count;
    }
  }
  if (llm_count > 0) {
    profile.avg_llm_tokens = static_cast<double>(llm_tokens) / static_cast<double>(llm_count);
  }
  return profile;
}

Dataset Dataset::from_questions(std::vector<QuestionRecord> questions) {
  Dataset d;
  d.profile = make_profile(questions);
  d.questions = std::move(questions);
  return d;
}

std::vector<CurvePoint> Curve::all() const {
  std::vector<CurvePoint> out;
  out.reserve(points.size() + 2);
  out.push_back(slm_only);
  out.insert(out.end(), points.begin(), points.end());
  out.push_back(llm_only);
  return out;
}

std::string canonical_answer(std::string_view raw) {
  std::size_t begin = 0;
  std::size_t end = raw.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(raw[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
  std::string out(raw.substr(begin, end - begin));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

namespace {

std::string where(std::string_view question_id) {
  return question_id.empty() ? std::string() : " (question '" + std::string(question_id) + "')";
}

}  // namespace

void validate(const SampleRecord& sample, std::string_view question_id) {
  if (sample.refusal) {
    if (sample.answer) {
      throw ValidationError("sample.answer: refusal=true requires answer to be absent" +
                            where(question_id));
    }
    if (sample.correct) {
      throw ValidationError("sample.correct: refusal=true requires correct=false" +
                            where(question_id));
    }
  } else if (!sample.answer) {
    throw ValidationError("sample.answer: refusal=false requires an answer" + where(question_id));
  }
  if (sample.tokens < 1) {
    throw ValidationError("sample.tokens: must be >= 1" + where(question_id));
  }
}

void validate(const QuestionRecord& q) {
  if (q.id.empty()) throw ValidationError("id: must be a non-empty string");
  if (q.input_tokens < 1) throw ValidationError("input_tokens: must be >= 1" + where(q.id));
  if (q.pre_score && !(*q.pre_score >= 0.0 && *q.pre_score <= 1.0)) {
    throw ValidationError("pre_score: must lie in [0,1]" + where(q.id));
  }
  for (const auto& s : q.slm_samples) validate(s, q.id);
  if (q.llm && q.llm->tokens < 1) {
    throw ValidationError("llm.tokens: must be >= 1" + where(q.id));
  }
}

}  // namespace routerlab
