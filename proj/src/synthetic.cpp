#include "routerlab/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <string>

namespace routerlab {

namespace {

// mt19937_64 output is fully specified; the distributions below are written
// out so that generated files are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  std::int64_t between(TokenRange r) {
    const auto span = static_cast<std::uint64_t>(r.max - r.min) + 1;
    return r.min + static_cast<std::int64_t>(engine_() % span);
  }
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

std::string answer_key(int index) { return std::string(1, static_cast<char>('a' + index)); }

std::string question_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "q%06zu", i);
  return buf;
}

double draw_difficulty(Rng& rng, const SyntheticParams& p) {
  if (rng.bernoulli(p.easy_fraction)) return 0.0;
  return p.difficulty_min + (p.difficulty_max - p.difficulty_min) * rng.uniform();
}

SampleRecord answered_sample(Rng& rng, const SyntheticParams& p, double difficulty,
                             std::optional<ConfidenceLevel> level) {
  const bool correct = rng.bernoulli(1.0 - difficulty);
  const std::string answer =
      correct ? answer_key(0) : answer_key(1 + static_cast<int>(rng.below(p.distractors)));
  return SampleRecord::answered(answer, correct, rng.between(p.sample_tokens), level);
}

SampleRecord tagged_sample(Rng& rng, const SyntheticParams& p, double difficulty,
                           ConfidenceLevel level) {
  if (1.0 - difficulty < level.value()) {
    return SampleRecord::refused(rng.between(p.refusal_tokens), level);
  }
  return answered_sample(rng, p, difficulty, level);
}

}  // namespace

void SyntheticParams::validate() const {
  for (const TokenRange* r : {&sample_tokens, &refusal_tokens, &input_tokens, &llm_tokens}) {
    if (r->min < 1 || r->max < r->min) {
      throw ValidationError("synthetic token ranges must satisfy 1 <= min <= max");
    }
  }
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(easy_fraction) || !unit(difficulty_min) || !unit(difficulty_max) ||
      difficulty_min > difficulty_max || !unit(llm_accuracy)) {
    throw ValidationError("synthetic probabilities must lie in [0,1] with min <= max");
  }
  if (!(pre_score_noise >= 0.0)) throw ValidationError("pre_score_noise must be >= 0");
  if (plain_samples < 0 || top_level_samples < 1) {
    throw ValidationError("need plain_samples >= 0 and top_level_samples >= 1");
  }
  if (distractors < 1 || distractors > 25) throw ValidationError("distractors must be in 1..25");
}

std::vector<SyntheticQuestion> generate_synthetic_detailed(std::uint64_t seed, std::size_t n,
                                                           const SyntheticParams& p) {
  if (n < 1) throw ValidationError("synthetic dataset needs n >= 1");
  p.validate();
  Rng rng(seed);
  std::vector<SyntheticQuestion> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SyntheticQuestion sq;
    sq.difficulty = draw_difficulty(rng, p);
    const double d = sq.difficulty;
    QuestionRecord& q = sq.record;
    q.id = question_id(i);
    q.input_tokens = rng.between(p.input_tokens);
    for (int k = 0; k < p.plain_samples; ++k) {
      q.slm_samples.push_back(answered_sample(rng, p, d, std::nullopt));
    }
    for (int t = 1; t < ConfidenceLevel::kCount; ++t) {
      q.slm_samples.push_back(tagged_sample(rng, p, d, ConfidenceLevel::from_tenths(t)));
    }
    for (int k = 0; k < p.top_level_samples; ++k) {
      q.slm_samples.push_back(
          tagged_sample(rng, p, d, ConfidenceLevel::from_tenths(ConfidenceLevel::kCount)));
    }
    const double noise = (2.0 * rng.uniform() - 1.0) * p.pre_score_noise;
    q.pre_score = std::clamp(1.0 - d + noise, 0.0, 1.0);
    q.llm = LlmOutcome{rng.bernoulli(p.llm_accuracy), rng.between(p.llm_tokens)};
    validate(q);
    out.push_back(std::move(sq));
  }
  return out;
}

std::vector<QuestionRecord> generate_synthetic(std::uint64_t seed, std::size_t n,
                                               const SyntheticParams& params) {
  std::vector<QuestionRecord> out;
  for (auto& sq : generate_synthetic_detailed(seed, n, params)) out.push_back(std::move(sq.record));
  return out;
}

std::vector<TrainQuestion> generate_synthetic_corpus(std::uint64_t seed, std::size_t n,
                                                     const SyntheticParams& p) {
  if (n < 1) throw ValidationError("synthetic corpus needs n >= 1");
  p.validate();
  Rng rng(seed);
  std::vector<TrainQuestion> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = draw_difficulty(rng, p);
    TrainQuestion q;
    q.id = question_id(i);
    q.question = "Synthetic question " + std::to_string(i) + "?";
    for (int k = 0; k < kSamplesPerQuestion; ++k) {
      const bool correct = rng.bernoulli(1.0 - d);
      const std::int64_t tokens = rng.between(p.sample_tokens);
      const std::string key =
          correct ? answer_key(0) : answer_key(1 + static_cast<int>(rng.below(p.distractors)));
      q.samples.push_back({"response " + std::to_string(k) + " (" + std::to_string(tokens) +
                               " tokens). The answer is " + key + ".",
                           correct, tokens});
    }
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace routerlab
