#pragma once

#include <cstdint>
#include <vector>

#include "routerlab/trainset.hpp"
#include "routerlab/types.hpp"

namespace routerlab {

struct TokenRange {
  std::int64_t min = 1;
  std::int64_t max = 1;
};

/// Knobs for the seeded question generator.
///
/// Each question draws a latent difficulty d: with probability `easy_fraction`
/// d = 0, otherwise d is uniform in [difficulty_min, difficulty_max]. Every
/// answered sample is correct with probability 1 - d. A sample prompted at
/// level L refuses iff 1 - d < L, so the set of answering levels is always
/// downward-closed.
///
/// Per question the generator emits, in this order:
///   - `plain_samples` untagged samples (self-consistency, never refuse),
///   - one sample at each level 0.1 .. 0.9,
///   - `top_level_samples` samples at level 1.0.
/// The first level-1.0 sample doubles as the ranged-voting sample at 1.0.
struct SyntheticParams {
  double easy_fraction = 0.25;
  double difficulty_min = 0.0;
  double difficulty_max = 1.0;
  int plain_samples = 10;
  int top_level_samples = 10;
  TokenRange sample_tokens{60, 400};
  TokenRange refusal_tokens{6, 12};
  TokenRange input_tokens{40, 300};
  TokenRange llm_tokens{120, 480};
  double llm_accuracy = 0.9;
  double pre_score_noise = 0.2;  // uniform in [-noise, +noise], then clamped to [0,1]
  int distractors = 3;           // wrong answers are drawn from this many keys

  void validate() const;
};

struct SyntheticQuestion {
  QuestionRecord record;
  double difficulty = 0.0;
};

std::vector<SyntheticQuestion> generate_synthetic_detailed(std::uint64_t seed, std::size_t n,
                                                           const SyntheticParams& params = {});
std::vector<QuestionRecord> generate_synthetic(std::uint64_t seed, std::size_t n,
                                               const SyntheticParams& params = {});

/// Text corpus for the dataset builders: ten responses per question, correct
/// with probability 1 - d, lengths from `sample_tokens`.
std::vector<TrainQuestion> generate_synthetic_corpus(std::uint64_t seed, std::size_t n,
                                                     const SyntheticParams& params = {});

}  // namespace routerlab
