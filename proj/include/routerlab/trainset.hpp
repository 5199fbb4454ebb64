#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "routerlab/types.hpp"

namespace routerlab {

inline constexpr std::string_view kRejectionTemplate = "Sorry, I can't answer that.";
inline constexpr double kDefaultMinLengthRatio = 1.5;
inline constexpr double kDefaultDpoBeta = 1.0;
inline constexpr double kDefaultSftLambda = 0.2;
inline constexpr int kSamplesPerQuestion = 10;

/// One sampled response with its full text, as fed to the dataset builders.
struct TrainSample {
  std::string text;
  bool correct = false;
  std::int64_t tokens = 1;

  bool operator==(const TrainSample&) const = default;
};

struct TrainQuestion {
  std::string id;
  std::string question;
  std::vector<TrainSample> samples;

  bool operator==(const TrainQuestion&) const = default;
};

/// Shortest correct response (first on ties) against the longest incorrect
/// response whose length exceeds min_ratio times the chosen one (first on
/// ties). Empty when either side is missing.
std::optional<PreferencePair> build_dpo_pair(const TrainQuestion& q,
                                             double min_ratio = kDefaultMinLengthRatio);

/// Ablation variant: the longest correct response as the negative, under the
/// same length rule. Off by default in the CLI.
std::optional<PreferencePair> build_long_correct_pair(const TrainQuestion& q,
                                                      double min_ratio = kDefaultMinLengthRatio);

/// Fraction of ten samples that are correct, as a whole number of tenths.
int accuracy_tenths(std::span<const SampleRecord> samples);
int accuracy_tenths(std::span<const TrainSample> samples);
/// Same, as a value on the 0.0..1.0 grid.
double estimate_accuracy(std::span<const SampleRecord> samples);

/// "Please respond with a confidence level of 0.7:"
std::string confidence_prefix(ConfidenceLevel threshold);

/// Ten examples, one per threshold. The target is a seeded-random correct
/// answer when accuracy >= threshold, otherwise the rejection template.
/// The prompt is the prefix, a space, then the question.
std::vector<RefusalExample> build_refusal_set(const std::string& question_id,
                                              const std::string& question_text,
                                              int accuracy_in_tenths,
                                              std::span<const std::string> correct_answers,
                                              std::uint64_t seed);

/// Convenience over a TrainQuestion with exactly ten samples.
std::vector<RefusalExample> build_refusal_set(const TrainQuestion& q, std::uint64_t seed);

/// Per-question generator seed, stable across platforms.
std::uint64_t question_seed(std::uint64_t global_seed, std::string_view question_id);

struct LossInputs {
  double chosen_logp_policy = 0.0;
  double chosen_logp_ref = 0.0;
  double rejected_logp_policy = 0.0;
  double rejected_logp_ref = 0.0;
  std::int64_t chosen_tokens = 1;
};

struct LossTerms {
  double dpo = 0.0;
  double sft = 0.0;
  double total = 0.0;
};

/// -log(sigmoid(x)), stable for large |x|.
double neg_log_sigmoid(double x);

/// DPO on the implicit reward margin plus lambda times the per-token NLL of
/// the chosen response.
LossTerms combined_loss(const LossInputs& in, double beta = kDefaultDpoBeta,
                        double lambda = kDefaultSftLambda);

}  // namespace routerlab
