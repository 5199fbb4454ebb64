#include "routerlab/trainset.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace routerlab {

namespace {

std::optional<PreferencePair> pair_against(const TrainQuestion& q, double min_ratio,
                                           bool negative_correct) {
  const TrainSample* chosen = nullptr;
  for (const auto& s : q.samples) {
    if (s.correct && (!chosen || s.tokens < chosen->tokens)) chosen = &s;
  }
  if (!chosen) return std::nullopt;

  const double floor = min_ratio * static_cast<double>(chosen->tokens);
  const TrainSample* rejected = nullptr;
  for (const auto& s : q.samples) {
    if (s.correct != negative_correct || &s == chosen) continue;
    if (static_cast<double>(s.tokens) > floor && (!rejected || s.tokens > rejected->tokens)) {
      rejected = &s;
    }
  }
  if (!rejected) return std::nullopt;
  return PreferencePair{q.id, chosen->text, rejected->text, chosen->tokens, rejected->tokens};
}

template <typename Sample>
int count_correct_of_ten(std::span<const Sample> samples) {
  if (samples.size() != static_cast<std::size_t>(kSamplesPerQuestion)) {
    throw ValidationError("accuracy needs exactly 10 samples, got " +
                          std::to_string(samples.size()));
  }
  int correct = 0;
  for (const auto& s : samples) correct += s.correct ? 1 : 0;
  return correct;
}

}  // namespace

std::optional<PreferencePair> build_dpo_pair(const TrainQuestion& q, double min_ratio) {
  return pair_against(q, min_ratio, false);
}

std::optional<PreferencePair> build_long_correct_pair(const TrainQuestion& q, double min_ratio) {
  return pair_against(q, min_ratio, true);
}

int accuracy_tenths(std::span<const SampleRecord> samples) { return count_correct_of_ten(samples); }
int accuracy_tenths(std::span<const TrainSample> samples) { return count_correct_of_ten(samples); }

double estimate_accuracy(std::span<const SampleRecord> samples) {
  return accuracy_tenths(samples) / 10.0;
}

std::string confidence_prefix(ConfidenceLevel threshold) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "Please respond with a confidence level of %.1f:",
                threshold.value());
  return buf;
}

std::uint64_t question_seed(std::uint64_t global_seed, std::string_view question_id) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : question_id) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  // splitmix64 finalizer over the combination
  std::uint64_t z = h ^ (global_seed + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<RefusalExample> build_refusal_set(const std::string& question_id,
                                              const std::string& question_text,
                                              int accuracy_in_tenths,
                                              std::span<const std::string> correct_answers,
                                              std::uint64_t seed) {
  if (accuracy_in_tenths < 0 || accuracy_in_tenths > ConfidenceLevel::kCount) {
    throw ValidationError("accuracy must lie on the 0.0..1.0 grid");
  }
  if (accuracy_in_tenths > 0 && correct_answers.empty()) {
    throw ValidationError("question '" + question_id +
                          "' has nonzero accuracy but no correct answer text");
  }
  std::mt19937_64 rng(question_seed(seed, question_id));
  std::vector<RefusalExample> out;
  out.reserve(ConfidenceLevel::kCount);
  for (const auto level : all_confidence_levels()) {
    RefusalExample ex;
    ex.question_id = question_id;
    ex.threshold = level;
    ex.prompt = confidence_prefix(level) + " " + question_text;
    if (accuracy_in_tenths >= level.tenths()) {
      ex.target = correct_answers[rng() % correct_answers.size()];
    } else {
      ex.target = std::string(kRejectionTemplate);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<RefusalExample> build_refusal_set(const TrainQuestion& q, std::uint64_t seed) {
  const int tenths = accuracy_tenths(std::span<const TrainSample>(q.samples));
  std::vector<std::string> correct;
  for (const auto& s : q.samples) {
    if (s.correct) correct.push_back(s.text);
  }
  return build_refusal_set(q.id, q.question, tenths, correct, seed);
}

double neg_log_sigmoid(double x) {
  return x >= 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

LossTerms combined_loss(const LossInputs& in, double beta, double lambda) {
  for (double v : {in.chosen_logp_policy, in.chosen_logp_ref, in.rejected_logp_policy,
                   in.rejected_logp_ref, beta, lambda}) {
    if (!std::isfinite(v)) throw ValidationError("combined_loss: non-finite input");
  }
  if (in.chosen_tokens < 1) throw ValidationError("combined_loss: chosen_tokens must be >= 1");

  const double margin = (in.chosen_logp_policy - in.chosen_logp_ref) -
                        (in.rejected_logp_policy - in.rejected_logp_ref);
  LossTerms out;
  out.dpo = neg_log_sigmoid(beta * margin);
  out.sft = -in.chosen_logp_policy / static_cast<double>(in.chosen_tokens);
  out.total = out.dpo + lambda * out.sft;
  return out;
}

}  // namespace routerlab
