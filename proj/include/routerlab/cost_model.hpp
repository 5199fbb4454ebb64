#pragma once

#include <optional>
#include <span>
#include <string>

#include "routerlab/types.hpp"

namespace routerlab {

/// Whether the LLM is scored by its recorded correctness or assumed perfect
/// (the "-100" metrics).
enum class QualityMode { kActual, kPerfect };

/// Everything a per-question routing call needs besides the question.
struct RoutingContext {
  DatasetProfile profile;
  PricingSchedule pricing;
  QualityMode quality = QualityMode::kActual;
};

/// SLM cost of one question in USD: input once plus `out_tokens` of output.
double slm_question_cost(const QuestionRecord& q, double out_tokens,
                         const PricingSchedule& pricing);

/// LLM cost of one question in USD, with the dataset-mean output length in
/// place of the question's own LLM token count.
double llm_question_cost(const QuestionRecord& q, const DatasetProfile& profile,
                         const PricingSchedule& pricing);

/// What a single SLM generation is worth for pre-routing: mean correctness and
/// mean output length over the plain (untagged) samples, or over all samples
/// when the question carries no untagged ones.
struct SlmSummary {
  double accuracy = 0.0;
  double mean_tokens = 0.0;
  std::optional<std::string> majority_answer;
};

SlmSummary summarize_slm(const QuestionRecord& q);

/// p_i^l under the given mode. Actual mode throws when the record has no LLM outcome.
double llm_quality(const QuestionRecord& q, QualityMode mode);

/// Sum of charged (SLM + LLM) costs, reduced in ascending question-id order.
double charged_cost_sum(std::span<const RoutingOutcome> outcomes);

/// Pre-routing cost normalized so that routing everything costs 1.
double normalized_pre_cost(std::span<const RoutingOutcome> outcomes, const DatasetProfile& profile,
                           const PricingSchedule& pricing);

/// Cascade cost normalized to the LLM-only cost. Each outcome must have
/// charged exactly `k` samples; SLM input is counted once per question.
double normalized_cascade_cost(std::span<const RoutingOutcome> outcomes, int k,
                               const DatasetProfile& profile, const PricingSchedule& pricing);

/// Mean of the outcomes' quality, reduced in ascending question-id order.
double average_quality(std::span<const RoutingOutcome> outcomes);

}  // namespace routerlab
