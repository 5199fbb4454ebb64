#include "routerlab/cost_model.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

namespace routerlab {

namespace {

constexpr double kPerMillion = 1e6;

std::vector<std::size_t> id_order(std::span<const RoutingOutcome> outcomes) {
  std::vector<std::size_t> order(outcomes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return outcomes[a].question_id < outcomes[b].question_id;
  });
  return order;
}

void require_mode(std::span<const RoutingOutcome> outcomes, RoutingMode mode, const char* what) {
  if (outcomes.empty()) throw Error(std::string(what) + ": empty outcome collection");
  for (const auto& o : outcomes) {
    if (o.mode != mode) {
      throw Error(std::string(what) + ": outcome for '" + o.question_id + "' has the wrong mode");
    }
  }
}

}  // namespace

double slm_question_cost(const QuestionRecord& q, double out_tokens,
                         const PricingSchedule& pricing) {
  if (out_tokens < 0.0) throw Error("slm_question_cost: negative output token count");
  return (pricing.slm_in * static_cast<double>(q.input_tokens) + pricing.slm_out * out_tokens) /
         kPerMillion;
}

double llm_question_cost(const QuestionRecord& q, const DatasetProfile& profile,
                         const PricingSchedule& pricing) {
  return (pricing.llm_in * static_cast<double>(q.input_tokens) +
          pricing.llm_out * profile.require_avg_llm_tokens()) /
         kPerMillion;
}

SlmSummary summarize_slm(const QuestionRecord& q) {
  const bool has_plain = std::any_of(q.slm_samples.begin(), q.slm_samples.end(),
                                     [](const SampleRecord& s) { return !s.confidence; });
  std::size_t n = 0, correct = 0;
  std::int64_t tokens = 0;
  std::map<std::string, std::size_t> votes;
  for (const auto& s : q.slm_samples) {
    if (has_plain && s.confidence) continue;
    ++n;
    tokens += s.tokens;
    if (s.correct) ++correct;
    if (s.answer) ++votes[*s.answer];
  }
  if (n == 0) throw Error("question '" + q.id + "' has no SLM samples");

  SlmSummary out;
  out.accuracy = static_cast<double>(correct) / static_cast<double>(n);
  out.mean_tokens = static_cast<double>(tokens) / static_cast<double>(n);
  std::size_t best = 0;
  for (const auto& [answer, count] : votes) {  // map order gives the smallest key on ties
    if (count > best) {
      best = count;
      out.majority_answer = answer;
    }
  }
  return out;
}

double llm_quality(const QuestionRecord& q, QualityMode mode) {
  if (mode == QualityMode::kPerfect) return 1.0;
  if (!q.llm) {
    throw Error("question '" + q.id + "' has no LLM outcome; use assume-perfect mode");
  }
  return q.llm->correct ? 1.0 : 0.0;
}

double charged_cost_sum(std::span<const RoutingOutcome> outcomes) {
  double sum = 0.0;
  for (std::size_t i : id_order(outcomes)) sum += outcomes[i].slm_cost + outcomes[i].llm_cost;
  return sum;
}

double normalized_pre_cost(std::span<const RoutingOutcome> outcomes, const DatasetProfile& profile,
                           const PricingSchedule& pricing) {
  require_mode(outcomes, RoutingMode::kPre, "normalized_pre_cost");
  return charged_cost_sum(outcomes) / profile.total_llm_cost(pricing);
}

double normalized_cascade_cost(std::span<const RoutingOutcome> outcomes, int k,
                               const DatasetProfile& profile, const PricingSchedule& pricing) {
  require_mode(outcomes, RoutingMode::kCascade, "normalized_cascade_cost");
  for (const auto& o : outcomes) {
    if (o.samples_used != k) {
      throw Error("normalized_cascade_cost: question '" + o.question_id + "' charged " +
                  std::to_string(o.samples_used) + " samples, expected " + std::to_string(k));
    }
  }
  return charged_cost_sum(outcomes) / profile.total_llm_cost(pricing);
}

double average_quality(std::span<const RoutingOutcome> outcomes) {
  if (outcomes.empty()) throw Error("average_quality: empty outcome collection");
  double sum = 0.0;
  for (std::size_t i : id_order(outcomes)) sum += outcomes[i].quality;
  return sum / static_cast<double>(outcomes.size());
}

}  // namespace routerlab
