#include "routerlab/pre_router.hpp"

#include <array>

namespace routerlab {

double derive_refusal_score(const QuestionRecord& q) {
  // First sample seen at each level decides that level.
  std::array<int, ConfidenceLevel::kCount + 1> state{};  // 0 unseen, 1 answers, 2 refuses
  bool any = false;
  for (const auto& s : q.slm_samples) {
    if (!s.confidence) continue;
    any = true;
    int& slot = state[s.confidence->tenths()];
    if (slot == 0) slot = s.refusal ? 2 : 1;
  }
  if (!any) {
    throw Error("question '" + q.id + "' has no confidence-tagged samples for a refusal score");
  }
  for (int t = ConfidenceLevel::kCount; t >= 1; --t) {
    if (state[t] == 1) return ConfidenceLevel::from_tenths(t).value();
  }
  return 0.0;
}

double score_of(const QuestionRecord& q, ScoreSource source) {
  if (source == ScoreSource::kRefusal) return derive_refusal_score(q);
  if (!q.pre_score) throw Error("question '" + q.id + "' has no pre_score");
  return *q.pre_score;
}

RoutingOutcome pre_outcome(const QuestionRecord& q, bool routed, const RoutingContext& ctx) {
  RoutingOutcome out;
  out.question_id = q.id;
  out.mode = RoutingMode::kPre;
  out.routed = routed;
  if (routed) {
    out.quality = llm_quality(q, ctx.quality);
    out.llm_cost = llm_question_cost(q, ctx.profile, ctx.pricing);
  } else {
    const SlmSummary slm = summarize_slm(q);
    out.quality = slm.accuracy;
    out.slm_cost = slm_question_cost(q, slm.mean_tokens, ctx.pricing);
    out.accepted_answer = slm.majority_answer;
  }
  return out;
}

RoutingOutcome route_pre(const QuestionRecord& q, double tau, ScoreSource source,
                         const RoutingContext& ctx) {
  return pre_outcome(q, score_of(q, source) < tau, ctx);
}

SweepResult sweep_pre(const Dataset& dataset, const PricingSchedule& pricing,
                      const PreSweepOptions& options) {
  return options.execution == Execution::kSerial
             ? detail::sweep_pre_serial(dataset, pricing, options)
             : detail::sweep_pre_parallel(dataset, pricing, options);
}

namespace detail {

void fill_pre_endpoints(Curve& curve, const Dataset& dataset, const RoutingContext& ctx) {
  if (dataset.questions.empty()) throw Error("cannot sweep an empty dataset");
  std::vector<RoutingOutcome> none(dataset.questions.size());
  std::vector<RoutingOutcome> all(dataset.questions.size());
  for (std::size_t i = 0; i < dataset.questions.size(); ++i) {
    none[i] = pre_outcome(dataset.questions[i], false, ctx);
    all[i] = pre_outcome(dataset.questions[i], true, ctx);
  }
  curve.slm_only = reduce_pre_point(0.0, none, ctx);
  curve.slm_only.kind = PointKind::kSlmOnly;
  curve.llm_only = reduce_pre_point(1.0, all, ctx);
  curve.llm_only.kind = PointKind::kLlmOnly;
}

CurvePoint reduce_pre_point(double tau, const std::vector<RoutingOutcome>& outcomes,
                            const RoutingContext& ctx) {
  CurvePoint p;
  p.kind = PointKind::kThreshold;
  p.tau = tau;
  p.cost = normalized_pre_cost(outcomes, ctx.profile, ctx.pricing);
  p.performance = average_quality(outcomes);
  for (const auto& o : outcomes) p.n_routed += o.routed ? 1 : 0;
  return p;
}

SweepResult sweep_pre_serial(const Dataset& dataset, const PricingSchedule& pricing,
                             const PreSweepOptions& options) {
  const RoutingContext ctx{dataset.profile, pricing, options.quality};
  SweepResult result;
  result.taus = options.taus;
  fill_pre_endpoints(result.curve, dataset, ctx);
  for (double tau : options.taus) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw ValidationError("tau must lie in [0,1]");
    std::vector<RoutingOutcome> outcomes;
    outcomes.reserve(dataset.questions.size());
    for (const auto& q : dataset.questions) {
      outcomes.push_back(route_pre(q, tau, options.score_source, ctx));
    }
    result.curve.points.push_back(reduce_pre_point(tau, outcomes, ctx));
    result.outcomes.push_back(std::move(outcomes));
  }
  return result;
}

}  // namespace detail

}  // namespace routerlab
