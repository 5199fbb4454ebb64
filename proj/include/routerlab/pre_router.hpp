#pragma once

#include <vector>

#include "routerlab/cost_model.hpp"
#include "routerlab/sweep.hpp"
#include "routerlab/types.hpp"

namespace routerlab {

/// Where a pre-generation router gets its per-question confidence score.
enum class ScoreSource {
  kPreScore,  // external classifier score carried on the record
  kRefusal,   // largest prompted confidence level the SLM still answers at
};

/// Score derived from confidence-prompted samples: the largest level whose
/// (first) sample at that level is not a refusal, or 0.0 when the model
/// refuses at every level. Non-monotone refusal patterns resolve to the
/// largest answering level. Throws when the record has no tagged samples.
double derive_refusal_score(const QuestionRecord& q);

double score_of(const QuestionRecord& q, ScoreSource source);

/// Outcome of a fixed routing decision in pre mode.
RoutingOutcome pre_outcome(const QuestionRecord& q, bool routed, const RoutingContext& ctx);

/// Route one question before generation: routed iff score < tau. A score
/// equal to tau stays on the SLM.
RoutingOutcome route_pre(const QuestionRecord& q, double tau, ScoreSource source,
                         const RoutingContext& ctx);

struct PreSweepOptions {
  std::vector<double> taus = default_tau_grid();
  ScoreSource score_source = ScoreSource::kPreScore;
  QualityMode quality = QualityMode::kActual;
  Execution execution = Execution::kParallel;
};

/// One curve point per tau plus the SLM-only and LLM-only endpoints.
SweepResult sweep_pre(const Dataset& dataset, const PricingSchedule& pricing,
                      const PreSweepOptions& options);

namespace detail {
SweepResult sweep_pre_serial(const Dataset& dataset, const PricingSchedule& pricing,
                             const PreSweepOptions& options);
SweepResult sweep_pre_parallel(const Dataset& dataset, const PricingSchedule& pricing,
                               const PreSweepOptions& options);
/// Endpoints of a pre-routing curve.
void fill_pre_endpoints(Curve& curve, const Dataset& dataset, const RoutingContext& ctx);
CurvePoint reduce_pre_point(double tau, const std::vector<RoutingOutcome>& outcomes,
                            const RoutingContext& ctx);
}  // namespace detail

}  // namespace routerlab
