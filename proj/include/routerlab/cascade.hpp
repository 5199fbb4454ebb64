#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "routerlab/cost_model.hpp"
#include "routerlab/sweep.hpp"
#include "routerlab/types.hpp"

namespace routerlab {

inline constexpr double kDefaultVoteAlpha = 0.5;
inline constexpr double kMeanConfidence = 0.55;
/// Shares are ratios of float sums; 6 votes of 0.775 over 10 land a hair
/// under 0.6. Comparisons against tau allow this much slack.
inline constexpr double kShareTolerance = 1e-12;

/// share >= tau, up to kShareTolerance.
inline bool reaches(double share, double tau) { return share >= tau - kShareTolerance; }

/// w = 0.55 + alpha * (p - 0.55) for any p; no grid check.
double weight_formula(double p, double alpha);

/// Vote weight of a sample prompted at `level`. Throws when alpha is negative
/// or large enough to make the weight non-positive (alpha >= 11/9 at p = 0.1).
double weight_of(ConfidenceLevel level, double alpha = kDefaultVoteAlpha);
/// Same, for a raw value that must sit on the 0.1 grid.
double weight_of(double p, double alpha = kDefaultVoteAlpha);

/// Weight of a sample: weight_of(level) when tagged, 1 for plain SC samples.
double sample_weight(const SampleRecord& s, double alpha);

/// Weighted vote masses. Masses are accumulated in sample order; refusals
/// contribute to the total weight only.
struct VoteTally {
  struct Candidate {
    std::string answer;
    double mass = 0.0;
  };
  std::vector<Candidate> candidates;  // sorted by answer key
  double refusal_mass = 0.0;
  double total_weight = 0.0;

  /// delta(answer): mass / total weight, 0 for unknown answers.
  double share(const std::string& answer) const;
};

VoteTally tally_votes(std::span<const SampleRecord> samples, double alpha = kDefaultVoteAlpha);

struct Decision {
  bool accept = false;
  std::optional<std::string> answer;  // argmax of delta, smallest key on ties
  double top_share = 0.0;
};

/// Accept iff max delta >= tau (see reaches()). A tally with no candidate answer (every
/// sample refused) is always rejected.
Decision decide(const VoteTally& tally, double tau);

struct ParallelOutcome {
  Decision decision;
  std::int64_t latency_tokens = 0;
};

/// Replays parallel sampling with samples finishing in ascending token order
/// (ties by index). Stops at the first completion after which acceptance or
/// rejection is certain; otherwise waits for the longest sample. The returned
/// decision is always the full-tally decision.
ParallelOutcome simulate_parallel(std::span<const SampleRecord> samples, double tau,
                                  double alpha = kDefaultVoteAlpha);

enum class Scheme {
  kSc,   // K plain samples
  kRcv,  // one sample at each of the ten levels
  kFcv,  // K samples prompted at level 1.0
};

struct CascadeConfig {
  Scheme scheme = Scheme::kFcv;
  int k = 10;
  double alpha = kDefaultVoteAlpha;
};

/// Picks the scheme's samples from a record, in record order:
/// sc takes the first k untagged samples; fcv the first k tagged at 1.0;
/// rcv the first sample at each level (k must be 10). Throws on mismatch.
std::vector<SampleRecord> select_samples(const QuestionRecord& q, Scheme scheme, int k);

RoutingOutcome route_cascade(const QuestionRecord& q, double tau, const CascadeConfig& config,
                             const RoutingContext& ctx);

struct CascadeSweepOptions {
  std::vector<double> taus = default_tau_grid();
  CascadeConfig config;
  QualityMode quality = QualityMode::kActual;
  Execution execution = Execution::kParallel;
};

SweepResult sweep_cascade(const Dataset& dataset, const PricingSchedule& pricing,
                          const CascadeSweepOptions& options);

namespace detail {
SweepResult sweep_cascade_serial(const Dataset& dataset, const PricingSchedule& pricing,
                                 const CascadeSweepOptions& options);
SweepResult sweep_cascade_parallel(const Dataset& dataset, const PricingSchedule& pricing,
                                   const CascadeSweepOptions& options);
/// SLM-only: every voted answer kept (no answer scores 0). LLM-only: cost 1.
void fill_cascade_endpoints(Curve& curve, const Dataset& dataset,
                            const std::vector<RoutingOutcome>& accept_all,
                            const RoutingContext& ctx, int k);
CurvePoint reduce_cascade_point(double tau, const std::vector<RoutingOutcome>& outcomes,
                                const RoutingContext& ctx, int k);
/// SLM cost of a cascade: input once, every selected sample's output.
double cascade_slm_cost(const QuestionRecord& q, std::span<const SampleRecord> selected,
                        const PricingSchedule& pricing);
/// Quality of the accepted answer: the correctness of its first voter.
double answer_quality(std::span<const SampleRecord> selected, const std::string& answer);
}  // namespace detail

}  // namespace routerlab
