#include "routerlab/cascade.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace routerlab {

double weight_formula(double p, double alpha) {
  return kMeanConfidence + alpha * (p - kMeanConfidence);
}

double weight_of(ConfidenceLevel level, double alpha) {
  if (!(alpha >= 0.0)) throw ValidationError("vote alpha must be >= 0");
  const double w = weight_formula(level.value(), alpha);
  if (!(w > 0.0)) {
    throw ValidationError("vote alpha " + std::to_string(alpha) +
                          " gives a non-positive weight at level " +
                          std::to_string(level.value()));
  }
  return w;
}

double weight_of(double p, double alpha) { return weight_of(ConfidenceLevel::from_value(p), alpha); }

double sample_weight(const SampleRecord& s, double alpha) {
  return s.confidence ? weight_of(*s.confidence, alpha) : 1.0;
}

double VoteTally::share(const std::string& answer) const {
  for (const auto& c : candidates) {
    if (c.answer == answer) return c.mass / total_weight;
  }
  return 0.0;
}

VoteTally tally_votes(std::span<const SampleRecord> samples, double alpha) {
  if (samples.empty()) throw Error("tally_votes: need at least one sample");
  std::map<std::string, double> mass;
  VoteTally tally;
  for (const auto& s : samples) {
    const double w = sample_weight(s, alpha);
    tally.total_weight += w;
    if (s.refusal) {
      tally.refusal_mass += w;
    } else {
      mass[*s.answer] += w;
    }
  }
  for (auto& [answer, m] : mass) tally.candidates.push_back({answer, m});
  return tally;
}

Decision decide(const VoteTally& tally, double tau) {
  Decision d;
  for (const auto& c : tally.candidates) {
    const double share = c.mass / tally.total_weight;
    if (!d.answer || share > d.top_share) {
      d.top_share = share;
      d.answer = c.answer;
    }
  }
  d.accept = d.answer.has_value() && reaches(d.top_share, tau);
  return d;
}

ParallelOutcome simulate_parallel(std::span<const SampleRecord> samples, double tau, double alpha) {
  const std::size_t k = samples.size();
  if (k == 0) throw Error("simulate_parallel: need at least one sample");

  std::vector<double> w(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    w[i] = sample_weight(samples[i], alpha);
    total += w[i];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return samples[a].tokens < samples[b].tokens;
  });

  ParallelOutcome out;
  out.decision = decide(tally_votes(samples, alpha), tau);
  out.latency_tokens = samples[order.back()].tokens;

  // Masses are summed in sample-index order, the same order tally_votes uses,
  // so an observed mass never exceeds the final one and an optimistic bound
  // never falls below it.
  std::vector<bool> done(k, false);
  for (std::size_t j = 0; j < k; ++j) {
    done[order[j]] = true;

    bool accept_certain = false;
    double unfinished = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (!done[i]) unfinished += w[i];
    }
    bool reject_certain = !reaches(unfinished / total, tau);
    for (std::size_t i = 0; i < k && !accept_certain; ++i) {
      if (!done[i] || samples[i].refusal) continue;
      const std::string& answer = *samples[i].answer;
      double observed = 0.0, optimistic = 0.0;
      for (std::size_t m = 0; m < k; ++m) {
        const bool votes = done[m] && !samples[m].refusal && *samples[m].answer == answer;
        if (votes) observed += w[m];
        if (votes || !done[m]) optimistic += w[m];
      }
      if (reaches(observed / total, tau)) accept_certain = true;
      if (reaches(optimistic / total, tau)) reject_certain = false;
    }
    if (accept_certain || reject_certain) {
      out.latency_tokens = samples[order[j]].tokens;
      break;
    }
  }
  return out;
}

std::vector<SampleRecord> select_samples(const QuestionRecord& q, Scheme scheme, int k) {
  std::vector<SampleRecord> picked;
  switch (scheme) {
    case Scheme::kSc:
    case Scheme::kFcv: {
      if (k < 1) throw ValidationError("cascade K must be >= 1");
      for (const auto& s : q.slm_samples) {
        if (static_cast<int>(picked.size()) == k) break;
        const bool match = scheme == Scheme::kSc
                               ? !s.confidence.has_value()
                               : s.confidence && s.confidence->tenths() == ConfidenceLevel::kCount;
        if (match) picked.push_back(s);
      }
      if (static_cast<int>(picked.size()) < k) {
        throw ValidationError("question '" + q.id + "' has " + std::to_string(picked.size()) +
                              (scheme == Scheme::kSc ? " untagged" : " level-1.0") +
                              " samples, scheme needs " + std::to_string(k));
      }
      break;
    }
    case Scheme::kRcv: {
      if (k != ConfidenceLevel::kCount) {
        throw ValidationError("rcv uses exactly one sample per level, so K must be 10");
      }
      for (const auto level : all_confidence_levels()) {
        auto it = std::find_if(q.slm_samples.begin(), q.slm_samples.end(),
                               [&](const SampleRecord& s) { return s.confidence == level; });
        if (it == q.slm_samples.end()) {
          throw ValidationError("question '" + q.id + "' has no sample at level " +
                                std::to_string(level.value()) + " for rcv");
        }
        picked.push_back(*it);
      }
      break;
    }
  }
  return picked;
}

namespace detail {

double cascade_slm_cost(const QuestionRecord& q, std::span<const SampleRecord> selected,
                        const PricingSchedule& pricing) {
  std::int64_t out_tokens = 0;
  for (const auto& s : selected) out_tokens += s.tokens;
  return slm_question_cost(q, static_cast<double>(out_tokens), pricing);
}

double answer_quality(std::span<const SampleRecord> selected, const std::string& answer) {
  for (const auto& s : selected) {
    if (s.answer && *s.answer == answer) return s.correct ? 1.0 : 0.0;
  }
  return 0.0;
}

}  // namespace detail

RoutingOutcome route_cascade(const QuestionRecord& q, double tau, const CascadeConfig& config,
                             const RoutingContext& ctx) {
  const auto selected = select_samples(q, config.scheme, config.k);
  const ParallelOutcome sim = simulate_parallel(selected, tau, config.alpha);

  RoutingOutcome out;
  out.question_id = q.id;
  out.mode = RoutingMode::kCascade;
  out.samples_used = static_cast<int>(selected.size());
  out.routed = !sim.decision.accept;
  out.decision_latency_tokens = sim.latency_tokens;
  out.slm_cost = detail::cascade_slm_cost(q, selected, ctx.pricing);
  if (out.routed) {
    out.quality = llm_quality(q, ctx.quality);
    out.llm_cost = llm_question_cost(q, ctx.profile, ctx.pricing);
  } else {
    out.accepted_answer = sim.decision.answer;
    out.quality = detail::answer_quality(selected, *sim.decision.answer);
  }
  return out;
}

SweepResult sweep_cascade(const Dataset& dataset, const PricingSchedule& pricing,
                          const CascadeSweepOptions& options) {
  return options.execution == Execution::kSerial
             ? detail::sweep_cascade_serial(dataset, pricing, options)
             : detail::sweep_cascade_parallel(dataset, pricing, options);
}

namespace detail {

void fill_cascade_endpoints(Curve& curve, const Dataset& dataset,
                            const std::vector<RoutingOutcome>& accept_all,
                            const RoutingContext& ctx, int k) {
  curve.slm_only = reduce_cascade_point(0.0, accept_all, ctx, k);
  curve.slm_only.kind = PointKind::kSlmOnly;

  std::vector<RoutingOutcome> llm(dataset.questions.size());
  for (std::size_t i = 0; i < dataset.questions.size(); ++i) {
    const auto& q = dataset.questions[i];
    llm[i].question_id = q.id;
    llm[i].mode = RoutingMode::kCascade;
    llm[i].routed = true;
    llm[i].quality = llm_quality(q, ctx.quality);
    llm[i].llm_cost = llm_question_cost(q, ctx.profile, ctx.pricing);
  }
  curve.llm_only.kind = PointKind::kLlmOnly;
  curve.llm_only.tau = 1.0;
  curve.llm_only.cost = charged_cost_sum(llm) / ctx.profile.total_llm_cost(ctx.pricing);
  curve.llm_only.performance = average_quality(llm);
  curve.llm_only.n_routed = llm.size();
}

CurvePoint reduce_cascade_point(double tau, const std::vector<RoutingOutcome>& outcomes,
                                const RoutingContext& ctx, int k) {
  CurvePoint p;
  p.kind = PointKind::kThreshold;
  p.tau = tau;
  p.cost = normalized_cascade_cost(outcomes, k, ctx.profile, ctx.pricing);
  p.performance = average_quality(outcomes);
  for (const auto& o : outcomes) p.n_routed += o.routed ? 1 : 0;
  return p;
}

namespace {

/// The SLM-only endpoint keeps every voted answer; a question where every
/// sample refused has no answer and scores 0 without an LLM charge.
RoutingOutcome keep_on_slm(const QuestionRecord& q, const CascadeConfig& config,
                           const RoutingContext& ctx) {
  const auto selected = select_samples(q, config.scheme, config.k);
  const Decision d = decide(tally_votes(selected, config.alpha), 0.0);
  RoutingOutcome out;
  out.question_id = q.id;
  out.mode = RoutingMode::kCascade;
  out.samples_used = static_cast<int>(selected.size());
  out.slm_cost = cascade_slm_cost(q, selected, ctx.pricing);
  if (d.answer) {
    out.accepted_answer = d.answer;
    out.quality = answer_quality(selected, *d.answer);
  }
  return out;
}

}  // namespace

SweepResult sweep_cascade_serial(const Dataset& dataset, const PricingSchedule& pricing,
                                 const CascadeSweepOptions& options) {
  if (dataset.questions.empty()) throw Error("cannot sweep an empty dataset");
  const RoutingContext ctx{dataset.profile, pricing, options.quality};
  const int k = options.config.scheme == Scheme::kRcv ? ConfidenceLevel::kCount : options.config.k;

  SweepResult result;
  result.taus = options.taus;
  std::vector<RoutingOutcome> slm_only;
  for (const auto& q : dataset.questions) slm_only.push_back(keep_on_slm(q, options.config, ctx));
  fill_cascade_endpoints(result.curve, dataset, slm_only, ctx, k);

  for (double tau : options.taus) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw ValidationError("tau must lie in [0,1]");
    std::vector<RoutingOutcome> outcomes;
    outcomes.reserve(dataset.questions.size());
    for (const auto& q : dataset.questions) {
      outcomes.push_back(route_cascade(q, tau, options.config, ctx));
    }
    result.curve.points.push_back(reduce_cascade_point(tau, outcomes, ctx, k));
    result.outcomes.push_back(std::move(outcomes));
  }
  return result;
}

}  // namespace detail

}  // namespace routerlab
