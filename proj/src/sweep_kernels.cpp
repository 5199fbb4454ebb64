// OpenMP sweep kernels. Per-question state is computed once in parallel, then
// every (tau, question) cell is evaluated independently. Reductions run
// serially in question-id order through the same cost_model functions the
// serial reference uses, so results are bit-identical for any thread count.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>

#include "routerlab/cascade.hpp"
#include "routerlab/pre_router.hpp"

namespace routerlab::detail {

namespace {

template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

void check_taus(const std::vector<double>& taus) {
  for (double tau : taus) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw ValidationError("tau must lie in [0,1]");
  }
}

struct PreState {
  double score = 0.0;
  RoutingOutcome on_slm;
  RoutingOutcome on_llm;
};

/// Everything the cascade decision needs at any tau, from one pass over the
/// question's selected samples.
struct CascadeState {
  RoutingOutcome accepted;  // outcome if the full tally is accepted
  RoutingOutcome rejected;  // outcome if it is routed
  bool has_answer = false;
  double top_share = 0.0;
  // Per completion j (ascending token order): the largest observed share and
  // the largest share still reachable by any answer.
  std::vector<double> accept_bound;
  std::vector<double> reject_bound;
  std::vector<std::int64_t> finish_tokens;
};

CascadeState build_cascade_state(const QuestionRecord& q, const CascadeConfig& config,
                                 const RoutingContext& ctx) {
  const auto selected = select_samples(q, config.scheme, config.k);
  const std::size_t k = selected.size();

  std::vector<double> w(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    w[i] = sample_weight(selected[i], config.alpha);
    total += w[i];
  }

  CascadeState st;
  const Decision full = decide(tally_votes(selected, config.alpha), 0.0);
  st.has_answer = full.answer.has_value();
  st.top_share = full.top_share;

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return selected[a].tokens < selected[b].tokens; });

  std::vector<char> done(k, 0);
  for (std::size_t j = 0; j < k; ++j) {
    done[order[j]] = 1;
    st.finish_tokens.push_back(selected[order[j]].tokens);

    double unfinished = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (!done[i]) unfinished += w[i];
    }
    double best_seen = -std::numeric_limits<double>::infinity();
    double best_reach = unfinished / total;
    for (std::size_t i = 0; i < k; ++i) {
      if (!done[i] || selected[i].refusal) continue;
      double observed = 0.0, reachable = 0.0;
      for (std::size_t m = 0; m < k; ++m) {
        const bool votes = done[m] && !selected[m].refusal && *selected[m].answer == *selected[i].answer;
        if (votes) observed += w[m];
        if (votes || !done[m]) reachable += w[m];
      }
      best_seen = std::max(best_seen, observed / total);
      best_reach = std::max(best_reach, reachable / total);
    }
    st.accept_bound.push_back(best_seen);
    st.reject_bound.push_back(best_reach);
  }

  RoutingOutcome base;
  base.question_id = q.id;
  base.mode = RoutingMode::kCascade;
  base.samples_used = static_cast<int>(k);
  base.slm_cost = cascade_slm_cost(q, selected, ctx.pricing);

  st.rejected = base;
  st.rejected.routed = true;
  st.rejected.quality = llm_quality(q, ctx.quality);
  st.rejected.llm_cost = llm_question_cost(q, ctx.profile, ctx.pricing);

  st.accepted = base;
  if (full.answer) {
    st.accepted.accepted_answer = full.answer;
    st.accepted.quality = answer_quality(selected, *full.answer);
  }
  return st;
}

RoutingOutcome cascade_cell(const CascadeState& st, double tau) {
  const bool accept = st.has_answer && reaches(st.top_share, tau);
  RoutingOutcome out = accept ? st.accepted : st.rejected;
  out.decision_latency_tokens = st.finish_tokens.back();
  for (std::size_t j = 0; j < st.finish_tokens.size(); ++j) {
    if (reaches(st.accept_bound[j], tau) || !reaches(st.reject_bound[j], tau)) {
      out.decision_latency_tokens = st.finish_tokens[j];
      break;
    }
  }
  return out;
}

}  // namespace

SweepResult sweep_pre_parallel(const Dataset& dataset, const PricingSchedule& pricing,
                               const PreSweepOptions& options) {
  if (dataset.questions.empty()) throw Error("cannot sweep an empty dataset");
  check_taus(options.taus);
  const RoutingContext ctx{dataset.profile, pricing, options.quality};
  const auto n = static_cast<std::int64_t>(dataset.questions.size());
  const auto t_count = static_cast<std::int64_t>(options.taus.size());

  std::vector<PreState> state(dataset.questions.size());
  parallel_for(n, [&](std::int64_t i) {
    const auto& q = dataset.questions[i];
    state[i] = {score_of(q, options.score_source), pre_outcome(q, false, ctx),
                pre_outcome(q, true, ctx)};
  });

  SweepResult result;
  result.taus = options.taus;
  result.outcomes.assign(options.taus.size(), std::vector<RoutingOutcome>(dataset.questions.size()));
  parallel_for(n * t_count, [&](std::int64_t cell) {
    const auto t = cell / n;
    const auto i = cell % n;
    const auto& st = state[i];
    result.outcomes[t][i] = st.score < options.taus[t] ? st.on_llm : st.on_slm;
  });

  std::vector<RoutingOutcome> none(state.size()), all(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    none[i] = state[i].on_slm;
    all[i] = state[i].on_llm;
  }
  result.curve.slm_only = reduce_pre_point(0.0, none, ctx);
  result.curve.slm_only.kind = PointKind::kSlmOnly;
  result.curve.llm_only = reduce_pre_point(1.0, all, ctx);
  result.curve.llm_only.kind = PointKind::kLlmOnly;
  for (std::size_t t = 0; t < options.taus.size(); ++t) {
    result.curve.points.push_back(reduce_pre_point(options.taus[t], result.outcomes[t], ctx));
  }
  return result;
}

SweepResult sweep_cascade_parallel(const Dataset& dataset, const PricingSchedule& pricing,
                                   const CascadeSweepOptions& options) {
  if (dataset.questions.empty()) throw Error("cannot sweep an empty dataset");
  check_taus(options.taus);
  const RoutingContext ctx{dataset.profile, pricing, options.quality};
  const int k = options.config.scheme == Scheme::kRcv ? ConfidenceLevel::kCount : options.config.k;
  const auto n = static_cast<std::int64_t>(dataset.questions.size());
  const auto t_count = static_cast<std::int64_t>(options.taus.size());

  std::vector<CascadeState> state(dataset.questions.size());
  parallel_for(n, [&](std::int64_t i) {
    state[i] = build_cascade_state(dataset.questions[i], options.config, ctx);
  });

  SweepResult result;
  result.taus = options.taus;
  result.outcomes.assign(options.taus.size(), std::vector<RoutingOutcome>(dataset.questions.size()));
  parallel_for(n * t_count, [&](std::int64_t cell) {
    const auto t = cell / n;
    const auto i = cell % n;
    result.outcomes[t][i] = cascade_cell(state[i], options.taus[t]);
  });

  std::vector<RoutingOutcome> slm_only(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) slm_only[i] = state[i].accepted;
  fill_cascade_endpoints(result.curve, dataset, slm_only, ctx, k);
  for (std::size_t t = 0; t < options.taus.size(); ++t) {
    result.curve.points.push_back(reduce_cascade_point(options.taus[t], result.outcomes[t], ctx, k));
  }
  return result;
}

}  // namespace routerlab::detail
