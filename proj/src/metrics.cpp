#include "routerlab/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace routerlab {

namespace {

struct Xy {
  double x, y;
};

double clipped_trapezoid(Xy a, Xy b) {
  const double lo = std::max(a.x, 0.0);
  const double hi = std::min(b.x, 1.0);
  if (!(hi > lo)) return 0.0;
  auto at = [&](double x) { return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x); };
  return 0.5 * (at(lo) + at(hi)) * (hi - lo);
}

}  // namespace

double toa(std::span<const CurvePoint> points, const CurvePoint& slm_only,
           const CurvePoint& llm_only) {
  const double cost_span = llm_only.cost - slm_only.cost;
  const double perf_span = llm_only.performance - slm_only.performance;
  if (!(cost_span > 0.0)) throw Error("toa: LLM-only cost must exceed SLM-only cost");
  if (!(perf_span > 0.0)) throw Error("toa: LLM-only performance must exceed SLM-only performance");

  std::vector<Xy> xy;
  xy.reserve(points.size() + 2);
  xy.push_back({0.0, 0.0});
  for (const auto& p : points) {
    xy.push_back({(p.cost - slm_only.cost) / cost_span,
                  (p.performance - slm_only.performance) / perf_span});
  }
  xy.push_back({1.0, 1.0});
  std::stable_sort(xy.begin(), xy.end(), [](const Xy& a, const Xy& b) { return a.x < b.x; });

  std::size_t inside = 0;
  for (const auto& p : xy) inside += (p.x >= 0.0 && p.x <= 1.0) ? 1 : 0;
  if (inside < 2) throw Error("toa: fewer than two points after clipping");

  double area = 0.0;
  for (std::size_t i = 1; i < xy.size(); ++i) area += clipped_trapezoid(xy[i - 1], xy[i]);
  return area;
}

double toa(const Curve& curve) { return toa(curve.points, curve.slm_only, curve.llm_only); }

double toa100(const Dataset& dataset, const PricingSchedule& pricing, PreSweepOptions options) {
  options.quality = QualityMode::kPerfect;
  return toa(sweep_pre(dataset, pricing, options).curve);
}

double toa100(const Dataset& dataset, const PricingSchedule& pricing, CascadeSweepOptions options) {
  options.quality = QualityMode::kPerfect;
  return toa(sweep_cascade(dataset, pricing, options).curve);
}

Curve golden_curve(const Dataset& dataset, const PricingSchedule& pricing, QualityMode mode) {
  const auto& qs = dataset.questions;
  if (qs.empty()) throw Error("golden_curve: empty dataset");
  const RoutingContext ctx{dataset.profile, pricing, mode};

  std::vector<RoutingOutcome> on_slm(qs.size()), on_llm(qs.size());
  std::vector<double> accuracy(qs.size()), gain(qs.size());
  for (std::size_t i = 0; i < qs.size(); ++i) {
    on_slm[i] = pre_outcome(qs[i], false, ctx);
    on_llm[i] = pre_outcome(qs[i], true, ctx);
    accuracy[i] = on_slm[i].quality;
    gain[i] = on_llm[i].quality - on_slm[i].quality;
  }

  std::vector<std::size_t> order(qs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (mode == QualityMode::kActual && gain[a] != gain[b]) return gain[a] > gain[b];
    if (accuracy[a] != accuracy[b]) return accuracy[a] < accuracy[b];
    return qs[a].id < qs[b].id;
  });

  const double total_llm = dataset.profile.total_llm_cost(pricing);
  std::vector<RoutingOutcome> current = on_slm;
  auto point = [&](std::size_t m) {
    CurvePoint p;
    p.tau = static_cast<double>(m) / static_cast<double>(qs.size());
    p.cost = charged_cost_sum(current) / total_llm;
    p.performance = average_quality(current);
    p.n_routed = m;
    return p;
  };

  Curve curve;
  curve.slm_only = point(0);
  curve.slm_only.kind = PointKind::kSlmOnly;
  for (std::size_t m = 1; m <= qs.size(); ++m) {
    current[order[m - 1]] = on_llm[order[m - 1]];
    if (m < qs.size()) curve.points.push_back(point(m));
  }
  curve.llm_only = point(qs.size());
  curve.llm_only.kind = PointKind::kLlmOnly;
  return curve;
}

double togr_from_toa(double router_toa, double golden_toa) {
  const double golden_gain = toga(golden_toa);
  if (!(golden_gain > kDegenerateGain)) {
    throw Error("togr: golden routing has no trade-off gain (the SLM already solves the dataset)");
  }
  return toga(router_toa) / golden_gain;
}

double togr(const Curve& router, const Curve& golden) {
  return togr_from_toa(toa(router), toa(golden));
}

LatencyReport latency_report(std::span<const RoutingOutcome> outcomes) {
  LatencyReport r;
  double accepted = 0.0, rejected = 0.0;
  for (const auto& o : outcomes) {
    if (o.routed) {
      rejected += static_cast<double>(o.decision_latency_tokens);
      ++r.n_rejected;
    } else {
      accepted += static_cast<double>(o.decision_latency_tokens);
      ++r.n_accepted;
    }
  }
  r.agl_empty = r.n_accepted == 0;
  r.arol_empty = r.n_rejected == 0;
  if (!r.agl_empty) r.agl = accepted / static_cast<double>(r.n_accepted);
  if (!r.arol_empty) r.arol = rejected / static_cast<double>(r.n_rejected);
  return r;
}

}  // namespace routerlab
