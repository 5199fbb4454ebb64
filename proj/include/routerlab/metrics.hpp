#pragma once

#include <span>
#include <vector>

#include "routerlab/cascade.hpp"
#include "routerlab/cost_model.hpp"
#include "routerlab/pre_router.hpp"
#include "routerlab/types.hpp"

namespace routerlab {

inline constexpr double kRandomRoutingToa = 0.5;
inline constexpr double kDegenerateGain = 1e-12;

/// Trade-off area. Costs and performances are normalized against the two
/// endpoints, (0,0) and (1,1) are added, the polyline is sorted by cost,
/// clipped to cost in [0,1] and integrated with the trapezoid rule.
/// Throws when the endpoints do not span a positive cost and performance range.
double toa(std::span<const CurvePoint> points, const CurvePoint& slm_only,
           const CurvePoint& llm_only);
double toa(const Curve& curve);

inline double toga(double toa_value) { return toa_value - kRandomRoutingToa; }

/// ToA with the LLM assumed correct on every question.
double toa100(const Dataset& dataset, const PricingSchedule& pricing, PreSweepOptions options);
double toa100(const Dataset& dataset, const PricingSchedule& pricing, CascadeSweepOptions options);

/// Oracle routing: questions sorted by ascending SLM accuracy (ties by id),
/// one point per routed prefix m = 0..N. Perfect mode scores the LLM as always
/// correct. Actual mode instead orders by descending accuracy gain
/// (LLM correctness minus SLM accuracy), then ascending SLM accuracy and id.
Curve golden_curve(const Dataset& dataset, const PricingSchedule& pricing,
                   QualityMode mode = QualityMode::kPerfect);

/// (ToA(router) - 0.5) / (ToA(golden) - 0.5). Both curves must be built in the
/// same quality mode. Throws when the golden gain is <= 1e-12.
double togr(const Curve& router, const Curve& golden);
double togr_from_toa(double router_toa, double golden_toa);

struct LatencyReport {
  double agl = 0.0;   // mean decision latency over accepted questions
  double arol = 0.0;  // mean decision latency over routed questions
  std::size_t n_accepted = 0;
  std::size_t n_rejected = 0;
  bool agl_empty = true;
  bool arol_empty = true;
};

LatencyReport latency_report(std::span<const RoutingOutcome> outcomes);

}  // namespace routerlab
