// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "routerlab/cascade.hpp"
#include "routerlab/cost_model.hpp"
#include "routerlab/metrics.hpp"
#include "routerlab/pre_router.hpp"
#include "routerlab/synthetic.hpp"
#include "routerlab/trainset.hpp"

using namespace routerlab;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

int failures = 0;

void criterion(int id, const char* name, double time_limit_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_limit_s > 0 && secs > time_limit_s) {
    v.require(false, "runtime " + std::to_string(secs) + " s over limit");
    if (v.detail.empty()) v.detail = "runtime over limit";
  }
  if (!v.pass) ++failures;
  std::printf("%s  [%2d] %-44s %9.3f ms  %s\n", v.pass ? "PASS" : "FAIL", id, name, secs * 1e3,
              v.detail.c_str());
}

std::string fmt(const char* f, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

CurvePoint pt(double c, double p) { return {PointKind::kThreshold, 0.0, c, p, 0}; }

// Weight in 1/40 units: exact for alpha in {0, 0.5}.
long long weight_units(const SampleRecord& s, bool half) {
  if (!s.confidence) return 40;
  return half ? 11 + 2 * s.confidence->tenths() : 22;
}

std::int64_t latency_oracle(const std::vector<SampleRecord>& s, double tau, bool half) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return s[a].tokens < s[b].tokens; });
  long long total = 0;
  for (const auto& x : s) total += weight_units(x, half);
  const long double bar = (static_cast<long double>(tau) - 1e-12L) * total;
  std::map<std::string, long long> mass;
  long long rem = total;
  for (auto i : order) {
    rem -= weight_units(s[i], half);
    if (!s[i].refusal) mass[*s[i].answer] += weight_units(s[i], half);
    long long best = 0;
    for (const auto& [a, m] : mass) best = std::max(best, m);
    if ((!mass.empty() && best >= bar) || best + rem < bar) return s[i].tokens;
  }
  return s[order.back()].tokens;
}

// -- criteria ---------------------------------------------------------------

Verdict c1_toa_anchors() {
  Verdict v;
  const CurvePoint s{PointKind::kSlmOnly, 0, 0, 0, 0}, l{PointKind::kLlmOnly, 0, 1, 1, 0};
  std::vector<CurvePoint> diag{pt(0, 0), pt(0.5, 0.5), pt(1, 1)};
  std::vector<CurvePoint> step{pt(0, 1), pt(1, 1)};
  const double a = toa(diag, s, l), b = toa(step, s, l);
  v.require(std::abs(a - 0.5) <= 1e-12, fmt("diagonal %.17g", a));
  v.require(std::abs(b - 1.0) <= 1e-12, fmt("step %.17g", b));
  v.detail = v.pass ? fmt("diagonal=%.15f step=%.15f", a, b) : v.detail;
  return v;
}

Verdict c2_price_ratio() {
  Verdict v;
  const PricingSchedule p;
  v.require(p.llm_out / p.slm_out == 13.75, fmt("output ratio %.17g", p.llm_out / p.slm_out));
  v.require(p.llm_in / p.slm_in == 13.75, fmt("input ratio %.17g", p.llm_in / p.slm_in));
  if (v.pass) v.detail = "input and output ratios == 13.75";
  return v;
}

Verdict c3_kv_cache_cost() {
  Verdict v;
  QuestionRecord q;
  q.id = "q";
  q.input_tokens = 173;
  const std::int64_t lens[10] = {31, 44, 58, 12, 97, 66, 23, 81, 40, 15};
  std::int64_t out_sum = 0;
  for (int k = 0; k < 10; ++k) {
    q.slm_samples.push_back(SampleRecord::answered(std::string(1, static_cast<char>('a' + k)), false,
                                                   lens[k], ConfidenceLevel::from_tenths(10)));
    out_sum += lens[k];
  }
  q.llm = LlmOutcome{true, 359};
  RoutingContext ctx;
  ctx.profile = make_profile({q});
  for (bool force_route : {true, false}) {
    const double tau = force_route ? 0.5 : 0.0;
    std::vector<RoutingOutcome> out{route_cascade(q, tau, CascadeConfig{Scheme::kFcv, 10, 0.5}, ctx)};
    const double cl = (0.275 * 173 + 1.10 * 359) / 1e6;
    const double slm = (0.02 * 173 + 0.08 * static_cast<double>(out_sum)) / 1e6;
    const double expected = (slm + (out[0].routed ? cl : 0.0)) / cl;
    const double got = normalized_cascade_cost(out, 10, ctx.profile, ctx.pricing);
    const double rel = std::abs(got - expected) / expected;
    v.require(out[0].routed == force_route, "routing decision not as constructed");
    v.require(rel <= 1e-12, fmt("relative error %.3g (got %.17g)", rel, got));
    if (v.pass && force_route) v.detail = fmt("routed rel.err %.2g", rel);
  }
  return v;
}

Verdict c4_early_stop() {
  Verdict v;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int trials = 20000;
  int exact_latency_checked = 0;
  for (int t = 0; t < trials && v.pass; ++t) {
    const int k = 1 + static_cast<int>(rng() % 10);
    const int scheme = static_cast<int>(rng() % 3);  // sc, fcv, rcv-like
    const int alpha_kind = static_cast<int>(rng() % 3);
    const double alpha = alpha_kind == 0 ? 0.0 : alpha_kind == 1 ? 0.5 : 1.2 * u(rng);
    const double refusal_rate = u(rng);
    std::vector<SampleRecord> s;
    for (int i = 0; i < k; ++i) {
      std::optional<ConfidenceLevel> c;
      if (scheme == 1) c = ConfidenceLevel::from_tenths(10);
      if (scheme == 2) c = ConfidenceLevel::from_tenths(1 + (i + static_cast<int>(rng() % 10)) % 10);
      const auto tok = static_cast<std::int64_t>(1 + rng() % 40);
      if (c && u(rng) < refusal_rate) {
        s.push_back(SampleRecord::refused(tok, c));
      } else {
        s.push_back(SampleRecord::answered(std::string(1, static_cast<char>('a' + rng() % 4)), false, tok, c));
      }
    }
    const double tau = u(rng);
    const auto sim = simulate_parallel(s, tau, alpha);
    const auto full = decide(tally_votes(s, alpha), tau);
    std::int64_t longest = 0;
    for (const auto& x : s) longest = std::max(longest, x.tokens);
    v.require(sim.decision.accept == full.accept && sim.decision.answer == full.answer,
              "decision differs from full tally at trial " + std::to_string(t));
    v.require(sim.latency_tokens <= longest, "latency exceeds longest at trial " + std::to_string(t));
    if (alpha_kind < 2) {
      v.require(sim.latency_tokens == latency_oracle(s, tau, alpha_kind == 1),
                "latency differs from prefix oracle at trial " + std::to_string(t));
      ++exact_latency_checked;
    }
  }
  if (v.pass) {
    v.detail = std::to_string(trials) + " configs; " + std::to_string(exact_latency_checked) +
               " latencies match the exact prefix oracle";
  }
  return v;
}

Verdict c5_uniform_majority() {
  Verdict v;
  std::mt19937_64 rng(5);
  const int trials = 1000;
  for (int t = 0; t < trials && v.pass; ++t) {
    const int k = 1 + static_cast<int>(rng() % 12);
    const bool tagged = rng() % 2;
    std::vector<SampleRecord> s;
    std::map<std::string, int> count;
    for (int i = 0; i < k; ++i) {
      std::string a(1, static_cast<char>('a' + rng() % 4));
      std::optional<ConfidenceLevel> c;
      if (tagged) c = ConfidenceLevel::from_tenths(1 + static_cast<int>(rng() % 10));
      s.push_back(SampleRecord::answered(a, false, 10, c));
      ++count[a];
    }
    // Independent majority: highest count, first key in map order on ties.
    std::string best;
    int best_n = -1;
    for (const auto& [a, n] : count) {
      if (n > best_n) {
        best = a;
        best_n = n;
      }
    }
    const auto d = decide(tally_votes(s, tagged ? 0.0 : 0.5), 0.0);
    v.require(d.answer == best, "argmax differs at trial " + std::to_string(t));
    v.require(std::abs(d.top_share - static_cast<double>(best_n) / k) <= 1e-12,
              "share differs at trial " + std::to_string(t));
  }
  if (v.pass) v.detail = "1000 tallies agree";
  return v;
}

Verdict c6_loss() {
  Verdict v;
  const auto eq = combined_loss({-4.2, -4.2, -9.1, -9.1, 12});
  v.require(std::abs(eq.dpo - std::log(2.0)) <= 1e-10, fmt("l_dpo %.17g", eq.dpo));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double m = u(rng), beta = 0.25 + std::abs(u(rng)) / 2;
    auto f = [&](double x) { return combined_loss({x, 0.0, 0.0, 0.0, 1}, beta).dpo; };
    const double h = 1e-5;
    const double numeric = (f(m + h) - f(m - h)) / (2 * h);
    const double analytic = -beta / (1.0 + std::exp(beta * m));
    worst = std::max(worst, std::abs(numeric - analytic));
  }
  v.require(worst <= 1e-6, fmt("max derivative error %.3g", worst));
  if (v.pass) v.detail = fmt("|l-ln2|=%.2g, max d-err=%.2g", std::abs(eq.dpo - std::log(2.0)), worst);
  return v;
}

Verdict c7_builders() {
  Verdict v;
  SyntheticParams p;
  p.sample_tokens = {20, 400};
  const auto corpus = generate_synthetic_corpus(7, 10000, p);
  std::size_t pairs = 0;
  for (const auto& q : corpus) {
    if (auto pair = build_dpo_pair(q)) {
      ++pairs;
      v.require(static_cast<double>(pair->rejected_tokens) > 1.5 * static_cast<double>(pair->chosen_tokens),
                "1.5x rule violated for " + q.id);
      bool chosen_ok = false, rejected_ok = false;
      for (const auto& s : q.samples) {
        if (s.text == pair->chosen && s.correct) chosen_ok = true;
        if (s.text == pair->rejected && !s.correct) rejected_ok = true;
      }
      v.require(chosen_ok && rejected_ok, "pair sides have wrong correctness for " + q.id);
    }
    const int acc = accuracy_tenths(std::span<const TrainSample>(q.samples));
    const auto set = build_refusal_set(q, 42);
    v.require(set.size() == 10, "refusal set size for " + q.id);
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto& e = set[i];
      const int t = static_cast<int>(i) + 1;
      char prefix[80];
      std::snprintf(prefix, sizeof prefix, "Please respond with a confidence level of %d.%d:", t / 10, t % 10);
      v.require(e.threshold.tenths() == t, "thresholds out of order");
      v.require(e.prompt.rfind(prefix, 0) == 0, "prompt prefix not bit-exact");
      const bool rejects = e.target == "Sorry, I can't answer that.";
      v.require(rejects == (t > acc), "answered thresholds not the prefix {<= accuracy}");
    }
  }
  if (v.pass) v.detail = std::to_string(pairs) + " pairs, 10000 refusal sets";
  return v;
}

template <typename Curve_>
void check_monotone(Verdict& v, const Curve_& c, bool perf, const std::string& what) {
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    v.require(c.points[i].n_routed >= c.points[i - 1].n_routed, what + ": routed count decreases");
    v.require(c.points[i].cost >= c.points[i - 1].cost, what + ": cost decreases");
    if (perf) v.require(c.points[i].performance >= c.points[i - 1].performance, what + ": performance decreases");
  }
}

Verdict c8_monotone() {
  Verdict v;
  const Dataset d = Dataset::from_questions(generate_synthetic(42, 1000));
  for (auto mode : {QualityMode::kActual, QualityMode::kPerfect}) {
    const bool perf = mode == QualityMode::kPerfect;
    for (auto src : {ScoreSource::kPreScore, ScoreSource::kRefusal}) {
      PreSweepOptions o;
      o.score_source = src;
      o.quality = mode;
      check_monotone(v, sweep_pre(d, PricingSchedule{}, o).curve, perf, "pre");
    }
    for (auto scheme : {Scheme::kSc, Scheme::kRcv, Scheme::kFcv}) {
      CascadeSweepOptions o;
      o.config.scheme = scheme;
      o.quality = mode;
      check_monotone(v, sweep_cascade(d, PricingSchedule{}, o).curve, perf, "cascade");
    }
  }
  if (v.pass) v.detail = "2 pre + 3 cascade sweeps, both quality modes";
  return v;
}

Verdict c9_golden_dominance() {
  Verdict v;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr double kSlack = 1e-12;  // summation-order rounding in the cost axis
  std::size_t routers = 0;
  double worst_gap = 1.0;
  for (int ds = 0; ds < 100 && v.pass; ++ds) {
    const std::size_t n = 2 + rng() % 49;
    const auto in_tok = static_cast<std::int64_t>(20 + rng() % 200);
    const auto out_tok = static_cast<std::int64_t>(20 + rng() % 200);
    std::vector<QuestionRecord> qs(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& q = qs[i];
      q.id = "d" + std::to_string(ds) + "_" + std::to_string(1000 + i);
      q.input_tokens = in_tok;
      const int correct = static_cast<int>(rng() % 11);
      for (int k = 0; k < 10; ++k) {
        q.slm_samples.push_back(SampleRecord::answered(k < correct ? "a" : "b", k < correct, out_tok));
      }
      q.llm = LlmOutcome{u(rng) < 0.8, static_cast<std::int64_t>(50 + rng() % 300)};
    }
    if (std::all_of(qs.begin(), qs.end(),
                    [](const auto& q) { return q.slm_samples[0].correct && q.slm_samples[9].correct; })) {
      qs[0].slm_samples[9] = SampleRecord::answered("b", false, out_tok);
    }
    const Dataset d = Dataset::from_questions(qs);
    const Curve golden = golden_curve(d, PricingSchedule{}, QualityMode::kPerfect);
    const double g = toa(golden);

    for (int r = 0; r < 8; ++r) {
      Dataset scored = d;
      for (std::size_t i = 0; i < n; ++i) {
        const double acc = summarize_slm(scored.questions[i]).accuracy;
        const double noise = r * 0.15;
        scored.questions[i].pre_score = std::clamp(acc + noise * (2 * u(rng) - 1), 0.0, 1.0);
      }
      PreSweepOptions o;
      o.quality = QualityMode::kPerfect;
      o.taus.clear();
      for (const auto& q : scored.questions) o.taus.push_back(*q.pre_score);
      o.taus.push_back(0.0);
      std::sort(o.taus.begin(), o.taus.end());
      o.taus.erase(std::unique(o.taus.begin(), o.taus.end()), o.taus.end());
      const double a = toa(sweep_pre(scored, PricingSchedule{}, o).curve);
      worst_gap = std::min(worst_gap, g - a);
      v.require(g + kSlack >= a, fmt("router ToA-100 %.15f beats golden %.15f", a, g));
      ++routers;
    }
    v.require(std::abs(togr(golden, golden) - 1.0) <= 1e-9, "togr(golden) != 1");
    Curve diag = golden;
    diag.points = {pt(0.5 * (golden.slm_only.cost + golden.llm_only.cost),
                      0.5 * (golden.slm_only.performance + golden.llm_only.performance))};
    v.require(std::abs(togr(diag, golden)) <= 1e-9, "togr(diagonal) != 0");
  }
  if (v.pass) v.detail = std::to_string(routers) + " routers; min golden margin " + fmt("%.3g", worst_gap);
  return v;
}

Verdict c10_end_to_end() {
  Verdict v;
  const Dataset d = Dataset::from_questions(generate_synthetic(42, 1000));
  const PricingSchedule pricing;
  const double golden = toa(golden_curve(d, pricing, QualityMode::kPerfect));

  PreSweepOptions o;
  o.quality = QualityMode::kPerfect;
  o.score_source = ScoreSource::kRefusal;
  const double refusal_togr = togr_from_toa(toa(sweep_pre(d, pricing, o).curve), golden);
  o.score_source = ScoreSource::kPreScore;
  const double noisy_togr = togr_from_toa(toa(sweep_pre(d, pricing, o).curve), golden);
  v.require(refusal_togr > noisy_togr, fmt("refusal ToGR %.4f <= noisy %.4f", refusal_togr, noisy_togr));

  RoutingContext ctx{d.profile, pricing, QualityMode::kPerfect};
  auto arol = [&](Scheme scheme) {
    std::vector<RoutingOutcome> out;
    for (const auto& q : d.questions) out.push_back(route_cascade(q, 0.6, CascadeConfig{scheme, 10, 0.5}, ctx));
    return latency_report(out).arol;
  };
  const double sc = arol(Scheme::kSc), fcv = arol(Scheme::kFcv);
  v.require(sc > 0 && fcv < 0.2 * sc, fmt("FCV AROL %.2f vs SC AROL %.2f", fcv, sc));
  if (v.pass) {
    v.detail = fmt("ToGR refusal %.3f > noisy %.3f; ", refusal_togr, noisy_togr) +
               fmt("AROL fcv %.1f / sc %.1f", fcv, sc);
  }
  return v;
}

}  // namespace

int main() {
  criterion(1, "ToA of diagonal and step curves", 1e-3, c1_toa_anchors);
  criterion(2, "default price ratio 13.75", 0, c2_price_ratio);
  criterion(3, "K=10 cascade cost vs hand arithmetic", 0, c3_kv_cache_cost);
  criterion(4, "early stop never changes the decision", 5.0, c4_early_stop);
  criterion(5, "uniform weights equal plain majority", 0, c5_uniform_majority);
  criterion(6, "combined loss identities", 0, c6_loss);
  criterion(7, "preference and refusal builder rules", 0, c7_builders);
  criterion(8, "routing monotone in tau (seed 42, n=1000)", 10.0, c8_monotone);
  criterion(9, "golden routing dominates threshold routers", 0, c9_golden_dominance);
  criterion(10, "refusal routing beats noisy score; AROL", 30.0, c10_end_to_end);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
