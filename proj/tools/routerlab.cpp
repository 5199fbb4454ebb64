// routerlab: replay recorded SLM/LLM responses through routing policies.
//
//   routerlab validate questions.jsonl
//   routerlab synth --seed 42 --n 1000 --out questions.jsonl
//   routerlab sweep --mode pre --input questions.jsonl --score-source refusal --out run/
//   routerlab sweep --mode cascade --scheme fcv --input questions.jsonl --out run/
//   routerlab build --kind dpo --input corpus.jsonl --out pairs.jsonl
//   routerlab metrics --curve run/curve.csv --golden run/golden.csv
//
// Exit codes: 0 success, 1 validation or runtime error, 2 usage error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "routerlab/cascade.hpp"
#include "routerlab/io.hpp"
#include "routerlab/metrics.hpp"
#include "routerlab/pre_router.hpp"
#include "routerlab/synthetic.hpp"
#include "routerlab/trainset.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace routerlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RL_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("RL_SEED must be a non-negative integer");
  }
  return 42;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------- validate

struct ValidateArgs {
  std::string input;
};

int run_validate(const ValidateArgs& a) {
  const Dataset d = load_dataset(a.input);
  std::cout << "ok: " << d.profile.n_questions << " questions";
  if (d.profile.avg_llm_tokens) std::cout << ", avg LLM tokens " << *d.profile.avg_llm_tokens;
  std::cout << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string mode = "pre";
  std::string input;
  std::string pricing;
  std::string score_source = "pre";
  std::string scheme = "fcv";
  int k = 10;
  double alpha = kDefaultVoteAlpha;
  std::string taus = "0:1:0.1";
  double report_tau = 0.6;
  bool assume_perfect = false;
  bool golden = false;
  bool serial = false;
  int jobs = 0;
  std::string out;
};

Scheme parse_scheme(const std::string& s) {
  if (s == "sc") return Scheme::kSc;
  if (s == "rcv") return Scheme::kRcv;
  if (s == "fcv") return Scheme::kFcv;
  throw UsageError("unknown scheme '" + s + "'");
}

int run_sweep(const SweepArgs& a) {
  set_worker_count(a.jobs);
  const Dataset dataset = load_dataset(a.input);
  const PricingSchedule pricing = a.pricing.empty() ? PricingSchedule{} : load_pricing(a.pricing);
  const auto taus = parse_tau_grid(a.taus);
  const Execution exec = a.serial ? Execution::kSerial : Execution::kParallel;
  const bool cascade = a.mode == "cascade";

  // Returns the curve and per-tau outcomes for one quality mode.
  auto run = [&](QualityMode quality) {
    if (cascade) {
      CascadeSweepOptions o;
      o.taus = taus;
      o.config = {parse_scheme(a.scheme), a.k, a.alpha};
      o.quality = quality;
      o.execution = exec;
      return sweep_cascade(dataset, pricing, o);
    }
    PreSweepOptions o;
    o.taus = taus;
    o.score_source = a.score_source == "refusal" ? ScoreSource::kRefusal : ScoreSource::kPreScore;
    o.quality = quality;
    o.execution = exec;
    return sweep_pre(dataset, pricing, o);
  };

  MetricsReport report;
  std::optional<SweepResult> written;
  if (!a.assume_perfect) {
    written = run(QualityMode::kActual);
    report.set_toa(toa(written->curve));
  }
  if (a.assume_perfect || a.golden) {
    SweepResult perfect = run(QualityMode::kPerfect);
    report.set_toa100(toa(perfect.curve));
    if (a.assume_perfect) written = std::move(perfect);
  }
  std::optional<Curve> golden;
  if (a.assume_perfect || a.golden) {
    const QualityMode gm = a.assume_perfect ? QualityMode::kPerfect : QualityMode::kActual;
    golden = golden_curve(dataset, pricing, gm);
    report.togr = togr_from_toa(a.assume_perfect ? *report.toa100 : *report.toa, toa(*golden));
  }

  json latency = json::array();
  if (cascade) {
    const RoutingContext ctx{dataset.profile, pricing,
                             a.assume_perfect ? QualityMode::kPerfect : QualityMode::kActual};
    const CascadeConfig config{parse_scheme(a.scheme), a.k, a.alpha};
    std::vector<RoutingOutcome> at_tau;
    for (const auto& q : dataset.questions) at_tau.push_back(route_cascade(q, a.report_tau, config, ctx));
    const LatencyReport lr = latency_report(at_tau);
    report.agl = lr.agl;
    report.arol = lr.arol;
    for (std::size_t t = 0; t < written->taus.size(); ++t) {
      const LatencyReport r = latency_report(written->outcomes[t]);
      latency.push_back({{"tau", written->taus[t]}, {"agl", r.agl}, {"arol", r.arol},
                         {"n_accepted", r.n_accepted}, {"n_rejected", r.n_rejected},
                         {"agl_empty", r.agl_empty}, {"arol_empty", r.arol_empty}});
    }
  }

  json metrics = metrics_to_json(report, a.assume_perfect ? MetricsMode::kPerfect : MetricsMode::kActual);
  if (cascade) {
    metrics["report_tau"] = a.report_tau;
    metrics["latency"] = std::move(latency);
  }

  fs::create_directories(a.out);
  write_curve(written->curve.all(), fs::path(a.out) / "curve.csv");
  write_json(fs::path(a.out) / "metrics.json", metrics);
  if (golden && a.golden) write_curve(golden->all(), fs::path(a.out) / "golden.csv");
  std::cout << metrics.dump() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- build

struct BuildArgs {
  std::string kind = "dpo";
  std::string input;
  std::string out;
  std::optional<std::uint64_t> seed;
  double min_ratio = kDefaultMinLengthRatio;
  bool long_correct_negative = false;
  std::string train_config;
};

int run_build(const BuildArgs& a) {
  const auto corpus = load_train_corpus(a.input);
  std::string lines;
  std::size_t emitted = 0, skipped = 0;
  if (a.kind == "dpo") {
    for (const auto& q : corpus) {
      const auto pair = build_dpo_pair(q, a.min_ratio);
      if (pair) {
        lines += to_json(*pair).dump() + "\n";
        ++emitted;
      } else {
        ++skipped;
      }
      if (a.long_correct_negative) {
        if (const auto extra = build_long_correct_pair(q, a.min_ratio)) {
          lines += to_json(*extra).dump() + "\n";
          ++emitted;
        }
      }
    }
  } else {
    const std::uint64_t seed = resolve_seed(a.seed);
    for (const auto& q : corpus) {
      for (const auto& ex : build_refusal_set(q, seed)) {
        lines += to_json(ex).dump() + "\n";
        ++emitted;
      }
    }
  }
  write_text(a.out, lines);
  if (!a.train_config.empty()) write_json(a.train_config, training_config());
  std::cout << "emitted " << emitted << ", skipped " << skipped << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::optional<std::uint64_t> seed;
  std::size_t n = 1000;
  std::string out;
  bool corpus = false;
  SyntheticParams params;
};

int run_synth(const SynthArgs& a) {
  const std::uint64_t seed = resolve_seed(a.seed);
  if (a.corpus) {
    std::string lines;
    for (const auto& q : generate_synthetic_corpus(seed, a.n, a.params)) lines += to_json(q).dump() + "\n";
    write_text(a.out, lines);
  } else {
    const auto questions = generate_synthetic(seed, a.n, a.params);
    write_dataset(fs::path(a.out), questions);
  }
  std::cout << "wrote " << a.n << " questions to " << a.out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- metrics

struct MetricsArgs {
  std::string curve;
  std::string golden;
  std::string mode = "actual";
  std::string out;
};

int run_metrics(const MetricsArgs& a) {
  const Curve curve = load_curve(a.curve);
  const bool perfect = a.mode == "perfect";
  MetricsReport report;
  const double value = toa(curve);
  if (perfect) {
    report.set_toa100(value);
  } else {
    report.set_toa(value);
  }
  if (!a.golden.empty()) report.togr = togr(curve, load_curve(a.golden));
  const json j = metrics_to_json(report, perfect ? MetricsMode::kPerfect : MetricsMode::kActual);
  if (!a.out.empty()) write_json(a.out, j);
  std::cout << j.dump() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"routerlab: SLM/LLM routing simulation and evaluation"};
  app.require_subcommand(1);

  ValidateArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Check a questions.jsonl file");
  validate_cmd->add_option("input", validate_args.input, "questions.jsonl")->required();

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep tau and write curve.csv + metrics.json");
  sweep_cmd->add_option("--mode", sweep.mode)->check(CLI::IsMember({"pre", "cascade"}));
  sweep_cmd->add_option("--input", sweep.input, "questions.jsonl")->required();
  sweep_cmd->add_option("--pricing", sweep.pricing, "pricing JSON (USD per 1M tokens)");
  sweep_cmd->add_option("--score-source", sweep.score_source)->check(CLI::IsMember({"pre", "refusal"}));
  sweep_cmd->add_option("--scheme", sweep.scheme)->check(CLI::IsMember({"sc", "rcv", "fcv"}));
  sweep_cmd->add_option("--k", sweep.k, "samples per cascade vote")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--alpha", sweep.alpha, "vote weight coefficient")->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--taus", sweep.taus, "start:end:step");
  sweep_cmd->add_option("--tau", sweep.report_tau, "tau for the AGL/AROL report")->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_flag("--assume-perfect", sweep.assume_perfect, "score the LLM as always correct");
  sweep_cmd->add_flag("--golden", sweep.golden, "also write golden.csv and report ToGR");
  sweep_cmd->add_flag("--serial", sweep.serial, "use the serial reference implementation");
  sweep_cmd->add_option("--jobs", sweep.jobs, "worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--out", sweep.out, "output directory")->required();

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Build training JSONL from a sampled corpus");
  build_cmd->add_option("--kind", build.kind)->check(CLI::IsMember({"dpo", "refusal"}));
  build_cmd->add_option("--input", build.input, "corpus JSONL")->required();
  build_cmd->add_option("--out", build.out, "output JSONL")->required();
  build_cmd->add_option("--seed", build.seed);
  build_cmd->add_option("--min-ratio", build.min_ratio)->check(CLI::PositiveNumber);
  build_cmd->add_flag("--with-long-correct-negative", build.long_correct_negative,
                      "ablation: also pair against the longest correct response");
  build_cmd->add_option("--train-config", build.train_config, "write the fine-tuning config JSON here");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a seeded synthetic dataset");
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->add_option("--n", synth.n)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--out", synth.out)->required();
  synth_cmd->add_flag("--corpus", synth.corpus, "emit a text corpus for `build` instead");
  synth_cmd->add_option("--easy-fraction", synth.params.easy_fraction);
  synth_cmd->add_option("--difficulty-min", synth.params.difficulty_min);
  synth_cmd->add_option("--difficulty-max", synth.params.difficulty_max);
  synth_cmd->add_option("--llm-accuracy", synth.params.llm_accuracy);
  synth_cmd->add_option("--pre-score-noise", synth.params.pre_score_noise);
  synth_cmd->add_option("--plain-samples", synth.params.plain_samples);
  synth_cmd->add_option("--top-level-samples", synth.params.top_level_samples);
  synth_cmd->add_option("--sample-tokens-min", synth.params.sample_tokens.min);
  synth_cmd->add_option("--sample-tokens-max", synth.params.sample_tokens.max);

  MetricsArgs metrics;
  auto* metrics_cmd = app.add_subcommand("metrics", "Compute ToA/ToGR from curve CSVs");
  metrics_cmd->add_option("--curve", metrics.curve)->required();
  metrics_cmd->add_option("--golden", metrics.golden);
  metrics_cmd->add_option("--mode", metrics.mode)->check(CLI::IsMember({"actual", "perfect"}));
  metrics_cmd->add_option("--out", metrics.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate_cmd) return run_validate(validate_args);
    if (*sweep_cmd) return run_sweep(sweep);
    if (*build_cmd) return run_build(build);
    if (*synth_cmd) return run_synth(synth);
    if (*metrics_cmd) return run_metrics(metrics);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitUsage;
}
