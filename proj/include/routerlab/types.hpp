#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace routerlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A record or argument broke a data-model invariant. Records are rejected,
/// never repaired.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// One of the ten prompted confidence levels {0.1, 0.2, ..., 1.0}, held as an
/// integer number of tenths so comparisons on the grid are exact.
class ConfidenceLevel {
 public:
  static constexpr int kCount = 10;
  static constexpr double kGridTolerance = 1e-9;

  static ConfidenceLevel from_tenths(int tenths);
  /// Snaps to the nearest grid value; anything farther than 1e-9 throws.
  static ConfidenceLevel from_value(double value);

  int tenths() const { return tenths_; }
  double value() const { return tenths_ / 10.0; }

  auto operator<=>(const ConfidenceLevel&) const = default;

 private:
  explicit ConfidenceLevel(int tenths) : tenths_(tenths) {}
  int tenths_;
};

/// All ten levels in ascending order.
std::vector<ConfidenceLevel> all_confidence_levels();

/// Per-token prices in USD per 10^6 tokens. Default-constructed values are
/// the reference schedule: SLM output 0.08, LLM output 1.10, inputs at a
/// quarter of the output price.
struct PricingSchedule {
  static constexpr double kDefaultSlmOut = 0.08;
  static constexpr double kDefaultLlmOut = 1.10;

  double slm_in = kDefaultSlmOut / 4;
  double slm_out = kDefaultSlmOut;
  double llm_in = kDefaultLlmOut / 4;
  double llm_out = kDefaultLlmOut;

  void validate() const;
  PricingSchedule scaled(double factor) const;
  bool operator==(const PricingSchedule&) const = default;
};

struct SampleRecord {
  std::optional<std::string> answer;  // canonical key; absent for refusals
  bool correct = false;
  std::int64_t tokens = 1;
  std::optional<ConfidenceLevel> confidence;  // absent for plain SC samples
  bool refusal = false;

  static SampleRecord answered(std::string answer, bool correct, std::int64_t tokens,
                               std::optional<ConfidenceLevel> confidence = std::nullopt);
  static SampleRecord refused(std::int64_t tokens,
                              std::optional<ConfidenceLevel> confidence = std::nullopt);

  bool operator==(const SampleRecord&) const = default;
};

struct LlmOutcome {
  bool correct = false;
  std::int64_t tokens = 1;
  bool operator==(const LlmOutcome&) const = default;
};

struct QuestionRecord {
  std::string id;
  std::int64_t input_tokens = 1;
  std::optional<double> pre_score;
  std::vector<SampleRecord> slm_samples;
  std::optional<LlmOutcome> llm;

  bool operator==(const QuestionRecord&) const = default;
};

/// Dataset-level aggregates. The LLM output length used for costing is the
/// dataset mean, not the per-question count.
struct DatasetProfile {
  std::size_t n_questions = 0;
  std::optional<double> avg_llm_tokens;
  std::int64_t total_input_tokens = 0;

  /// Sum over questions of the LLM cost with the mean output length
  /// substituted, in USD. Throws when no LLM data exists.
  double total_llm_cost(const PricingSchedule& pricing) const;
  double require_avg_llm_tokens() const;
};

DatasetProfile make_profile(const std::vector<QuestionRecord>& questions);

struct Dataset {
  std::vector<QuestionRecord> questions;
  DatasetProfile profile;

  static Dataset from_questions(std::vector<QuestionRecord> questions);
};

enum class RoutingMode { kPre, kCascade };

struct RoutingOutcome {
  std::string question_id;
  bool routed = false;
  double quality = 0.0;
  double slm_cost = 0.0;  // charged SLM cost in USD
  double llm_cost = 0.0;  // charged LLM cost in USD
  std::int64_t decision_latency_tokens = 0;
  std::optional<std::string> accepted_answer;
  RoutingMode mode = RoutingMode::kPre;
  int samples_used = 0;  // cascade only: samples charged in full
};

enum class PointKind { kSlmOnly, kThreshold, kLlmOnly };

struct CurvePoint {
  PointKind kind = PointKind::kThreshold;
  double tau = 0.0;  // meaningless for the two endpoint kinds
  double cost = 0.0;
  double performance = 0.0;
  std::size_t n_routed = 0;

  bool operator==(const CurvePoint&) const = default;
};

/// A cost/performance curve: interior points plus the two pure-model endpoints.
struct Curve {
  CurvePoint slm_only;
  std::vector<CurvePoint> points;
  CurvePoint llm_only;

  /// Endpoints and interior points, SLM endpoint first and LLM endpoint last.
  std::vector<CurvePoint> all() const;
};

struct MetricsReport {
  std::optional<double> toa, toga, toa100, toga100, togr, agl, arol;

  void set_toa(double value) {
    toa = value;
    toga = value - 0.5;
  }
  void set_toa100(double value) {
    toa100 = value;
    toga100 = value - 0.5;
  }
};

struct PreferencePair {
  std::string question_id;
  std::string chosen;
  std::string rejected;
  std::int64_t chosen_tokens = 0;
  std::int64_t rejected_tokens = 0;

  bool operator==(const PreferencePair&) const = default;
};

struct RefusalExample {
  std::string question_id;
  ConfidenceLevel threshold = ConfidenceLevel::from_tenths(1);
  std::string prompt;
  std::string target;

  bool operator==(const RefusalExample&) const = default;
};

/// Trims surrounding whitespace and lower-cases ASCII letters.
std::string canonical_answer(std::string_view raw);

void validate(const SampleRecord& sample, std::string_view question_id = {});
void validate(const QuestionRecord& question);

}  // namespace routerlab
