#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "routerlab/metrics.hpp"
#include "routerlab/trainset.hpp"
#include "routerlab/types.hpp"

namespace routerlab {

/// Receives non-fatal diagnostics such as unknown JSON fields.
using WarningSink = std::function<void(std::string_view)>;

/// Writes warnings to stderr.
WarningSink stderr_warnings();

/// Parses one questions.jsonl object. Answers are canonicalized; confidence
/// levels snap to the grid. Throws ValidationError naming the field.
QuestionRecord question_from_json(const nlohmann::json& j, const WarningSink& warn = {});
nlohmann::json to_json(const QuestionRecord& q);

/// Streams a questions.jsonl file. Blank lines are skipped; every diagnostic
/// carries its 1-based line number.
Dataset read_dataset(std::istream& in, const WarningSink& warn = {});
Dataset load_dataset(const std::filesystem::path& path, const WarningSink& warn = stderr_warnings());

void write_dataset(std::ostream& out, std::span<const QuestionRecord> questions);
void write_dataset(const std::filesystem::path& path, std::span<const QuestionRecord> questions);

/// `{"slm_in":..,"slm_out":..,"llm_in":..,"llm_out":..}` in USD per 10^6 tokens.
PricingSchedule pricing_from_json(const nlohmann::json& j);
PricingSchedule load_pricing(const std::filesystem::path& path);

/// CSV with header `tau,cost,performance,n_routed`; endpoint rows carry the
/// sentinels slm_only (first) and llm_only (last), threshold rows sorted by tau.
std::string format_curve(std::span<const CurvePoint> points);
void write_curve(std::span<const CurvePoint> points, const std::filesystem::path& path);
std::vector<CurvePoint> parse_curve(std::istream& in);
Curve load_curve(const std::filesystem::path& path);

enum class MetricsMode { kActual, kPerfect };

/// The seven report fields (null when not computed) plus "mode".
nlohmann::json metrics_to_json(const MetricsReport& report, MetricsMode mode);

TrainQuestion train_question_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrainQuestion& q);
/// `{"id","question","samples":[{"text","correct","tokens"}]}` per line.
std::vector<TrainQuestion> read_train_corpus(std::istream& in);
std::vector<TrainQuestion> load_train_corpus(const std::filesystem::path& path);

nlohmann::json to_json(const PreferencePair& p);
nlohmann::json to_json(const RefusalExample& e);

/// Inert record of the fine-tuning hyperparameters; nothing here trains.
nlohmann::json training_config();

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace routerlab
