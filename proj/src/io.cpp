#include "routerlab/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace routerlab {

using nlohmann::json;

namespace {

void warn_unknown(const json& obj, std::initializer_list<std::string_view> known, std::string_view where,
                  const WarningSink& warn) {
  if (!warn) return;
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      warn("ignoring unknown field '" + key + "' in " + std::string(where));
    }
  }
}

const json& field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw ValidationError(std::string(name) + ": missing");
  return *it;
}

std::int64_t int_field(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (!v.is_number_integer()) throw ValidationError(std::string(name) + ": expected an integer");
  return v.get<std::int64_t>();
}

bool bool_field(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (!v.is_boolean()) throw ValidationError(std::string(name) + ": expected a boolean");
  return v.get<bool>();
}

std::string string_field(const json& obj, const char* name) {
  const json& v = field(obj, name);
  if (!v.is_string()) throw ValidationError(std::string(name) + ": expected a string");
  return v.get<std::string>();
}

/// Missing and null are both "absent".
const json* nullable(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

double number(const json& v, const char* name) {
  if (!v.is_number()) throw ValidationError(std::string(name) + ": expected a number");
  return v.get<double>();
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

template <typename Fn>
void for_each_jsonl(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
    }
    try {
      fn(j, line_no);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const json::exception& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

WarningSink stderr_warnings() {
  return [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
}

QuestionRecord question_from_json(const json& j, const WarningSink& warn) {
  if (!j.is_object()) throw ValidationError("expected a JSON object per line");
  warn_unknown(j, {"id", "input_tokens", "pre_score", "slm_samples", "llm"}, "question", warn);

  QuestionRecord q;
  q.id = string_field(j, "id");
  auto in_question = [&](const std::string& msg) {
    return ValidationError(msg + " (question '" + q.id + "')");
  };
  try {
    q.input_tokens = int_field(j, "input_tokens");
    if (const json* s = nullable(j, "pre_score")) q.pre_score = number(*s, "pre_score");

    const json& samples = field(j, "slm_samples");
    if (!samples.is_array()) throw ValidationError("slm_samples: expected an array");
    for (const json& sj : samples) {
      if (!sj.is_object()) throw ValidationError("slm_samples: expected objects");
      warn_unknown(sj, {"answer", "correct", "tokens", "confidence_level", "refusal"},
                   "sample of question '" + q.id + "'", warn);
      SampleRecord s;
      if (const json* a = nullable(sj, "answer")) {
        if (!a->is_string()) throw ValidationError("sample.answer: expected a string or null");
        s.answer = canonical_answer(a->get<std::string>());
      }
      s.correct = bool_field(sj, "correct");
      s.tokens = int_field(sj, "tokens");
      if (const json* c = nullable(sj, "confidence_level")) {
        s.confidence = ConfidenceLevel::from_value(number(*c, "confidence_level"));
      }
      s.refusal = bool_field(sj, "refusal");
      q.slm_samples.push_back(std::move(s));
    }

    if (const json* l = nullable(j, "llm")) {
      if (!l->is_object()) throw ValidationError("llm: expected an object or null");
      warn_unknown(*l, {"correct", "tokens"}, "llm of question '" + q.id + "'", warn);
      q.llm = LlmOutcome{bool_field(*l, "correct"), int_field(*l, "tokens")};
    }
  } catch (const ValidationError& e) {
    throw in_question(e.what());
  }
  validate(q);
  return q;
}

json to_json(const QuestionRecord& q) {
  json samples = json::array();
  for (const auto& s : q.slm_samples) {
    samples.push_back({
        {"answer", s.answer ? json(*s.answer) : json(nullptr)},
        {"correct", s.correct},
        {"tokens", s.tokens},
        {"confidence_level", s.confidence ? json(s.confidence->value()) : json(nullptr)},
        {"refusal", s.refusal},
    });
  }
  json j;
  j["id"] = q.id;
  j["input_tokens"] = q.input_tokens;
  j["pre_score"] = q.pre_score ? json(*q.pre_score) : json(nullptr);
  j["slm_samples"] = std::move(samples);
  j["llm"] = q.llm ? json{{"correct", q.llm->correct}, {"tokens", q.llm->tokens}} : json(nullptr);
  return j;
}

Dataset read_dataset(std::istream& in, const WarningSink& warn) {
  std::vector<QuestionRecord> questions;
  std::set<std::string> ids;
  for_each_jsonl(in, [&](const json& j, std::size_t) {
    QuestionRecord q = question_from_json(j, warn);
    if (!ids.insert(q.id).second) throw ValidationError("duplicate id '" + q.id + "'");
    questions.push_back(std::move(q));
  });
  return Dataset::from_questions(std::move(questions));
}

Dataset load_dataset(const std::filesystem::path& path, const WarningSink& warn) {
  auto in = open_in(path);
  return read_dataset(in, warn);
}

void write_dataset(std::ostream& out, std::span<const QuestionRecord> questions) {
  for (const auto& q : questions) out << to_json(q).dump() << '\n';
}

void write_dataset(const std::filesystem::path& path, std::span<const QuestionRecord> questions) {
  auto out = open_out(path);
  write_dataset(out, questions);
}

PricingSchedule pricing_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("pricing: expected a JSON object");
  PricingSchedule p{number(field(j, "slm_in"), "slm_in"), number(field(j, "slm_out"), "slm_out"),
                    number(field(j, "llm_in"), "llm_in"), number(field(j, "llm_out"), "llm_out")};
  p.validate();
  return p;
}

PricingSchedule load_pricing(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return pricing_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ValidationError("pricing file '" + path.string() + "': " + e.what());
  }
}

std::string format_curve(std::span<const CurvePoint> points) {
  if (points.empty()) throw Error("write_curve: no points");
  std::vector<CurvePoint> rows(points.begin(), points.end());
  auto rank = [](PointKind k) { return k == PointKind::kSlmOnly ? 0 : k == PointKind::kThreshold ? 1 : 2; };
  std::stable_sort(rows.begin(), rows.end(), [&](const CurvePoint& a, const CurvePoint& b) {
    if (rank(a.kind) != rank(b.kind)) return rank(a.kind) < rank(b.kind);
    return a.kind == PointKind::kThreshold && a.tau < b.tau;
  });

  std::string out = "tau,cost,performance,n_routed\n";
  char buf[128];
  for (const auto& p : rows) {
    if (p.kind == PointKind::kSlmOnly) {
      out += "slm_only";
    } else if (p.kind == PointKind::kLlmOnly) {
      out += "llm_only";
    } else {
      std::snprintf(buf, sizeof buf, "%.12g", p.tau);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%zu\n", p.cost, p.performance, p.n_routed);
    out += buf;
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_curve(std::span<const CurvePoint> points, const std::filesystem::path& path) {
  write_text(path, format_curve(points));
}

std::vector<CurvePoint> parse_curve(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "tau,cost,performance,n_routed") {
    throw ValidationError("line 1: expected header tau,cost,performance,n_routed");
  }
  std::vector<CurvePoint> points;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string tau, cost, perf, routed;
    if (!std::getline(row, tau, ',') || !std::getline(row, cost, ',') ||
        !std::getline(row, perf, ',') || !std::getline(row, routed)) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 4 columns");
    }
    CurvePoint p;
    try {
      if (tau == "slm_only") {
        p.kind = PointKind::kSlmOnly;
      } else if (tau == "llm_only") {
        p.kind = PointKind::kLlmOnly;
      } else {
        p.tau = std::stod(tau);
      }
      p.cost = std::stod(cost);
      p.performance = std::stod(perf);
      p.n_routed = std::stoul(routed);
    } catch (const std::exception&) {
      throw ValidationError("line " + std::to_string(line_no) + ": unparsable number");
    }
    points.push_back(p);
  }
  return points;
}

Curve load_curve(const std::filesystem::path& path) {
  auto in = open_in(path);
  Curve curve;
  bool have_slm = false, have_llm = false;
  for (const auto& p : parse_curve(in)) {
    if (p.kind == PointKind::kSlmOnly) {
      curve.slm_only = p;
      have_slm = true;
    } else if (p.kind == PointKind::kLlmOnly) {
      curve.llm_only = p;
      have_llm = true;
    } else {
      curve.points.push_back(p);
    }
  }
  if (!have_slm || !have_llm) {
    throw ValidationError("curve '" + path.string() + "' lacks the slm_only/llm_only rows");
  }
  return curve;
}

json metrics_to_json(const MetricsReport& r, MetricsMode mode) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j;
  j["toa"] = opt(r.toa);
  j["toga"] = opt(r.toga);
  j["toa100"] = opt(r.toa100);
  j["toga100"] = opt(r.toga100);
  j["togr"] = opt(r.togr);
  j["agl"] = opt(r.agl);
  j["arol"] = opt(r.arol);
  j["mode"] = mode == MetricsMode::kPerfect ? "perfect" : "actual";
  return j;
}

TrainQuestion train_question_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("expected a JSON object per line");
  TrainQuestion q;
  q.id = string_field(j, "id");
  q.question = string_field(j, "question");
  const json& samples = field(j, "samples");
  if (!samples.is_array()) throw ValidationError("samples: expected an array");
  for (const json& sj : samples) {
    TrainSample s{string_field(sj, "text"), bool_field(sj, "correct"), int_field(sj, "tokens")};
    if (s.tokens < 1) throw ValidationError("samples.tokens: must be >= 1 (question '" + q.id + "')");
    q.samples.push_back(std::move(s));
  }
  return q;
}

json to_json(const TrainQuestion& q) {
  json samples = json::array();
  for (const auto& s : q.samples) {
    samples.push_back({{"text", s.text}, {"correct", s.correct}, {"tokens", s.tokens}});
  }
  return {{"id", q.id}, {"question", q.question}, {"samples", std::move(samples)}};
}

std::vector<TrainQuestion> read_train_corpus(std::istream& in) {
  std::vector<TrainQuestion> out;
  std::set<std::string> ids;
  for_each_jsonl(in, [&](const json& j, std::size_t) {
    TrainQuestion q = train_question_from_json(j);
    if (!ids.insert(q.id).second) throw ValidationError("duplicate id '" + q.id + "'");
    out.push_back(std::move(q));
  });
  return out;
}

std::vector<TrainQuestion> load_train_corpus(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_train_corpus(in);
}

json to_json(const PreferencePair& p) {
  return {{"id", p.question_id},
          {"chosen", p.chosen},
          {"rejected", p.rejected},
          {"chosen_tokens", p.chosen_tokens},
          {"rejected_tokens", p.rejected_tokens}};
}

json to_json(const RefusalExample& e) {
  return {{"id", e.question_id},
          {"threshold", e.threshold.value()},
          {"prompt", e.prompt},
          {"target", e.target}};
}

json training_config() {
  const json lora = {{"rank", 8}, {"alpha", 16}, {"dropout", 0.1}};
  const json optim = {{"optimizer", "adamw"},
                      {"learning_rate", 1e-4},
                      {"lr_scheduler", "cosine"},
                      {"warmup_ratio", 0.1},
                      {"epochs", 1},
                      {"per_device_batch_size", 1},
                      {"gradient_accumulation_steps", 4},
                      {"max_length", 1024}};
  json stage1 = {{"task", "dpo"}, {"lora", lora}, {"pref_loss", "sigmoid"},
                 {"pref_beta", kDefaultDpoBeta}, {"sft_coefficient", kDefaultSftLambda}};
  stage1.update(optim);
  json stage2 = {{"task", "sft"}, {"lora", lora}};
  stage2.update(optim);
  return {{"length_preference", stage1}, {"refusal", stage2}};
}

}  // namespace routerlab
