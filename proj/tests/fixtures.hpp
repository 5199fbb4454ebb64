#pragma once

#include <optional>
#include <string>
#include <vector>

#include "routerlab/types.hpp"

namespace routerlab::testing {

inline ConfidenceLevel level(int tenths) { return ConfidenceLevel::from_tenths(tenths); }

inline SampleRecord ans(const std::string& a, bool correct, std::int64_t tokens,
                        std::optional<ConfidenceLevel> c = std::nullopt) {
  return SampleRecord::answered(a, correct, tokens, c);
}

inline SampleRecord refusal(std::int64_t tokens, std::optional<ConfidenceLevel> c = std::nullopt) {
  return SampleRecord::refused(tokens, c);
}

/// Question with `n_plain` untagged samples of which the first `n_correct`
/// are correct, all of length `out_tokens`.
inline QuestionRecord plain_question(const std::string& id, std::int64_t in_tokens,
                                     std::int64_t out_tokens, int n_plain, int n_correct,
                                     bool llm_correct = true, std::int64_t llm_tokens = 200,
                                     std::optional<double> pre_score = std::nullopt) {
  QuestionRecord q;
  q.id = id;
  q.input_tokens = in_tokens;
  q.pre_score = pre_score;
  for (int k = 0; k < n_plain; ++k) {
    const bool ok = k < n_correct;
    q.slm_samples.push_back(ans(ok ? "a" : "b", ok, out_tokens));
  }
  q.llm = LlmOutcome{llm_correct, llm_tokens};
  return q;
}

/// One sample at each level 1..10; levels above `max_answer_tenths` refuse.
inline std::vector<SampleRecord> ranged_samples(int max_answer_tenths, std::int64_t tokens = 50,
                                                std::int64_t refusal_tokens = 8) {
  std::vector<SampleRecord> out;
  for (int t = 1; t <= 10; ++t) {
    if (t <= max_answer_tenths) {
      out.push_back(ans("a", true, tokens, level(t)));
    } else {
      out.push_back(refusal(refusal_tokens, level(t)));
    }
  }
  return out;
}

}  // namespace routerlab::testing
