#pragma once

#include "ampo/gateway.hpp"
#include "ampo/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ampo {

struct PerExampleResult {
    std::string id;
    std::string extracted;  // normalized answer
    std::string gold;       // normalized gold
    bool correct = false;
};

struct EvalReport {
    std::string prompt_id;
    Split split = Split::train;
    int n = 0;
    int correct = 0;
    double accuracy = 0.0;  // correct / n
    std::vector<FailureCase> failures;          // one per incorrect example, in example order
    std::vector<PerExampleResult> per_example;  // ordered by example index
};

struct EvalOptions {
    std::string target_model;
    double target_temperature = 0.0;
    std::optional<int> max_tokens;
    int parallelism = 1;
};

// Applies the extraction rule to a raw completion and returns the
// normalized answer.
std::string extract_answer(const std::string& completion, const AnswerExtraction& extraction,
                           const std::optional<std::vector<std::string>>& label_set);

// Scores the prompt over one split: one target-tagged completion per example,
// wire message "{prompt text}\n\n{example input}". Fans out up to
// options.parallelism workers; the report is ordered by example index
// regardless of completion order. Transient backend errors are retried once
// at the report level, then the error propagates (no partial report).
EvalReport evaluate(const PromptCandidate& prompt, const TaskSpec& task, Split split,
                    const EvalOptions& options, Gateway& gateway);

// min(k, failures) cases drawn uniformly without replacement; deterministic
// per (report, k, seed). Throws NoFailures when the report has none.
std::vector<FailureCase> sample_failures(const EvalReport& report, int k, std::uint64_t seed);

// Writes per-example rows plus a summary record, one JSON record per line.
void write_report(const EvalReport& report, const std::string& path);

}  // namespace ampo
