#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ampo {

// One labelled input/output pair.
struct Example {
    std::string id;     // unique within its split
    std::string input;
    std::string gold;   // canonical label text, non-empty after normalization
};

enum class Split { train, validation, test };

const char* to_string(Split split);
Split split_from_string(const std::string& name);

struct DatasetSplits {
    std::vector<Example> train;
    std::vector<Example> validation;
    std::vector<Example> test;

    const std::vector<Example>& get(Split split) const;
};

// How an answer is read out of a raw completion.
struct AnswerExtraction {
    enum class Fallback { last_label_mention, whole_output };

    std::string pattern;  // regex with exactly one capture group
    Fallback fallback = Fallback::last_label_mention;
};

// A task: dataset splits, labels, extraction rule, and the (exact-match)
// measure.
struct TaskSpec {
    enum class Measure { exact_match };

    std::string name;
    std::string description;
    DatasetSplits splits;
    std::optional<std::vector<std::string>> label_set;
    AnswerExtraction extraction;
    Measure measure = Measure::exact_match;
};

enum class CandidateSource { initial, revised, pruned };

const char* to_string(CandidateSource source);
CandidateSource candidate_source_from_string(const std::string& name);

// A prompt text with lineage, structure metrics, and scores.
struct PromptCandidate {
    std::string id;
    std::string text;
    std::optional<std::string> parent_id;
    int iteration_created = 0;
    CandidateSource source = CandidateSource::initial;
    std::vector<std::string> applied_patterns;  // pattern ids used to produce it
    int branch_count = 0;
    std::optional<double> val_score;
    std::optional<double> train_score;
};

// Builds an initial (root) candidate; computes the structure metric.
PromptCandidate make_initial_candidate(std::string id, std::string text);

// Builds a revised candidate linked to its parent.
PromptCandidate make_revised_candidate(std::string id, std::string text,
                                       const PromptCandidate& parent, int iteration,
                                       std::vector<std::string> applied_patterns);

// Throws ConfigError when lineage or score invariants are broken
// (empty text, initial/parent mismatch, scores outside [0,1]).
void validate_candidate(const PromptCandidate& candidate);

// An example the prompt got wrong.
struct FailureCase {
    Example example;
    std::string model_output;      // raw completion
    std::string extracted_answer;  // normalized; never equals the normalized gold
};

// A summarized category of error causes.
struct Pattern {
    std::string id;
    std::string description;
    double importance = 0.0;  // arbitrary finite scale; only the ordering matters
    std::vector<std::string> source_reason_ids;
};

enum class PatternStrategy { top_score, random };

const char* to_string(PatternStrategy strategy);
PatternStrategy pattern_strategy_from_string(const std::string& name);

struct PrePruneRule {
    double min_delta = 0.01;
    int patience = 1;
};

struct RunConfig {
    int iterations = 1;                 // T
    int failures_per_iter = 5;          // K
    int top_patterns = 1;               // N
    PatternStrategy pattern_strategy = PatternStrategy::top_score;
    std::uint64_t seed = 0;
    PrePruneRule pre_prune;
    double analyzer_temperature = 1.0;
    double summarizer_temperature = 0.0;
    double revisor_temperature = 0.0;
    double target_temperature = 0.0;
    double val_fraction = 0.10;
};

// Throws ConfigError on out-of-range fields.
void validate_config(const RunConfig& config);

}  // namespace ampo
