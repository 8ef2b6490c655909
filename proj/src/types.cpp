#include "ampo/types.hpp"

#include "ampo/errors.hpp"
#include "ampo/text.hpp"

namespace ampo {

const char* to_string(Split split) {
    switch (split) {
        case Split::train: return "train";
        case Split::validation: return "validation";
        case Split::test: return "test";
    }
    return "train";
}

Split split_from_string(const std::string& name) {
    if (name == "train") return Split::train;
    if (name == "validation") return Split::validation;
    if (name == "test") return Split::test;
    throw ConfigError("unknown split: " + name);
}

const std::vector<Example>& DatasetSplits::get(Split split) const {
    switch (split) {
        case Split::train: return train;
        case Split::validation: return validation;
        case Split::test: return test;
    }
    return train;
}

const char* to_string(CandidateSource source) {
    switch (source) {
        case CandidateSource::initial: return "initial";
        case CandidateSource::revised: return "revised";
        case CandidateSource::pruned: return "pruned";
    }
    return "initial";
}

CandidateSource candidate_source_from_string(const std::string& name) {
    if (name == "initial") return CandidateSource::initial;
    if (name == "revised") return CandidateSource::revised;
    if (name == "pruned") return CandidateSource::pruned;
    throw ConfigError("unknown candidate source: " + name);
}

PromptCandidate make_initial_candidate(std::string id, std::string text) {
    PromptCandidate candidate;
    candidate.id = std::move(id);
    candidate.text = std::move(text);
    candidate.iteration_created = 0;
    candidate.source = CandidateSource::initial;
    candidate.branch_count = branch_count(candidate.text);
    validate_candidate(candidate);
    return candidate;
}

PromptCandidate make_revised_candidate(std::string id, std::string text,
                                       const PromptCandidate& parent, int iteration,
                                       std::vector<std::string> applied_patterns) {
    PromptCandidate candidate;
    candidate.id = std::move(id);
    candidate.text = std::move(text);
    candidate.parent_id = parent.id;
    candidate.iteration_created = iteration;
    candidate.source = CandidateSource::revised;
    candidate.applied_patterns = std::move(applied_patterns);
    candidate.branch_count = branch_count(candidate.text);
    validate_candidate(candidate);
    return candidate;
}

void validate_candidate(const PromptCandidate& candidate) {
    if (candidate.text.empty()) throw ConfigError("candidate " + candidate.id + ": empty text");
    const bool is_initial = candidate.source == CandidateSource::initial;
    if (is_initial != !candidate.parent_id.has_value() ||
        is_initial != (candidate.iteration_created == 0)) {
        throw ConfigError("candidate " + candidate.id +
                          ": initial <=> no parent <=> iteration 0 violated");
    }
    for (const auto& score : {candidate.val_score, candidate.train_score}) {
        if (score && (*score < 0.0 || *score > 1.0)) {
            throw ConfigError("candidate " + candidate.id + ": score outside [0,1]");
        }
    }
}

const char* to_string(PatternStrategy strategy) {
    switch (strategy) {
        case PatternStrategy::top_score: return "top_score";
        case PatternStrategy::random: return "random";
    }
    return "top_score";
}

PatternStrategy pattern_strategy_from_string(const std::string& name) {
    if (name == "top_score") return PatternStrategy::top_score;
    if (name == "random") return PatternStrategy::random;
    throw ConfigError("unknown pattern strategy: " + name);
}

void validate_config(const RunConfig& config) {
    if (config.iterations < 1) throw ConfigError("iterations must be >= 1");
    if (config.failures_per_iter < 1) throw ConfigError("k (failures per iteration) must be >= 1");
    if (config.top_patterns < 1) throw ConfigError("top-n must be >= 1");
    if (config.pre_prune.min_delta < 0.0) throw ConfigError("min-delta must be >= 0");
    if (config.pre_prune.patience < 0) throw ConfigError("patience must be >= 0");
    if (config.val_fraction <= 0.0 || config.val_fraction >= 1.0) {
        throw ConfigError("val-fraction must lie in (0, 1)");
    }
    for (double t : {config.analyzer_temperature, config.summarizer_temperature,
                     config.revisor_temperature, config.target_temperature}) {
        if (t < 0.0 || t > 2.0) throw ConfigError("temperature must lie in [0, 2]");
    }
}

}  // namespace ampo
