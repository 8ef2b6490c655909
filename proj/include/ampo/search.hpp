#pragma once

#include "ampo/agents.hpp"
#include "ampo/evaluator.hpp"
#include "ampo/events.hpp"
#include "ampo/run_store.hpp"
#include "ampo/types.hpp"

#include <string>
#include <vector>

namespace ampo {

// Wiring shared by every strategy. `store` may be null for in-memory runs.
struct SearchEnv {
    Gateway* gateway = nullptr;
    const TaskSpec* task = nullptr;
    const TemplateSet* templates = nullptr;
    std::string target_model;
    std::string optimizer_model;
    int parallelism = 1;
    RunStore* store = nullptr;
    std::string run_id;
};

// stop = true iff the best value seen has gone `patience` or more
// consecutive entries without improving by at least min_delta. The first
// entry establishes the baseline; patience 0 stops at the first check.
bool pre_prune_check(const std::vector<double>& val_history, const PrePruneRule& rule);

// Greedy loop: evaluate the incumbent on train, sample K failures, analyze,
// summarize, pick top-N patterns (or random), revise once per pattern,
// validation-score the N candidates, carry the best one forward. The
// returned record's global best — the highest validation score anywhere in
// the run, p0 included — is the answer.
RunRecord run_ampo(SearchEnv& env, const PromptCandidate& p0, const RunConfig& config);

struct ApoBeamOptions {
    int beam_width = 4;
    int expansions_per_prompt = 3;
    // Extra per-member expansion factor so published exploration counts can
    // be reproduced; candidates per iteration = beam * expansions * multiplier.
    int expansion_multiplier = 1;
};

// Classic beam baseline without a summarizer or branching edit prompt: each
// beam member is expanded via one revision per sampled reason; the top
// beam_width candidates by validation score survive.
RunRecord run_apo_beam(SearchEnv& env, const PromptCandidate& p0, const RunConfig& config,
                       const ApoBeamOptions& options);

struct MctsOptions {
    int depth = 3;
    int breadth = 3;
    int total_budget = 52;
    double exploration_bonus = 0.25;
};

// Budget-equivalent tree baseline: nodes are picked by validation reward
// plus an exploration bonus and expanded via reason-conditioned revision
// until total_budget candidates exist or the tree saturates.
RunRecord run_mcts_lite(SearchEnv& env, const PromptCandidate& p0, const RunConfig& config,
                        const MctsOptions& options);

// Index of the best score; ties go to the lowest index. Scale-invariant
// under any positive scaling of the scores.
std::size_t argmax_tie_first(const std::vector<double>& scores);

}  // namespace ampo
