#pragma once

#include "ampo/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ampo {

enum class Strategy { ampo, apo_beam, mcts_lite };

const char* to_string(Strategy strategy);
Strategy strategy_from_string(const std::string& name);

enum class StopReason { iterations_exhausted, pre_pruned, no_failures, error };

const char* to_string(StopReason reason);

enum class EventKind {
    run_start,
    evaluation,
    failure_sample,
    analysis,
    patterns,
    candidate,
    selection,
    run_end,
};

const char* to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& name);

// One line of events.log. The line grammar is normative: replay rebuilds the
// whole run from these lines alone.
struct Event {
    EventKind kind = EventKind::run_start;
    int iteration = 0;  // 0 for run_start; iterations are 1-based
    nlohmann::json payload;
    std::int64_t timestamp_ms = 0;

    std::string to_line() const;
    static Event from_line(const std::string& line);

    // Same line with the timestamp dropped; what determinism checks compare.
    std::string replay_line() const;
};

struct IterationBudget {
    int iteration = 0;
    int candidates = 0;
    int val_evals = 0;
};

// Exploration-budget accounting: candidates_generated is the efficiency
// metric runs are compared on.
struct BudgetLedger {
    std::int64_t candidates_generated = 0;  // always the sum over per_iteration
    std::int64_t target_calls = 0;
    std::int64_t optimizer_calls = 0;
    std::vector<IterationBudget> per_iteration;

    void add_iteration(int iteration, int candidates, int val_evals);

    nlohmann::json to_json() const;
    static BudgetLedger from_json(const nlohmann::json& j);
};

// Append-only record of one optimization run.
struct RunRecord {
    std::string run_id;
    RunConfig config;
    Strategy strategy = Strategy::ampo;
    std::vector<Event> events;
    std::string incumbent_id;
    std::string global_best_id;
    BudgetLedger ledger;
    StopReason stop_reason = StopReason::iterations_exhausted;
    std::string error_message;  // set when stop_reason == error
};

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

// Checks the per-iteration event grammar:
//   evaluation -> failure_sample -> analysis -> patterns -> candidate+ -> selection
// For ampo runs every iteration except possibly the last must be complete;
// the last may stop at any prefix boundary. Baseline strategies are held to
// a relaxed version (candidates precede the closing selection).
// Throws ReplayMismatch naming the first offending event index.
void validate_event_grammar(Strategy strategy, const std::vector<Event>& events);

struct ReplaySummary {
    std::vector<std::string> incumbent_sequence;
    std::string global_best_id;
    double global_best_val = 0.0;
    std::vector<double> trajectory;  // incumbent val score per iteration
    std::int64_t candidates_generated = 0;
    std::string strategy;
    std::string stop_reason;
};

// Recomputes the incumbent sequence and global best from events alone and
// asserts they match the recorded ids. Throws ReplayMismatch at the first
// divergent event index.
ReplaySummary replay_events(const std::vector<Event>& events);

}  // namespace ampo
