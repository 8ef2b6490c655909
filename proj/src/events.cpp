#include "ampo/events.hpp"

#include "ampo/errors.hpp"

#include <algorithm>

namespace ampo {

using nlohmann::json;

const char* to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::ampo: return "ampo";
        case Strategy::apo_beam: return "apo_beam";
        case Strategy::mcts_lite: return "mcts_lite";
    }
    return "ampo";
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "ampo") return Strategy::ampo;
    if (name == "apo_beam") return Strategy::apo_beam;
    if (name == "mcts_lite") return Strategy::mcts_lite;
    throw ConfigError("unknown strategy: " + name);
}

const char* to_string(StopReason reason) {
    switch (reason) {
        case StopReason::iterations_exhausted: return "iterations_exhausted";
        case StopReason::pre_pruned: return "pre_pruned";
        case StopReason::no_failures: return "no_failures";
        case StopReason::error: return "error";
    }
    return "error";
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::run_start: return "run_start";
        case EventKind::evaluation: return "evaluation";
        case EventKind::failure_sample: return "failure_sample";
        case EventKind::analysis: return "analysis";
        case EventKind::patterns: return "patterns";
        case EventKind::candidate: return "candidate";
        case EventKind::selection: return "selection";
        case EventKind::run_end: return "run_end";
    }
    return "run_start";
}

EventKind event_kind_from_string(const std::string& name) {
    static const std::pair<const char*, EventKind> table[] = {
        {"run_start", EventKind::run_start},   {"evaluation", EventKind::evaluation},
        {"failure_sample", EventKind::failure_sample}, {"analysis", EventKind::analysis},
        {"patterns", EventKind::patterns},     {"candidate", EventKind::candidate},
        {"selection", EventKind::selection},   {"run_end", EventKind::run_end},
    };
    for (const auto& [text, kind] : table) {
        if (name == text) return kind;
    }
    throw ConfigError("unknown event kind: " + name);
}

std::string Event::to_line() const {
    json line{{"iter", iteration}, {"kind", to_string(kind)}, {"payload", payload}, {"ts", timestamp_ms}};
    return line.dump();
}

std::string Event::replay_line() const {
    json line{{"iter", iteration}, {"kind", to_string(kind)}, {"payload", payload}};
    return line.dump();
}

Event Event::from_line(const std::string& line) {
    json parsed;
    try {
        parsed = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("corrupt event line: ") + e.what());
    }
    Event event;
    if (!parsed.contains("kind") || !parsed.contains("iter")) {
        throw ConfigError("corrupt event line: missing kind/iter");
    }
    event.kind = event_kind_from_string(parsed["kind"].get<std::string>());
    event.iteration = parsed["iter"].get<int>();
    event.payload = parsed.value("payload", json::object());
    event.timestamp_ms = parsed.value("ts", std::int64_t{0});
    return event;
}

void BudgetLedger::add_iteration(int iteration, int candidates, int val_evals) {
    per_iteration.push_back({iteration, candidates, val_evals});
    candidates_generated += candidates;
}

json BudgetLedger::to_json() const {
    json iterations = json::array();
    for (const auto& entry : per_iteration) {
        iterations.push_back({{"iteration", entry.iteration},
                              {"candidates", entry.candidates},
                              {"val_evals", entry.val_evals}});
    }
    return json{{"candidates_generated", candidates_generated},
                {"target_calls", target_calls},
                {"optimizer_calls", optimizer_calls},
                {"per_iteration", iterations}};
}

BudgetLedger BudgetLedger::from_json(const json& j) {
    BudgetLedger ledger;
    ledger.candidates_generated = j.value("candidates_generated", std::int64_t{0});
    ledger.target_calls = j.value("target_calls", std::int64_t{0});
    ledger.optimizer_calls = j.value("optimizer_calls", std::int64_t{0});
    for (const auto& entry : j.value("per_iteration", json::array())) {
        ledger.per_iteration.push_back({entry.value("iteration", 0), entry.value("candidates", 0),
                                        entry.value("val_evals", 0)});
    }
    return ledger;
}

json config_to_json(const RunConfig& config) {
    return json{{"iterations", config.iterations},
                {"k", config.failures_per_iter},
                {"top_n", config.top_patterns},
                {"pattern_strategy", to_string(config.pattern_strategy)},
                {"seed", config.seed},
                {"min_delta", config.pre_prune.min_delta},
                {"patience", config.pre_prune.patience},
                {"analyzer_temperature", config.analyzer_temperature},
                {"summarizer_temperature", config.summarizer_temperature},
                {"revisor_temperature", config.revisor_temperature},
                {"target_temperature", config.target_temperature},
                {"val_fraction", config.val_fraction}};
}

RunConfig config_from_json(const json& j) {
    RunConfig config;
    config.iterations = j.value("iterations", 1);
    config.failures_per_iter = j.value("k", 5);
    config.top_patterns = j.value("top_n", 1);
    config.pattern_strategy = pattern_strategy_from_string(j.value("pattern_strategy", "top_score"));
    config.seed = j.value("seed", std::uint64_t{0});
    config.pre_prune.min_delta = j.value("min_delta", 0.01);
    config.pre_prune.patience = j.value("patience", 1);
    config.analyzer_temperature = j.value("analyzer_temperature", 1.0);
    config.summarizer_temperature = j.value("summarizer_temperature", 0.0);
    config.revisor_temperature = j.value("revisor_temperature", 0.0);
    config.target_temperature = j.value("target_temperature", 0.0);
    config.val_fraction = j.value("val_fraction", 0.10);
    return config;
}

namespace {

// per-iteration kind sequence for the strict (ampo) grammar
const std::vector<EventKind> kAmpoOrder = {EventKind::evaluation, EventKind::failure_sample,
                                           EventKind::analysis, EventKind::patterns,
                                           EventKind::candidate, EventKind::selection};

struct IterationSlice {
    int iteration = 0;
    std::size_t first_index = 0;
    std::vector<EventKind> kinds;
};

std::vector<IterationSlice> slice_iterations(const std::vector<Event>& events) {
    std::vector<IterationSlice> slices;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& event = events[i];
        if (event.kind == EventKind::run_start || event.kind == EventKind::run_end) continue;
        if (slices.empty() || slices.back().iteration != event.iteration) {
            if (!slices.empty() && event.iteration < slices.back().iteration) {
                throw ReplayMismatch("iteration numbers go backwards at event " +
                                         std::to_string(i),
                                     i);
            }
            slices.push_back({event.iteration, i, {}});
        }
        slices.back().kinds.push_back(event.kind);
    }
    return slices;
}

// complete: evaluation failure_sample analysis patterns candidate+ selection
// prefix:   any truncation of the above at a kind boundary
void check_ampo_iteration(const IterationSlice& slice, bool must_be_complete) {
    std::size_t stage = 0;  // index into kAmpoOrder
    std::size_t candidates = 0;
    bool closed = false;
    for (std::size_t i = 0; i < slice.kinds.size(); ++i) {
        const EventKind kind = slice.kinds[i];
        const std::size_t index = slice.first_index + i;
        if (closed) {
            throw ReplayMismatch("event after selection in iteration " +
                                     std::to_string(slice.iteration),
                                 index);
        }
        if (kind == EventKind::candidate) {
            if (stage < 4) {
                throw ReplayMismatch("candidate before patterns in iteration " +
                                         std::to_string(slice.iteration),
                                     index);
            }
            stage = 4;
            ++candidates;
            continue;
        }
        if (kind == EventKind::selection) {
            if (candidates == 0) {
                throw ReplayMismatch("selection without candidates in iteration " +
                                         std::to_string(slice.iteration),
                                     index);
            }
            closed = true;
            continue;
        }
        if (stage >= 4 || kind != kAmpoOrder[stage]) {
            throw ReplayMismatch("unexpected " + std::string(to_string(kind)) + " in iteration " +
                                     std::to_string(slice.iteration),
                                 index);
        }
        ++stage;
    }
    if (must_be_complete && !closed) {
        throw ReplayMismatch("iteration " + std::to_string(slice.iteration) +
                                 " is incomplete before the final iteration",
                             slice.first_index);
    }
}

// baselines: no patterns events; selection, when present, closes the iteration
void check_relaxed_iteration(const IterationSlice& slice) {
    bool closed = false;
    for (std::size_t i = 0; i < slice.kinds.size(); ++i) {
        const EventKind kind = slice.kinds[i];
        const std::size_t index = slice.first_index + i;
        if (closed) {
            throw ReplayMismatch("event after selection in iteration " +
                                     std::to_string(slice.iteration),
                                 index);
        }
        if (kind == EventKind::patterns) {
            throw ReplayMismatch("patterns event in a baseline run (iteration " +
                                     std::to_string(slice.iteration) + ")",
                                 index);
        }
        if (kind == EventKind::selection) closed = true;
    }
}

}  // namespace

void validate_event_grammar(Strategy strategy, const std::vector<Event>& events) {
    if (events.empty()) throw ConfigError("no events");
    if (events.front().kind != EventKind::run_start) {
        throw ReplayMismatch("first event is not run_start", 0);
    }
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (events[i].kind == EventKind::run_start) {
            throw ReplayMismatch("duplicate run_start", i);
        }
        if (events[i].kind == EventKind::run_end && i + 1 != events.size()) {
            throw ReplayMismatch("events after run_end", i + 1);
        }
    }
    const auto slices = slice_iterations(events);
    for (std::size_t s = 0; s < slices.size(); ++s) {
        if (strategy == Strategy::ampo) {
            check_ampo_iteration(slices[s], s + 1 != slices.size());
        } else {
            check_relaxed_iteration(slices[s]);
        }
    }
}

ReplaySummary replay_events(const std::vector<Event>& events) {
    if (events.empty()) throw ConfigError("no events");
    if (events.front().kind != EventKind::run_start) {
        throw ReplayMismatch("first event is not run_start", 0);
    }
    const json& start = events.front().payload;
    const Strategy strategy = strategy_from_string(start.value("strategy", "ampo"));
    validate_event_grammar(strategy, events);

    ReplaySummary summary;
    summary.strategy = to_string(strategy);

    std::string best_id;
    double best_val = -1.0;
    if (start.contains("p0")) {
        best_id = start["p0"].value("id", "");
        if (start["p0"].contains("val_score") && !start["p0"]["val_score"].is_null()) {
            best_val = start["p0"]["val_score"].get<double>();
        }
    }

    std::vector<std::pair<std::string, double>> iteration_candidates;
    for (std::size_t i = 1; i < events.size(); ++i) {
        const Event& event = events[i];
        switch (event.kind) {
            case EventKind::candidate: {
                const std::string id = event.payload.value("id", "");
                const double val = event.payload.value("val_score", 0.0);
                iteration_candidates.emplace_back(id, val);
                if (val > best_val) {
                    best_val = val;
                    best_id = id;
                }
                break;
            }
            case EventKind::selection: {
                std::string expected_id;
                double expected_val = 0.0;
                if (strategy == Strategy::mcts_lite) {
                    expected_id = best_id;
                    expected_val = best_val;
                } else {
                    if (iteration_candidates.empty()) {
                        throw ReplayMismatch("selection without candidates", i);
                    }
                    std::size_t best_index = 0;
                    for (std::size_t c = 1; c < iteration_candidates.size(); ++c) {
                        if (iteration_candidates[c].second >
                            iteration_candidates[best_index].second) {
                            best_index = c;
                        }
                    }
                    expected_id = iteration_candidates[best_index].first;
                    expected_val = iteration_candidates[best_index].second;
                }
                if (event.payload.value("incumbent_id", "") != expected_id) {
                    throw ReplayMismatch("incumbent mismatch at event " + std::to_string(i) +
                                             ": recorded '" +
                                             event.payload.value("incumbent_id", "") +
                                             "', replay computed '" + expected_id + "'",
                                         i);
                }
                if (event.payload.value("global_best_id", "") != best_id) {
                    throw ReplayMismatch("global best mismatch at event " + std::to_string(i) +
                                             ": recorded '" +
                                             event.payload.value("global_best_id", "") +
                                             "', replay computed '" + best_id + "'",
                                         i);
                }
                summary.incumbent_sequence.push_back(expected_id);
                summary.trajectory.push_back(expected_val);
                iteration_candidates.clear();
                break;
            }
            case EventKind::run_end: {
                if (event.payload.value("global_best_id", "") != best_id) {
                    throw ReplayMismatch("global best mismatch at run_end: recorded '" +
                                             event.payload.value("global_best_id", "") +
                                             "', replay computed '" + best_id + "'",
                                         i);
                }
                summary.stop_reason = event.payload.value("stop_reason", "");
                if (event.payload.contains("ledger")) {
                    summary.candidates_generated =
                        event.payload["ledger"].value("candidates_generated", std::int64_t{0});
                }
                break;
            }
            default:
                break;
        }
    }
    summary.global_best_id = best_id;
    summary.global_best_val = best_val;
    return summary;
}

}  // namespace ampo
