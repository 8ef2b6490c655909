#pragma once

#include "ampo/gateway.hpp"
#include "ampo/templates.hpp"
#include "ampo/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ampo {

// One root cause produced by the analyzer.
struct Reason {
    std::string id;
    std::string text;
    std::vector<std::string> failure_ids;  // example ids of the analyzed batch
};

// Everything the agent calls need from the run.
struct AgentContext {
    Gateway* gateway = nullptr;
    const TemplateSet* templates = nullptr;
    std::string optimizer_model;
    double analyzer_temperature = 1.0;
    double summarizer_temperature = 0.0;
    double revisor_temperature = 0.0;
    std::optional<int> max_tokens;
};

// --- output parsing (pure) ---

// All <START>...<END> spans, in order. Text outside spans is ignored;
// whitespace-only spans are dropped.
std::vector<std::string> parse_tagged_spans(const std::string& completion);

// First number following the token "importance" (case-insensitive, separated
// by ':' or '='). nullopt when the span carries no parseable score.
std::optional<double> parse_importance(const std::string& span);

// Serialization used for {{bad_examples}}: one block per failure,
// "Input: ...\nModel answer: ...\nCorrect answer: ...", blank-line separated.
std::string format_bad_examples(const std::vector<FailureCase>& failures);

// --- agent calls ---

// Error analysis over a batch of failures. One Reason per tagged span.
// Throws NoReasonsParsed (carrying the raw completion) when no span parses.
std::vector<Reason> analyze(const AgentContext& ctx, const PromptCandidate& prompt,
                            const std::vector<FailureCase>& failures);

// Condenses reasons into scored patterns. The pattern count is whatever the
// model returns. Spans without a parseable score get importance 0 and a
// warning on stderr.
std::vector<Pattern> summarize(const AgentContext& ctx, const PromptCandidate& prompt,
                               const std::vector<Reason>& reasons);

// top_score: stable sort by importance descending, first min(n, M).
// random: uniform sample of min(n, M) without replacement, seeded.
std::vector<Pattern> select_patterns(const std::vector<Pattern>& patterns, int n,
                                     PatternStrategy strategy, std::uint64_t seed);

// One revision pass: the full completion (whitespace-trimmed, code fence
// stripped when the whole output is fenced) becomes the new candidate text.
// Throws EmptyRevision on a blank completion. Never mutates `prompt`.
PromptCandidate revise(const AgentContext& ctx, const PromptCandidate& prompt,
                       const std::vector<Pattern>& patterns, std::string new_id,
                       int iteration);

// Writes the initial prompt from seeded few-shot examples.
PromptCandidate initialize_prompt(const AgentContext& ctx, const TaskSpec& task,
                                  int n_examples, std::uint64_t seed,
                                  std::string id = "p0");

// Strips a surrounding ``` fence when the entire output is fenced.
std::string strip_code_fence(const std::string& text);

}  // namespace ampo
