#include "ampo/agents.hpp"

#include "ampo/errors.hpp"
#include "ampo/rng.hpp"
#include "ampo/text.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <regex>
#include <sstream>

namespace ampo {

namespace {

constexpr const char* kSpanStart = "<START>";
constexpr const char* kSpanEnd = "<END>";

ChatRequest make_request(const AgentContext& ctx, RequestTag tag, double temperature,
                         std::string content) {
    ChatRequest request;
    request.model = ctx.optimizer_model;
    request.temperature = temperature;
    request.max_tokens = ctx.max_tokens;
    request.tag = tag;
    request.messages = {{MessageRole::user, std::move(content)}};
    return request;
}

std::string join_bulleted(const std::vector<std::string>& lines) {
    std::string out;
    for (const auto& line : lines) {
        if (!out.empty()) out += '\n';
        out += "- " + line;
    }
    return out;
}

}  // namespace

std::vector<std::string> parse_tagged_spans(const std::string& completion) {
    std::vector<std::string> spans;
    std::size_t pos = 0;
    const std::size_t start_len = std::string_view(kSpanStart).size();
    while (true) {
        const std::size_t open = completion.find(kSpanStart, pos);
        if (open == std::string::npos) break;
        const std::size_t close = completion.find(kSpanEnd, open + start_len);
        if (close == std::string::npos) break;
        std::string span = completion.substr(open + start_len, close - open - start_len);
        if (!trim(span).empty()) spans.push_back(std::move(span));
        pos = close + std::string_view(kSpanEnd).size();
    }
    return spans;
}

std::optional<double> parse_importance(const std::string& span) {
    static const std::regex grammar(
        R"(importance\s*[:=]\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))",
        std::regex::icase);
    std::smatch match;
    if (!std::regex_search(span, match, grammar)) return std::nullopt;
    try {
        return std::stod(match[1].str());
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string format_bad_examples(const std::vector<FailureCase>& failures) {
    std::string out;
    for (const auto& failure : failures) {
        if (!out.empty()) out += "\n\n";
        out += "Input: " + failure.example.input + "\nModel answer: " + failure.model_output +
               "\nCorrect answer: " + failure.example.gold;
    }
    return out;
}

std::vector<Reason> analyze(const AgentContext& ctx, const PromptCandidate& prompt,
                            const std::vector<FailureCase>& failures) {
    if (failures.empty()) throw ConfigError("analyze requires at least one failure case");
    const std::string body = render(ctx.templates->get(AgentRole::analyzer),
                                    {{"initial_prompt", prompt.text},
                                     {"bad_examples", format_bad_examples(failures)}});
    const ChatResponse response = ctx.gateway->call(
        make_request(ctx, RequestTag::analyzer, ctx.analyzer_temperature, body));

    const auto spans = parse_tagged_spans(response.content);
    if (spans.empty()) throw NoReasonsParsed(response.content);

    std::vector<std::string> failure_ids;
    failure_ids.reserve(failures.size());
    for (const auto& failure : failures) failure_ids.push_back(failure.example.id);

    std::vector<Reason> reasons;
    reasons.reserve(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        Reason reason;
        reason.id = "r" + std::to_string(i + 1);
        reason.text = trim(spans[i]);
        reason.failure_ids = failure_ids;
        reasons.push_back(std::move(reason));
    }
    return reasons;
}

std::vector<Pattern> summarize(const AgentContext& ctx, const PromptCandidate& prompt,
                               const std::vector<Reason>& reasons) {
    if (reasons.empty()) throw ConfigError("summarize requires at least one reason");
    std::vector<std::string> reason_texts;
    std::vector<std::string> reason_ids;
    for (const auto& reason : reasons) {
        reason_texts.push_back(reason.text);
        reason_ids.push_back(reason.id);
    }
    const std::string body = render(ctx.templates->get(AgentRole::summarizer),
                                    {{"initial_prompt", prompt.text},
                                     {"Reasons", join_bulleted(reason_texts)}});
    const ChatResponse response = ctx.gateway->call(
        make_request(ctx, RequestTag::summarizer, ctx.summarizer_temperature, body));

    const auto spans = parse_tagged_spans(response.content);
    if (spans.empty()) throw NoPatternsParsed(response.content);

    std::vector<Pattern> patterns;
    patterns.reserve(spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
        Pattern pattern;
        pattern.id = "m" + std::to_string(i + 1);
        pattern.description = trim(spans[i]);
        pattern.source_reason_ids = reason_ids;
        if (auto score = parse_importance(spans[i])) {
            pattern.importance = *score;
        } else {
            pattern.importance = 0.0;
            std::cerr << "warning: pattern " << pattern.id
                      << " has no parseable importance score; using 0\n";
        }
        patterns.push_back(std::move(pattern));
    }
    return patterns;
}

std::vector<Pattern> select_patterns(const std::vector<Pattern>& patterns, int n,
                                     PatternStrategy strategy, std::uint64_t seed) {
    if (patterns.empty()) throw ConfigError("select_patterns requires a non-empty pattern list");
    if (n < 1) throw ConfigError("n must be >= 1");
    const std::size_t take = std::min<std::size_t>(patterns.size(), static_cast<std::size_t>(n));

    if (strategy == PatternStrategy::top_score) {
        std::vector<std::size_t> order(patterns.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return patterns[a].importance > patterns[b].importance;
        });
        std::vector<Pattern> selected;
        selected.reserve(take);
        for (std::size_t i = 0; i < take; ++i) selected.push_back(patterns[order[i]]);
        return selected;
    }

    const auto indices = sample_indices(patterns.size(), take, seed);
    std::vector<Pattern> selected;
    selected.reserve(indices.size());
    for (std::size_t index : indices) selected.push_back(patterns[index]);
    return selected;
}

std::string strip_code_fence(const std::string& text) {
    const std::string trimmed = trim(text);
    if (trimmed.size() < 6 || trimmed.rfind("```", 0) != 0) return trimmed;
    const std::size_t first_newline = trimmed.find('\n');
    if (first_newline == std::string::npos) return trimmed;
    if (trimmed.compare(trimmed.size() - 3, 3, "```") != 0) return trimmed;
    const std::size_t last_newline = trimmed.rfind('\n');
    if (last_newline == std::string::npos || last_newline < first_newline) return trimmed;
    if (trim(trimmed.substr(last_newline + 1)) != "```") return trimmed;
    return trim(trimmed.substr(first_newline + 1, last_newline - first_newline - 1));
}

PromptCandidate revise(const AgentContext& ctx, const PromptCandidate& prompt,
                       const std::vector<Pattern>& patterns, std::string new_id,
                       int iteration) {
    if (patterns.empty()) throw ConfigError("revise requires at least one pattern");
    std::vector<std::string> descriptions;
    std::vector<std::string> pattern_ids;
    for (const auto& pattern : patterns) {
        descriptions.push_back(pattern.description);
        pattern_ids.push_back(pattern.id);
    }
    const std::string body = render(ctx.templates->get(AgentRole::revisor),
                                    {{"initial_prompt", prompt.text},
                                     {"patterns", join_bulleted(descriptions)}});
    const ChatResponse response = ctx.gateway->call(
        make_request(ctx, RequestTag::revisor, ctx.revisor_temperature, body));

    const std::string text = strip_code_fence(response.content);
    if (text.empty()) throw EmptyRevision("revisor returned a blank completion");
    return make_revised_candidate(std::move(new_id), text, prompt, iteration,
                                  std::move(pattern_ids));
}

PromptCandidate initialize_prompt(const AgentContext& ctx, const TaskSpec& task,
                                  int n_examples, std::uint64_t seed, std::string id) {
    if (n_examples < 1) throw ConfigError("n-examples must be >= 1");
    if (static_cast<std::size_t>(n_examples) > task.splits.train.size()) {
        throw ConfigError("n-examples exceeds the train split size (" +
                          std::to_string(task.splits.train.size()) + ")");
    }
    const auto indices = sample_indices(task.splits.train.size(),
                                        static_cast<std::size_t>(n_examples),
                                        derive_seed(seed, "fewshot", 0));
    std::string examples;
    for (std::size_t index : indices) {
        const Example& example = task.splits.train[index];
        if (!examples.empty()) examples += "\n\n";
        examples += "Input: " + example.input + "\nOutput: " + example.gold;
    }
    const std::string body = render(ctx.templates->get(AgentRole::initializer),
                                    {{"task_description", task.description},
                                     {"examples", examples}});
    const ChatResponse response =
        ctx.gateway->call(make_request(ctx, RequestTag::initializer, 0.0, body));

    const std::string text = strip_code_fence(response.content);
    if (text.empty()) throw EmptyRevision("initializer returned a blank completion");
    return make_initial_candidate(std::move(id), text);
}

}  // namespace ampo
