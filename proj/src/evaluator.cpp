#include "ampo/evaluator.hpp"

#include "ampo/errors.hpp"
#include "ampo/rng.hpp"
#include "ampo/text.hpp"

#include <atomic>
#include <fstream>
#include <regex>
#include <thread>

#include <nlohmann/json.hpp>

namespace ampo {

using nlohmann::json;

std::string extract_answer(const std::string& completion, const AnswerExtraction& extraction,
                           const std::optional<std::vector<std::string>>& label_set) {
    std::regex pattern(extraction.pattern);
    std::smatch match;
    if (std::regex_search(completion, match, pattern) && match.size() > 1) {
        return normalize_label(match[1].str());
    }
    if (extraction.fallback == AnswerExtraction::Fallback::last_label_mention && label_set) {
        // last mention wins; ties at the same position go to the longer label
        std::size_t best_pos = std::string::npos;
        const std::string* best_label = nullptr;
        for (const auto& label : *label_set) {
            if (label.empty()) continue;
            std::size_t pos = ifind(completion, label);
            std::size_t last = std::string::npos;
            while (pos != std::string::npos) {
                last = pos;
                pos = ifind(completion, label, pos + 1);
            }
            if (last == std::string::npos) continue;
            if (best_label == nullptr || last > best_pos ||
                (last == best_pos && label.size() > best_label->size())) {
                best_pos = last;
                best_label = &label;
            }
        }
        if (best_label != nullptr) return normalize_label(*best_label);
    }
    return normalize_label(completion);
}

namespace {

struct RowOutcome {
    PerExampleResult result;
    std::string raw_output;
};

std::vector<RowOutcome> run_pass(const PromptCandidate& prompt, const TaskSpec& task,
                                 const std::vector<Example>& examples,
                                 const EvalOptions& options, Gateway& gateway) {
    const std::size_t n = examples.size();
    std::vector<RowOutcome> rows(n);
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto work = [&]() {
        while (true) {
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error) return;
            }
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                const Example& example = examples[i];
                ChatRequest request;
                request.model = options.target_model;
                request.temperature = options.target_temperature;
                request.max_tokens = options.max_tokens;
                request.tag = RequestTag::target;
                request.messages = {{MessageRole::user, prompt.text + "\n\n" + example.input}};
                ChatResponse response = gateway.call(request);

                RowOutcome row;
                row.raw_output = response.content;
                row.result.id = example.id;
                row.result.extracted =
                    extract_answer(response.content, task.extraction, task.label_set);
                row.result.gold = normalize_label(example.gold);
                row.result.correct = row.result.extracted == row.result.gold;
                rows[i] = std::move(row);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const std::size_t workers =
        std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, options.parallelism)));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& thread : pool) thread.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return rows;
}

bool is_transient(const std::exception_ptr& error) {
    try {
        std::rethrow_exception(error);
    } catch (const TransportError&) {
        return true;
    } catch (const RateLimited&) {
        return true;
    } catch (...) {
        return false;
    }
}

}  // namespace

EvalReport evaluate(const PromptCandidate& prompt, const TaskSpec& task, Split split,
                    const EvalOptions& options, Gateway& gateway) {
    const std::vector<Example>& examples = task.splits.get(split);
    if (examples.empty()) {
        throw ConfigError(std::string("split empty: ") + to_string(split));
    }
    if (options.parallelism < 1) throw ConfigError("parallelism must be >= 1");

    std::vector<RowOutcome> rows;
    try {
        rows = run_pass(prompt, task, examples, options, gateway);
    } catch (...) {
        // one retry at the report level for transient provider errors
        if (!is_transient(std::current_exception())) throw;
        rows = run_pass(prompt, task, examples, options, gateway);
    }

    EvalReport report;
    report.prompt_id = prompt.id;
    report.split = split;
    report.n = static_cast<int>(examples.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].result.correct) {
            ++report.correct;
        } else {
            FailureCase failure;
            failure.example = examples[i];
            failure.model_output = rows[i].raw_output;
            failure.extracted_answer = rows[i].result.extracted;
            report.failures.push_back(std::move(failure));
        }
        report.per_example.push_back(std::move(rows[i].result));
    }
    report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.n);
    return report;
}

std::vector<FailureCase> sample_failures(const EvalReport& report, int k, std::uint64_t seed) {
    if (k < 1) throw ConfigError("k must be >= 1");
    if (report.failures.empty()) {
        throw NoFailures("prompt " + report.prompt_id + " is perfect on " +
                         to_string(report.split));
    }
    const auto indices =
        sample_indices(report.failures.size(), static_cast<std::size_t>(k), seed);
    std::vector<FailureCase> sampled;
    sampled.reserve(indices.size());
    for (std::size_t index : indices) sampled.push_back(report.failures[index]);
    return sampled;
}

void write_report(const EvalReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write report: " + path);
    for (const auto& row : report.per_example) {
        json line{{"kind", "example"},
                  {"id", row.id},
                  {"extracted", row.extracted},
                  {"gold", row.gold},
                  {"correct", row.correct}};
        out << line.dump() << '\n';
    }
    json summary{{"kind", "summary"},
                 {"prompt_id", report.prompt_id},
                 {"split", to_string(report.split)},
                 {"n", report.n},
                 {"correct", report.correct},
                 {"accuracy", report.accuracy}};
    out << summary.dump() << '\n';
}

}  // namespace ampo
