#include "ampo/task_io.hpp"

#include "ampo/errors.hpp"
#include "ampo/rng.hpp"
#include "ampo/text.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace ampo {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<Example> load_examples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dataset file: " + path);
    std::vector<Example> examples;
    std::unordered_set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        Example example;
        for (const char* field : {"id", "input", "gold"}) {
            if (!record.contains(field) || !record[field].is_string()) {
                throw ConfigError(path + ":" + std::to_string(line_no) + ": missing string field '" +
                                  field + "'");
            }
        }
        example.id = record["id"].get<std::string>();
        example.input = record["input"].get<std::string>();
        example.gold = record["gold"].get<std::string>();
        if (example.id.empty()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": empty id");
        }
        if (!seen.insert(example.id).second) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": duplicate id '" +
                              example.id + "'");
        }
        if (normalize_label(example.gold).empty()) {
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": gold label empty after normalization");
        }
        examples.push_back(std::move(example));
    }
    return examples;
}

namespace {

int line_of_offset(const std::string& text, std::size_t offset) {
    int line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

std::vector<Example> load_split_if_present(const json& splits, const char* name,
                                           const fs::path& base_dir) {
    if (!splits.contains(name)) return {};
    const json& split = splits.at(name);
    if (!split.contains("path")) return {};
    const std::string rel = split.at("path").get<std::string>();
    if (rel.empty()) return {};
    fs::path path(rel);
    if (path.is_relative()) path = base_dir / path;
    return load_examples(path.string());
}

void check_cross_split_ids(const DatasetSplits& splits) {
    std::unordered_set<std::string> seen;
    auto check = [&seen](const std::vector<Example>& examples, const char* split_name) {
        for (const auto& example : examples) {
            if (!seen.insert(example.id).second) {
                throw ConfigError("id '" + example.id + "' appears in two splits (" + split_name +
                                  ")");
            }
        }
    };
    check(splits.train, "train");
    check(splits.validation, "validation");
    check(splits.test, "test");
}

void check_labels(const TaskSpec& task) {
    if (!task.label_set) return;
    std::set<std::string> normalized;
    for (const auto& label : *task.label_set) normalized.insert(normalize_label(label));
    auto check = [&](const std::vector<Example>& examples) {
        for (const auto& example : examples) {
            if (normalized.count(normalize_label(example.gold)) == 0) {
                throw ConfigError("gold label '" + example.gold + "' (example " + example.id +
                                  ") is not in task.labels");
            }
        }
    };
    check(task.splits.train);
    check(task.splits.validation);
    check(task.splits.test);
}

}  // namespace

TaskSpec load_task(const std::string& config_path) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open task config: " + config_path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json config;
    try {
        config = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(config_path + ":" + std::to_string(line_of_offset(text, e.byte)) + ": " +
                          e.what());
    }

    TaskSpec task;
    if (!config.contains("task") || !config["task"].contains("name")) {
        throw ConfigError(config_path + ": missing task.name");
    }
    task.name = config["task"]["name"].get<std::string>();
    task.description = config["task"].value("description", "");
    if (config["task"].contains("labels")) {
        std::vector<std::string> labels;
        for (const auto& label : config["task"]["labels"]) {
            labels.push_back(label.get<std::string>());
        }
        if (!labels.empty()) task.label_set = std::move(labels);
    }

    const fs::path base_dir = fs::path(config_path).parent_path();
    if (!config.contains("splits")) throw ConfigError(config_path + ": missing splits section");
    task.splits.train = load_split_if_present(config["splits"], "train", base_dir);
    task.splits.validation = load_split_if_present(config["splits"], "validation", base_dir);
    task.splits.test = load_split_if_present(config["splits"], "test", base_dir);
    check_cross_split_ids(task.splits);

    if (!config.contains("extraction") || !config["extraction"].contains("pattern")) {
        throw ConfigError(config_path + ": missing extraction.pattern");
    }
    task.extraction.pattern = config["extraction"]["pattern"].get<std::string>();
    const std::string fallback = config["extraction"].value("fallback", "last_label_mention");
    if (fallback == "last_label_mention") {
        task.extraction.fallback = AnswerExtraction::Fallback::last_label_mention;
    } else if (fallback == "whole_output") {
        task.extraction.fallback = AnswerExtraction::Fallback::whole_output;
    } else {
        throw ConfigError(config_path + ": unknown extraction.fallback '" + fallback + "'");
    }
    try {
        std::regex compiled(task.extraction.pattern);
        if (compiled.mark_count() != 1) {
            throw ConfigError(config_path + ": extraction.pattern must have exactly one capture group");
        }
    } catch (const std::regex_error& e) {
        throw ConfigError(config_path + ": extraction.pattern does not compile: " + e.what());
    }

    check_labels(task);
    return task;
}

void carve_validation_split(TaskSpec& task, double val_fraction, std::uint64_t seed) {
    if (!task.splits.validation.empty()) return;
    if (task.splits.train.empty()) throw ConfigError("cannot carve validation split: train is empty");
    if (val_fraction <= 0.0 || val_fraction >= 1.0) {
        throw ConfigError("val-fraction must lie in (0, 1)");
    }
    const std::size_t n = task.splits.train.size();
    std::size_t k = static_cast<std::size_t>(val_fraction * static_cast<double>(n));
    if (k < 1) k = 1;
    if (k >= n) k = n - 1;

    auto chosen = sample_indices(n, k, derive_seed(seed, "valsplit", 0));
    std::vector<bool> to_val(n, false);
    for (std::size_t index : chosen) to_val[index] = true;

    std::vector<Example> train;
    std::vector<Example> validation;
    train.reserve(n - k);
    validation.reserve(k);
    for (std::size_t i = 0; i < n; ++i) {
        (to_val[i] ? validation : train).push_back(std::move(task.splits.train[i]));
    }
    task.splits.train = std::move(train);
    task.splits.validation = std::move(validation);
}

}  // namespace ampo
