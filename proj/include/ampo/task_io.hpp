#pragma once

#include "ampo/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ampo {

// Loads a dataset split: one JSON record per line with string fields
// "id", "input", "gold". Throws ConfigError with the offending line number.
std::vector<Example> load_examples(const std::string& path);

// Loads a task config file (JSON):
//   task.name, task.description, task.labels[]
//   splits.{train,validation,test}.path   (paths relative to the config file)
//   extraction.pattern, extraction.fallback
// Validates id uniqueness across splits, non-empty golds, label membership,
// and that the extraction pattern compiles with exactly one capture group.
TaskSpec load_task(const std::string& config_path);

// When the task has no validation split, carves floor(val_fraction * train)
// examples (at least 1) out of train, seeded. No-op if validation is
// non-empty.
void carve_validation_split(TaskSpec& task, double val_fraction, std::uint64_t seed);

}  // namespace ampo
