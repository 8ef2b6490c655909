#pragma once

#include <string>
#include <string_view>

namespace ampo {

// Trim ASCII whitespace from both ends.
std::string trim(std::string_view text);

// Canonical form used for every label comparison: whitespace trimmed,
// surrounding punctuation stripped, ASCII case-folded. Idempotent.
std::string normalize_label(std::string_view raw);

// Number of conditional markers ("if", "if-else", "otherwise", "in case",
// case-insensitive) sitting at the start of a sentence or list item.
// A diagnostic structure metric only; never used for correctness decisions.
int branch_count(std::string_view prompt_text);

// ASCII lowercase copy.
std::string to_lower(std::string_view text);

// Case-insensitive substring search; npos when absent.
std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t from = 0);

}  // namespace ampo
