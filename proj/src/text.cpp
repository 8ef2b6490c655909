#include "ampo/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace ampo {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string_view trim_view(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    return text.substr(begin, end - begin);
}

std::string_view strip_surrounding_punct(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_punct(text[begin])) ++begin;
    while (end > begin && is_punct(text[end - 1])) --end;
    return text.substr(begin, end - begin);
}

}  // namespace

std::string trim(std::string_view text) { return std::string(trim_view(text)); }

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), lower);
    return out;
}

std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t from) {
    if (needle.empty()) return from <= haystack.size() ? from : std::string_view::npos;
    if (needle.size() > haystack.size()) return std::string_view::npos;
    for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
        bool hit = true;
        for (std::size_t j = 0; j < needle.size(); ++j) {
            if (lower(haystack[i + j]) != lower(needle[j])) {
                hit = false;
                break;
            }
        }
        if (hit) return i;
    }
    return std::string_view::npos;
}

std::string normalize_label(std::string_view raw) {
    std::string_view view = raw;
    while (true) {
        std::string_view next = strip_surrounding_punct(trim_view(view));
        if (next.size() == view.size()) break;
        view = next;
    }
    return to_lower(view);
}

namespace {

// Markers checked longest-first so "if-else" and "in case" are not split.
constexpr std::array<std::string_view, 4> kMarkers = {"if-else", "in case", "otherwise", "if"};

bool marker_at(std::string_view text, std::size_t pos, std::size_t& length) {
    for (std::string_view marker : kMarkers) {
        if (pos + marker.size() > text.size()) continue;
        bool hit = true;
        for (std::size_t j = 0; j < marker.size(); ++j) {
            if (lower(text[pos + j]) != marker[j]) {
                hit = false;
                break;
            }
        }
        if (!hit) continue;
        std::size_t after = pos + marker.size();
        if (after < text.size() && is_alnum(text[after])) continue;  // e.g. "iffy"
        length = marker.size();
        return true;
    }
    return false;
}

// Skips list-item decorations after a newline: bullets ("-", "*", "+") and
// numeric labels ("3.", "3)", "3.2").
std::size_t skip_item_markers(std::string_view text, std::size_t pos) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '*' || text[pos] == '+')) {
        std::size_t next = pos + 1;
        if (next < text.size() && is_space(text[next])) {
            pos = next;
            while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
        }
    }
    std::size_t digits_end = pos;
    while (digits_end < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[digits_end])) != 0 ||
            text[digits_end] == '.' || text[digits_end] == ')')) {
        ++digits_end;
    }
    if (digits_end > pos && digits_end < text.size() && is_space(text[digits_end]) &&
        std::isdigit(static_cast<unsigned char>(text[pos])) != 0) {
        pos = digits_end;
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    return pos;
}

bool sentence_end(char c) {
    return c == '.' || c == '!' || c == '?' || c == ':' || c == ';';
}

}  // namespace

int branch_count(std::string_view text) {
    int count = 0;
    std::size_t pos = 0;
    bool at_start = true;  // start of text, sentence, or list item
    while (pos < text.size()) {
        if (at_start) {
            std::size_t item = skip_item_markers(text, pos);
            std::size_t len = 0;
            if (item < text.size() && marker_at(text, item, len)) {
                ++count;
                pos = item + len;
                at_start = false;
                continue;
            }
            if (item < text.size() && is_space(text[item])) {
                pos = item + 1;
                at_start = text[item] == '\n' || at_start;
                continue;
            }
            pos = item;
            if (pos < text.size()) at_start = false;
            ++pos;
            continue;
        }
        char c = text[pos];
        if (c == '\n') {
            at_start = true;
        } else if (sentence_end(c)) {
            // a sentence boundary needs trailing whitespace ("3.2" is not one)
            if (pos + 1 < text.size() && is_space(text[pos + 1])) at_start = true;
        }
        ++pos;
    }
    return count;
}

}  // namespace ampo
