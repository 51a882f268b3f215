#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chrum {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

inline std::string_view ltrim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    return s;
}

inline std::string_view rtrim(std::string_view s) {
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

inline std::string_view trim(std::string_view s) { return rtrim(ltrim(s)); }

inline std::string_view leading_whitespace(std::string_view s) {
    std::size_t n = 0;
    while (n < s.size() && (s[n] == ' ' || s[n] == '\t')) ++n;
    return s.substr(0, n);
}

inline std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::string_view rtrim_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

struct SplitLines {
    std::vector<std::string> lines;   // without terminators, '\r' of CRLF stripped
    bool ends_with_newline = false;
};

// Line splitter used everywhere: normalizes CRLF to LF. Round-trip via
// join + trailing-newline flag is byte-exact for '\n'-terminated input.
inline SplitLines split_lines(std::string_view text) {
    SplitLines out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            out.lines.emplace_back(rtrim_cr(text.substr(start)));
            out.ends_with_newline = false;
            break;
        }
        out.lines.emplace_back(rtrim_cr(text.substr(start, nl - start)));
        start = nl + 1;
        if (start == text.size()) {
            out.ends_with_newline = true;
            break;
        }
    }
    return out;
}

inline std::string join_lines(const std::vector<std::string>& lines, bool trailing_newline) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        out += lines[i];
        if (i + 1 < lines.size() || trailing_newline) out += '\n';
    }
    return out;
}

inline bool is_ident_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
}

// True for a full placeholder token such as "@WF-1@".
inline bool is_placeholder_token(std::string_view tok) {
    if (tok.size() < 3 || tok.front() != '@' || tok.back() != '@') return false;
    for (std::size_t i = 1; i + 1 < tok.size(); ++i)
        if (!is_ident_char(tok[i])) return false;
    return true;
}

struct PlaceholderRef {
    std::size_t begin = 0;  // offset of the opening '@'
    std::size_t end = 0;    // offset one past the closing '@'
    std::string name;       // full spelling, including the '@'s
};

// Finds the next @IDENT@ occurrence at or after `from`. A lone or doubled '@'
// is not a placeholder; scanning resumes after it.
inline std::optional<PlaceholderRef> find_placeholder(std::string_view s, std::size_t from = 0) {
    std::size_t i = from;
    while (i < s.size()) {
        if (s[i] != '@') {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < s.size() && is_ident_char(s[j])) ++j;
        if (j > i + 1 && j < s.size() && s[j] == '@') {
            PlaceholderRef ref;
            ref.begin = i;
            ref.end = j + 1;
            ref.name = std::string(s.substr(i, j + 1 - i));
            return ref;
        }
        i = i + 1;
    }
    return std::nullopt;
}

inline int count_non_blank(const std::vector<std::string>& lines) {
    int n = 0;
    for (const auto& l : lines)
        if (!trim(l).empty()) ++n;
    return n;
}

}  // namespace chrum
