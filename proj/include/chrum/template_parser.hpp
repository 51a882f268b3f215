#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chrum/errors.hpp"
#include "chrum/strings.hpp"

namespace chrum {

enum class BlockKind { Action, Replace, ForkMerge };

inline const char* block_kind_name(BlockKind k) {
    switch (k) {
        case BlockKind::Action: return "ACTION";
        case BlockKind::Replace: return "REPLACE";
        case BlockKind::ForkMerge: return "FORK_MERGE";
    }
    return "?";
}

struct Attribute {
    std::string name;
    std::string value;
    bool operator==(const Attribute&) const = default;
};

// One region between `# BEG:<KIND> ...` and `# END:<KIND>` markers.
// `raw_lines` keeps the region verbatim (markers included) so a parsed
// document can be re-serialized byte-for-byte.
struct Block {
    BlockKind kind{};
    std::vector<Attribute> attributes;  // REPLACE stores one attribute named "target"
    std::vector<std::string> body;
    int start_line = 0;  // 1-based line of the BEG marker
    int end_line = 0;    // 1-based line of the END marker
    std::vector<std::string> raw_lines;

    const std::string* find_attr(std::string_view name) const {
        for (const auto& a : attributes)
            if (a.name == name) return &a.value;
        return nullptr;
    }

    const std::string& attr(std::string_view name) const {
        if (const std::string* v = find_attr(name)) return *v;
        throw std::logic_error("block has no attribute '" + std::string(name) + "'");
    }

    // REPLACE only: the @IDENT@ placeholder this block defines.
    const std::string& replace_target() const { return attr("target"); }
};

struct Passthrough {
    std::vector<std::string> lines;
};

using Segment = std::variant<Passthrough, Block>;

struct TemplateDocument {
    std::vector<Segment> segments;
    std::string source_name;
    bool ends_with_newline = false;

    std::vector<const Block*> blocks() const {
        std::vector<const Block*> out;
        for (const auto& seg : segments)
            if (const Block* b = std::get_if<Block>(&seg)) out.push_back(b);
        return out;
    }

    // Inverse of parse_template on '\n'-normalized input.
    std::string serialize() const {
        std::vector<std::string> lines;
        for (const auto& seg : segments) {
            const auto& src = std::holds_alternative<Passthrough>(seg)
                                  ? std::get<Passthrough>(seg).lines
                                  : std::get<Block>(seg).raw_lines;
            lines.insert(lines.end(), src.begin(), src.end());
        }
        return join_lines(lines, ends_with_newline);
    }
};

namespace detail {

struct Marker {
    bool is_beg = false;
    BlockKind kind{};
    std::string rest;  // text after the kind token
};

// Recognizes `# BEG:<KIND> ...` / `# END:<KIND>` after leading-whitespace
// trim. Ordinary `#` comment lines are passthrough.
inline bool match_marker(std::string_view line, int line_no, const std::string& source,
                         Marker& out) {
    std::string_view s = ltrim(line);
    if (s.empty() || s.front() != '#') return false;
    s = ltrim(s.substr(1));
    bool is_beg = s.starts_with("BEG:");
    bool is_end = s.starts_with("END:");
    if (!is_beg && !is_end) return false;
    s = s.substr(4);
    std::size_t kind_len = 0;
    while (kind_len < s.size() && s[kind_len] != ' ' && s[kind_len] != '\t') ++kind_len;
    std::string_view kind_tok = s.substr(0, kind_len);
    out.is_beg = is_beg;
    if (kind_tok == "ACTION") out.kind = BlockKind::Action;
    else if (kind_tok == "REPLACE") out.kind = BlockKind::Replace;
    else if (kind_tok == "FORK_MERGE") out.kind = BlockKind::ForkMerge;
    else
        throw Error(Errc::UnknownBlockKind,
                    "unknown block kind '" + std::string(kind_tok) + "'", source, line_no);
    out.rest = std::string(s.substr(kind_len));
    return true;
}

inline std::vector<Attribute> parse_attributes(BlockKind kind, std::string_view rest, int line_no,
                                               const std::string& source) {
    auto bad = [&](const std::string& detail) -> Error {
        return Error(Errc::BadAttributes,
                     std::string(block_kind_name(kind)) + " block: " + detail, source, line_no);
    };

    std::vector<std::string> tokens = split_whitespace(rest);

    if (kind == BlockKind::Replace) {
        if (tokens.size() != 1)
            throw bad("expected exactly one @NAME@ target, got " + std::to_string(tokens.size()) +
                      " tokens");
        if (!is_placeholder_token(tokens[0]))
            throw bad("target '" + tokens[0] + "' is not of the form @IDENT@");
        return {{"target", tokens[0]}};
    }

    const std::vector<std::string_view> required =
        kind == BlockKind::Action ? std::vector<std::string_view>{"name", "ok", "error"}
                                  : std::vector<std::string_view>{"name", "node_after_join", "error"};

    std::vector<Attribute> attrs;
    for (const std::string& tok : tokens) {
        std::size_t eq = tok.find('=');
        if (eq == std::string::npos) throw bad("token '" + tok + "' is not key=value");
        std::string key = tok.substr(0, eq);
        std::string value = tok.substr(eq + 1);
        if (key.empty()) throw bad("empty attribute name in '" + tok + "'");
        if (value.empty()) throw bad("attribute '" + key + "' has an empty value");
        for (const auto& a : attrs)
            if (a.name == key) throw bad("duplicate attribute '" + key + "'");
        attrs.push_back({std::move(key), std::move(value)});
    }
    for (std::string_view req : required)
        if (std::find_if(attrs.begin(), attrs.end(),
                         [&](const Attribute& a) { return a.name == req; }) == attrs.end())
            throw bad("missing attribute '" + std::string(req) + "'");
    if (attrs.size() != required.size())
        for (const auto& a : attrs)
            if (std::find(required.begin(), required.end(), a.name) == required.end())
                throw bad("unexpected attribute '" + a.name + "'");
    return attrs;
}

}  // namespace detail

inline TemplateDocument parse_template(std::string_view source_text, std::string source_name) {
    TemplateDocument doc;
    doc.source_name = source_name;
    SplitLines split = split_lines(source_text);
    doc.ends_with_newline = split.ends_with_newline;

    Passthrough passthrough;
    Block open_block;
    bool in_block = false;

    auto flush_passthrough = [&] {
        if (!passthrough.lines.empty()) {
            doc.segments.emplace_back(std::move(passthrough));
            passthrough = Passthrough{};
        }
    };

    for (std::size_t i = 0; i < split.lines.size(); ++i) {
        const std::string& line = split.lines[i];
        int line_no = static_cast<int>(i) + 1;
        detail::Marker marker;
        if (!detail::match_marker(line, line_no, source_name, marker)) {
            if (in_block) {
                open_block.body.push_back(line);
                open_block.raw_lines.push_back(line);
            } else {
                passthrough.lines.push_back(line);
            }
            continue;
        }
        if (marker.is_beg) {
            if (in_block)
                throw Error(Errc::NestedBlock,
                            "BEG:" + std::string(block_kind_name(marker.kind)) +
                                " inside an open " +
                                std::string(block_kind_name(open_block.kind)) + " block",
                            source_name, line_no);
            flush_passthrough();
            open_block = Block{};
            open_block.kind = marker.kind;
            open_block.attributes =
                detail::parse_attributes(marker.kind, marker.rest, line_no, source_name);
            open_block.start_line = line_no;
            open_block.raw_lines.push_back(line);
            in_block = true;
        } else {
            if (!in_block || marker.kind != open_block.kind)
                throw Error(Errc::UnexpectedEnd,
                            "END:" + std::string(block_kind_name(marker.kind)) +
                                " without a matching open block",
                            source_name, line_no);
            if (!trim(marker.rest).empty())
                throw Error(Errc::BadAttributes, "END marker takes no attributes", source_name,
                            line_no);
            open_block.end_line = line_no;
            open_block.raw_lines.push_back(line);
            doc.segments.emplace_back(std::move(open_block));
            open_block = Block{};
            in_block = false;
        }
    }
    if (in_block)
        throw Error(Errc::UnterminatedBlock,
                    "BEG:" + std::string(block_kind_name(open_block.kind)) + " has no END",
                    source_name, open_block.start_line);
    flush_passthrough();
    return doc;
}

}  // namespace chrum
