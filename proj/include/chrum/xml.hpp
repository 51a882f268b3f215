#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chrum/errors.hpp"
#include "chrum/strings.hpp"

// Minimal XML support for the Oozie workflow dialect: elements, attributes,
// character data, comments and an optional declaration. No namespaces, no
// DOCTYPE, no CDATA. Attributes are written single-quoted, elements indented
// four spaces per depth.
namespace chrum::xml {

struct Node {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<Node> children;
    std::string text;  // concatenated character data, entity-decoded

    const std::string* find_attr(std::string_view attr_name) const {
        for (const auto& [k, v] : attrs)
            if (k == attr_name) return &v;
        return nullptr;
    }

    const Node* find_child(std::string_view child_name) const {
        for (const auto& c : children)
            if (c.name == child_name) return &c;
        return nullptr;
    }
};

inline std::string escape_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string escape_attr(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

namespace detail {

class Parser {
public:
    Parser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

    Node parse_document() {
        skip_misc();
        if (eof()) fail("document has no root element");
        Node root = parse_element();
        skip_misc();
        if (!eof()) fail("content after the root element");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& detail) {
        throw Error(Errc::XmlMalformed, detail, source_, line_);
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char take() {
        char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && !eof(); ++i) take();
    }

    void skip_until(std::string_view terminator, const std::string& what) {
        std::size_t found = text_.find(terminator, pos_);
        if (found == std::string_view::npos) fail("unterminated " + what);
        while (pos_ < found + terminator.size()) take();
    }

    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r'))
            take();
    }

    // Whitespace, comments and processing instructions between markup.
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<?")) {
                skip_until("?>", "declaration");
            } else {
                return;
            }
        }
    }

    static bool is_name_char(char c) {
        return is_ident_char(c) || c == '.' || c == ':';
    }

    std::string parse_name(const char* what) {
        std::size_t start = pos_;
        while (!eof() && is_name_char(peek())) take();
        if (pos_ == start) fail(std::string("expected ") + what);
        return std::string(text_.substr(start, pos_ - start));
    }

    void decode_entity(std::string& out) {
        std::size_t semi = text_.find(';', pos_);
        if (semi == std::string_view::npos || semi - pos_ > 12) fail("bad entity reference");
        std::string_view ent = text_.substr(pos_ + 1, semi - pos_ - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "apos") out += '\'';
        else if (ent == "quot") out += '"';
        else if (!ent.empty() && ent[0] == '#') {
            long code = 0;
            std::size_t i = 1;
            int base = 10;
            if (i < ent.size() && (ent[i] == 'x' || ent[i] == 'X')) { base = 16; ++i; }
            if (i >= ent.size()) fail("bad character reference");
            for (; i < ent.size(); ++i) {
                char c = ent[i];
                int digit;
                if (c >= '0' && c <= '9') digit = c - '0';
                else if (base == 16 && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
                else if (base == 16 && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
                else fail("bad character reference");
                code = code * base + digit;
                if (code > 0x10FFFF) fail("character reference out of range");
            }
            if (code < 0x80) {
                out += static_cast<char>(code);
            } else {
                // UTF-8 encode
                if (code < 0x800) {
                    out += static_cast<char>(0xC0 | (code >> 6));
                } else if (code < 0x10000) {
                    out += static_cast<char>(0xE0 | (code >> 12));
                    out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
                } else {
                    out += static_cast<char>(0xF0 | (code >> 18));
                    out += static_cast<char>(0x80 | ((code >> 12) & 0x3F));
                    out += static_cast<char>(0x80 | ((code >> 6) & 0x3F));
                }
                out += static_cast<char>(0x80 | (code & 0x3F));
            }
        } else {
            fail("unknown entity '&" + std::string(ent) + ";'");
        }
        while (pos_ <= semi) take();
    }

    std::string parse_attr_value() {
        char quote = peek();
        if (quote != '\'' && quote != '"') fail("attribute value must be quoted");
        take();
        std::string value;
        while (!eof() && peek() != quote) {
            if (peek() == '<') fail("'<' in attribute value");
            if (peek() == '&') decode_entity(value);
            else value += take();
        }
        if (eof()) fail("unterminated attribute value");
        take();
        return value;
    }

    Node parse_element() {
        if (peek() != '<') fail("expected element");
        int start_line = line_;
        take();
        Node node;
        node.name = parse_name("element name");
        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated start tag of <" + node.name + ">");
            if (peek() == '>') {
                take();
                break;
            }
            if (starts_with("/>")) {
                advance(2);
                return node;
            }
            std::string attr_name = parse_name("attribute name");
            for (const auto& [k, v] : node.attrs)
                if (k == attr_name) fail("duplicate attribute '" + attr_name + "' on <" + node.name + ">");
            skip_ws();
            if (eof() || peek() != '=') fail("expected '=' after attribute '" + attr_name + "'");
            take();
            skip_ws();
            node.attrs.emplace_back(std::move(attr_name), parse_attr_value());
        }
        // content
        for (;;) {
            if (eof()) {
                line_ = start_line;
                fail("element <" + node.name + "> is never closed");
            }
            if (starts_with("</")) {
                advance(2);
                std::string close = parse_name("closing tag name");
                if (close != node.name)
                    fail("mismatched closing tag </" + close + "> for <" + node.name + ">");
                skip_ws();
                if (eof() || peek() != '>') fail("malformed closing tag </" + close + ">");
                take();
                return node;
            }
            if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<?")) {
                skip_until("?>", "declaration");
            } else if (starts_with("<!")) {
                fail("unsupported markup in <" + node.name + ">");
            } else if (peek() == '<') {
                node.children.push_back(parse_element());
            } else if (peek() == '&') {
                decode_entity(node.text);
            } else {
                node.text += take();
            }
        }
    }

    std::string_view text_;
    std::string source_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

}  // namespace detail

inline Node parse(std::string_view text, const std::string& source_name = "") {
    return detail::Parser(text, source_name).parse_document();
}

inline void write_lines(const Node& node, std::vector<std::string>& out, int depth,
                        int indent_width = 4) {
    std::string indent(static_cast<std::size_t>(depth) * indent_width, ' ');
    std::string open = indent + "<" + node.name;
    for (const auto& [k, v] : node.attrs) open += " " + k + "='" + escape_attr(v) + "'";
    std::string_view text = trim(node.text);
    if (node.children.empty()) {
        if (text.empty()) {
            out.push_back(open + "/>");
        } else {
            out.push_back(open + ">" + escape_text(text) + "</" + node.name + ">");
        }
        return;
    }
    out.push_back(open + ">");
    if (!text.empty()) out.push_back(indent + std::string(indent_width, ' ') + escape_text(text));
    for (const Node& child : node.children) write_lines(child, out, depth + 1, indent_width);
    out.push_back(indent + "</" + node.name + ">");
}

inline std::string to_string(const Node& node, int depth = 0) {
    std::vector<std::string> lines;
    write_lines(node, lines, depth);
    return join_lines(lines, true);
}

inline std::string collapse_whitespace(std::string_view s) {
    std::string out;
    bool in_ws = false;
    for (char c : trim(s)) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            in_ws = true;
        } else {
            if (in_ws && !out.empty()) out += ' ';
            in_ws = false;
            out += c;
        }
    }
    return out;
}

// Structural equality: element names, attribute sets (order-insensitive) and
// whitespace-normalized text, recursively.
inline bool equal_ignoring_whitespace(const Node& a, const Node& b) {
    if (a.name != b.name) return false;
    if (a.attrs.size() != b.attrs.size()) return false;
    auto sorted_attrs = [](const Node& n) {
        auto attrs = n.attrs;
        std::sort(attrs.begin(), attrs.end());
        return attrs;
    };
    if (sorted_attrs(a) != sorted_attrs(b)) return false;
    if (collapse_whitespace(a.text) != collapse_whitespace(b.text)) return false;
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!equal_ignoring_whitespace(a.children[i], b.children[i])) return false;
    return true;
}

// Tracks element nesting depth across verbatim passthrough text so generated
// nodes can be indented to match their position in the document. Quote-aware;
// tolerant of malformed text (the final full-document parse reports that).
inline int advance_depth(std::string_view text, int depth) {
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '<') {
            ++i;
            continue;
        }
        if (text.substr(i).starts_with("<!--")) {
            std::size_t end = text.find("-->", i);
            if (end == std::string_view::npos) return depth;
            i = end + 3;
            continue;
        }
        if (text.substr(i).starts_with("<?")) {
            std::size_t end = text.find("?>", i);
            if (end == std::string_view::npos) return depth;
            i = end + 2;
            continue;
        }
        bool closing = text.substr(i).starts_with("</");
        std::size_t j = i + 1;
        char quote = 0;
        bool self_closing = false;
        for (; j < text.size(); ++j) {
            char c = text[j];
            if (quote) {
                if (c == quote) quote = 0;
            } else if (c == '\'' || c == '"') {
                quote = c;
            } else if (c == '>') {
                self_closing = j > i && text[j - 1] == '/';
                break;
            }
        }
        if (j >= text.size()) return depth;
        if (closing) --depth;
        else if (!self_closing) ++depth;
        i = j + 1;
    }
    return depth;
}

}  // namespace chrum::xml
