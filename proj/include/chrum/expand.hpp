#pragma once

#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chrum/errors.hpp"
#include "chrum/idioms.hpp"
#include "chrum/replace_table.hpp"
#include "chrum/strings.hpp"
#include "chrum/template_parser.hpp"
#include "chrum/xml.hpp"

namespace chrum {

struct AxisSpec {
    std::string name;  // bare ident; referenced in the body as @name@
    std::vector<std::string> values;

    std::string placeholder() const { return "@" + name + "@"; }
};

struct ForkMergeSpec {
    std::string name;
    std::string node_after_join;
    std::string error;
    std::vector<AxisSpec> axes;
    std::vector<std::string> body;

    std::size_t combination_count() const {
        std::size_t n = 1;
        for (const auto& axis : axes) n *= axis.values.size();
        return n;
    }
};

struct ExpandedNode {
    std::string name;
    std::string xml_text;
};

// Raw Oozie node text for one expanded block: a lone action, or a
// fork + generated actions + join emitted contiguously.
struct ExpandedNodeSet {
    std::vector<ExpandedNode> nodes;
    std::string entry_name;
    std::string ok_target;
    std::string error_target;
};

namespace detail {

// ${prop} references inside idiom arguments must resolve at compile time:
// the compiler cannot enumerate a loop of unknown extent.
inline std::string substitute_prop_refs(std::string_view arg,
                                        const std::map<std::string, std::string>& props) {
    std::string out;
    std::size_t pos = 0;
    while (pos < arg.size()) {
        std::size_t dollar = arg.find("${", pos);
        if (dollar == std::string_view::npos) {
            out += arg.substr(pos);
            break;
        }
        out += arg.substr(pos, dollar - pos);
        std::size_t close = arg.find('}', dollar + 2);
        if (close == std::string_view::npos)
            throw Error(Errc::NonIntegerIdiomArg,
                        "unterminated ${...} in idiom argument '" + std::string(arg) + "'");
        std::string name(arg.substr(dollar + 2, close - dollar - 2));
        auto it = props.find(name);
        if (it == props.end())
            throw Error(Errc::UnresolvedPropertyInIdiom,
                        "property '" + name + "' referenced by an idiom argument has no value");
        out += it->second;
        pos = close + 1;
    }
    return out;
}

inline long long parse_integer_arg(const std::string& token) {
    std::string_view t = trim(token);
    if (t.empty()) throw Error(Errc::NonIntegerIdiomArg, "empty idiom argument");
    std::string buf(t);
    char* end = nullptr;
    long long value = std::strtoll(buf.c_str(), &end, 10);
    if (end != buf.c_str() + buf.size())
        throw Error(Errc::NonIntegerIdiomArg, "idiom argument '" + buf + "' is not an integer");
    return value;
}

// `ident(args)` as the lone value token of an axis line.
inline bool match_idiom_call(std::string_view token, std::string& name, std::string& args) {
    std::size_t open = token.find('(');
    if (open == 0 || open == std::string_view::npos || token.back() != ')') return false;
    for (std::size_t i = 0; i < open; ++i) {
        char c = token[i];
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
                  (i > 0 && c >= '0' && c <= '9');
        if (!ok) return false;
    }
    name = std::string(token.substr(0, open));
    args = std::string(token.substr(open + 1, token.size() - open - 2));
    return true;
}

inline std::vector<std::string> eval_idiom_call(const std::string& name, const std::string& args,
                                                const std::map<std::string, std::string>& props,
                                                const IdiomRegistry& idioms) {
    if (!idioms.contains(name)) throw Error(Errc::UnknownIdiom, "unknown idiom '" + name + "'");
    std::vector<long long> values;
    if (!trim(args).empty()) {
        std::size_t start = 0;
        for (;;) {
            std::size_t comma = args.find(',', start);
            std::string piece = args.substr(start, comma == std::string::npos ? std::string::npos
                                                                              : comma - start);
            values.push_back(parse_integer_arg(substitute_prop_refs(piece, props)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return idioms.eval(name, values);
}

}  // namespace detail

struct ParsedAxes {
    std::vector<AxisSpec> axes;
    std::size_t body_start = 0;  // index of the first non-axis body line
};

// Axis lines are the maximal leading run of body lines shaped
// `@ident@ <token>...`. A lone `idiom(args)` value token is evaluated at
// compile time; literal tokens (including ${...} references) stay verbatim.
inline ParsedAxes parse_axes(const std::vector<std::string>& fm_body,
                             const std::map<std::string, std::string>& compile_props,
                             const IdiomRegistry& idioms) {
    ParsedAxes out;
    for (out.body_start = 0; out.body_start < fm_body.size(); ++out.body_start) {
        std::vector<std::string> tokens = split_whitespace(fm_body[out.body_start]);
        if (tokens.size() < 2 || !is_placeholder_token(tokens[0])) break;

        AxisSpec axis;
        axis.name = tokens[0].substr(1, tokens[0].size() - 2);
        for (const auto& existing : out.axes)
            if (existing.name == axis.name)
                throw Error(Errc::DuplicateKey, "axis '@" + axis.name + "@' declared twice");

        std::string idiom_name, idiom_args;
        if (tokens.size() == 2 && detail::match_idiom_call(tokens[1], idiom_name, idiom_args)) {
            axis.values = detail::eval_idiom_call(idiom_name, idiom_args, compile_props, idioms);
            if (axis.values.empty())
                throw Error(Errc::EmptyRange, "axis '@" + axis.name + "@' has no values");
        } else {
            axis.values.assign(tokens.begin() + 1, tokens.end());
        }
        out.axes.push_back(std::move(axis));
    }
    return out;
}

inline ForkMergeSpec parse_fork_merge_spec(const Block& block,
                                           const std::map<std::string, std::string>& compile_props,
                                           const IdiomRegistry& idioms) {
    ForkMergeSpec spec;
    spec.name = block.attr("name");
    spec.node_after_join = block.attr("node_after_join");
    spec.error = block.attr("error");
    ParsedAxes parsed = parse_axes(block.body, compile_props, idioms);
    spec.axes = std::move(parsed.axes);
    spec.body.assign(block.body.begin() + static_cast<std::ptrdiff_t>(parsed.body_start),
                     block.body.end());
    return spec;
}

namespace detail {

inline std::string substitute_axes(const std::string& line,
                                   const std::map<std::string, std::string>& assignment) {
    std::string out;
    std::size_t pos = 0;
    while (auto ref = find_placeholder(line, pos)) {
        out += line.substr(pos, ref->begin - pos);
        auto it = assignment.find(ref->name);
        if (it != assignment.end()) out += it->second;
        else out += ref->name;
        pos = ref->end;
    }
    out += line.substr(pos);
    return out;
}

inline std::string action_node_text(const std::string& name, const std::vector<std::string>& body,
                                    const std::string& ok, const std::string& error) {
    std::vector<std::string> lines;
    lines.push_back("<action name='" + xml::escape_attr(name) + "'>");
    lines.insert(lines.end(), body.begin(), body.end());
    lines.push_back("    <ok to='" + xml::escape_attr(ok) + "'/>");
    lines.push_back("    <error to='" + xml::escape_attr(error) + "'/>");
    lines.push_back("</action>");
    return join_lines(lines, false);
}

}  // namespace detail

inline ExpandedNodeSet expand_action(const Block& block, const ReplaceTable& table) {
    ExpandedNodeSet set;
    set.entry_name = block.attr("name");
    set.ok_target = block.attr("ok");
    set.error_target = block.attr("error");
    std::vector<std::string> body =
        resolve_text(block.body, table, {}, "action '" + set.entry_name + "'");
    set.nodes.push_back(
        {set.entry_name, detail::action_node_text(set.entry_name, body, set.ok_target, set.error_target)});
    return set;
}

// Expands a FORK_MERGE over the cartesian product of its axes, row-major
// (first declared axis varies slowest). One combination collapses to a plain
// action: Oozie rejects a single-path fork.
inline ExpandedNodeSet expand_fork_merge(const Block& block, const ReplaceTable& table,
                                         const std::map<std::string, std::string>& compile_props,
                                         const IdiomRegistry& idioms) {
    ForkMergeSpec spec = parse_fork_merge_spec(block, compile_props, idioms);

    std::set<std::string> axis_names;
    for (const auto& axis : spec.axes) axis_names.insert(axis.placeholder());
    std::vector<std::string> body =
        resolve_text(spec.body, table, axis_names, "fork_merge '" + spec.name + "'");

    std::size_t total = spec.combination_count();
    ExpandedNodeSet set;
    set.entry_name = spec.name;
    set.ok_target = spec.node_after_join;
    set.error_target = spec.error;

    std::string join_name = spec.name + "-join";
    if (total >= 2) {
        std::vector<std::string> fork_lines;
        fork_lines.push_back("<fork name='" + xml::escape_attr(spec.name) + "'>");
        for (std::size_t k = 0; k < total; ++k)
            fork_lines.push_back("    <path start='" + xml::escape_attr(spec.name) + "-" +
                                 std::to_string(k) + "'/>");
        fork_lines.push_back("</fork>");
        set.nodes.push_back({spec.name, join_lines(fork_lines, false)});
    }

    for (std::size_t k = 0; k < total; ++k) {
        std::map<std::string, std::string> assignment;
        std::size_t rem = k;
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            const AxisSpec& axis = spec.axes[a];
            assignment[axis.placeholder()] = axis.values[rem % axis.values.size()];
            rem /= axis.values.size();
        }
        std::vector<std::string> combo_body;
        combo_body.reserve(body.size());
        for (const std::string& line : body)
            combo_body.push_back(detail::substitute_axes(line, assignment));

        if (total == 1) {
            set.nodes.push_back({spec.name, detail::action_node_text(spec.name, combo_body,
                                                                     spec.node_after_join,
                                                                     spec.error)});
        } else {
            std::string node_name = spec.name + "-" + std::to_string(k);
            set.nodes.push_back({node_name, detail::action_node_text(node_name, combo_body,
                                                                     join_name, spec.error)});
        }
    }

    if (total >= 2)
        set.nodes.push_back({join_name, "<join name='" + xml::escape_attr(join_name) + "' to='" +
                                            xml::escape_attr(spec.node_after_join) + "'/>"});
    return set;
}

// Expands every ACTION and FORK_MERGE block of the document, in order.
inline std::vector<ExpandedNodeSet> expand_document(
    const TemplateDocument& doc, const ReplaceTable& table,
    const std::map<std::string, std::string>& compile_props, const IdiomRegistry& idioms) {
    std::vector<ExpandedNodeSet> out;
    for (const Block* block : doc.blocks()) {
        if (block->kind == BlockKind::Action) out.push_back(expand_action(*block, table));
        else if (block->kind == BlockKind::ForkMerge)
            out.push_back(expand_fork_merge(*block, table, compile_props, idioms));
    }
    return out;
}

}  // namespace chrum
