#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "chrum/errors.hpp"
#include "chrum/strings.hpp"
#include "chrum/template_parser.hpp"

namespace chrum {

struct ReplaceEntry {
    std::vector<std::string> body;
    int line = 0;  // BEG marker line of the defining block, 0 for builtins
};

// Named macro bodies keyed by full placeholder spelling ("@WF-1@").
// User entries shadow builtins of the same name.
struct ReplaceTable {
    std::map<std::string, ReplaceEntry> entries;
    std::map<std::string, ReplaceEntry> builtins;

    const ReplaceEntry* find(const std::string& name) const {
        if (auto it = entries.find(name); it != entries.end()) return &it->second;
        if (auto it = builtins.find(name); it != builtins.end()) return &it->second;
        return nullptr;
    }

    static std::map<std::string, ReplaceEntry> default_builtins() {
        return {
            {"@PIG_START@",
             {{"<pig>",
               "    <job-tracker>${jobTracker}</job-tracker>",
               "    <name-node>${nameNode}</name-node>"},
              0}},
            {"@PIG_END@", {{"</pig>"}, 0}},
        };
    }
};

inline ReplaceTable build_replace_table(const TemplateDocument& doc) {
    ReplaceTable table;
    table.builtins = ReplaceTable::default_builtins();
    for (const Block* block : doc.blocks()) {
        if (block->kind != BlockKind::Replace) continue;
        const std::string& name = block->replace_target();
        if (auto it = table.entries.find(name); it != table.entries.end())
            throw Error(Errc::DuplicateReplace,
                        "placeholder '" + name + "' defined at line " +
                            std::to_string(it->second.line) + " and again at line " +
                            std::to_string(block->start_line),
                        doc.source_name, block->start_line);
        table.entries[name] = ReplaceEntry{block->body, block->start_line};
    }
    return table;
}

namespace detail {

class Resolver {
public:
    Resolver(const ReplaceTable& table, const std::set<std::string>& passthrough_names,
             std::string location)
        : table_(table), passthrough_(passthrough_names), location_(std::move(location)) {}

    std::vector<std::string> resolve(const std::vector<std::string>& lines) {
        std::vector<std::string> out;
        for (const std::string& line : lines) resolve_line(line, out);
        return out;
    }

private:
    // Splices each placeholder's fully resolved body into the line.
    // Continuation lines inherit the original line's leading whitespace, so
    // nested bodies indent where their reference sat.
    void resolve_line(const std::string& line, std::vector<std::string>& out) {
        std::string indent(leading_whitespace(line));
        std::string current;
        std::size_t pos = 0;
        while (auto ref = find_placeholder(line, pos)) {
            current += line.substr(pos, ref->begin - pos);
            pos = ref->end;
            if (const ReplaceEntry* entry = table_.find(ref->name)) {
                const std::vector<std::string>& body = resolve_entry(ref->name, *entry);
                if (body.empty()) continue;
                current += body.front();
                for (std::size_t i = 1; i < body.size(); ++i) {
                    out.push_back(std::move(current));
                    current = indent + body[i];
                }
            } else if (passthrough_.count(ref->name)) {
                current += ref->name;  // a declared axis; substituted later
            } else {
                throw Error(Errc::UnknownPlaceholder,
                            "placeholder '" + ref->name + "' is not defined" +
                                (location_.empty() ? "" : " (in " + location_ + ")"));
            }
        }
        current += line.substr(pos);
        out.push_back(std::move(current));
    }

    const std::vector<std::string>& resolve_entry(const std::string& name,
                                                  const ReplaceEntry& entry) {
        if (auto it = memo_.find(name); it != memo_.end()) return it->second;
        auto in_progress = std::find(stack_.begin(), stack_.end(), name);
        if (in_progress != stack_.end()) {
            std::vector<std::string> cycle(in_progress, stack_.end());
            cycle.push_back(name);
            std::string path;
            for (const auto& n : cycle) path += (path.empty() ? "" : " -> ") + n;
            throw Error(Errc::SubstitutionCycle, "substitution cycle: " + path, std::move(cycle));
        }
        stack_.push_back(name);
        std::vector<std::string> resolved;
        for (const std::string& line : entry.body) resolve_line(line, resolved);
        stack_.pop_back();
        return memo_.emplace(name, std::move(resolved)).first->second;
    }

    const ReplaceTable& table_;
    const std::set<std::string>& passthrough_;
    std::string location_;
    std::map<std::string, std::vector<std::string>> memo_;
    std::vector<std::string> stack_;
};

}  // namespace detail

// Recursively substitutes every defined placeholder. Names in
// `passthrough_names` (FORK_MERGE axis declarations) stay verbatim; any other
// undefined placeholder is an error.
inline std::vector<std::string> resolve_text(const std::vector<std::string>& lines,
                                             const ReplaceTable& table,
                                             const std::set<std::string>& passthrough_names = {},
                                             const std::string& location = {}) {
    return detail::Resolver(table, passthrough_names, location).resolve(lines);
}

}  // namespace chrum
