#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "chrum/errors.hpp"
#include "chrum/strings.hpp"

namespace chrum {

// One properties-file entry in declaration order. `key=value` lines are
// single-valued; `@key@ v1 v2 ...` lines declare a sweep axis.
struct Property {
    std::string key;
    std::vector<std::string> values;
    bool multi = false;
    int line = 0;
};

struct PropertySet {
    std::vector<Property> entries;

    const Property* find(std::string_view key) const {
        for (const auto& e : entries)
            if (e.key == key) return &e;
        return nullptr;
    }

    const std::string* find_single(std::string_view key) const {
        const Property* p = find(key);
        return p && !p->multi ? &p->values.front() : nullptr;
    }

    std::vector<const Property*> multi_entries() const {
        std::vector<const Property*> out;
        for (const auto& e : entries)
            if (e.multi) out.push_back(&e);
        return out;
    }

    // Single-valued view; multivalued keys are not included.
    std::map<std::string, std::string> singles() const {
        std::map<std::string, std::string> out;
        for (const auto& e : entries)
            if (!e.multi) out[e.key] = e.values.front();
        return out;
    }
};

inline PropertySet parse_properties(std::string_view text,
                                    const std::string& source_name = "properties") {
    PropertySet props;
    SplitLines split = split_lines(text);
    for (std::size_t i = 0; i < split.lines.size(); ++i) {
        int line_no = static_cast<int>(i) + 1;
        std::string_view line = trim(split.lines[i]);
        if (line.empty() || line.front() == '#') continue;

        Property entry;
        entry.line = line_no;
        if (line.front() == '@') {
            std::vector<std::string> tokens = split_whitespace(line);
            if (!is_placeholder_token(tokens[0]))
                throw Error(Errc::BadLine, "bad multivalued key '" + tokens[0] + "'", source_name,
                            line_no);
            entry.key = tokens[0].substr(1, tokens[0].size() - 2);
            entry.multi = true;
            entry.values.assign(tokens.begin() + 1, tokens.end());
            if (entry.values.empty())
                throw Error(Errc::EmptyMulti, "multivalued key '" + entry.key + "' has no values",
                            source_name, line_no);
        } else {
            std::size_t eq = line.find('=');
            if (eq == std::string_view::npos)
                throw Error(Errc::BadLine,
                            "expected key=value or @key@ v1 v2 ...: '" + std::string(line) + "'",
                            source_name, line_no);
            entry.key = std::string(trim(line.substr(0, eq)));
            entry.values.push_back(std::string(trim(line.substr(eq + 1))));
            if (entry.key.empty())
                throw Error(Errc::BadLine, "empty property key", source_name, line_no);
        }

        if (const Property* existing = props.find(entry.key)) {
            Errc code = existing->multi == entry.multi ? Errc::DuplicateKey : Errc::KeyInBothForms;
            throw Error(code,
                        "key '" + entry.key + "' already defined at line " +
                            std::to_string(existing->line),
                        source_name, line_no);
        }
        props.entries.push_back(std::move(entry));
    }
    return props;
}

// Reads back a flattened (single-valued) properties file. Duplicate keys keep
// the last value, Java-properties style, so repeated EXECUTION_TIME history
// lines collapse to the most recent run.
inline std::vector<std::pair<std::string, std::string>> parse_flat_properties(
    std::string_view text) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const std::string& raw : split_lines(text).lines) {
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) continue;
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        bool replaced = false;
        for (auto& [k, v] : out)
            if (k == key) {
                v = value;
                replaced = true;
                break;
            }
        if (!replaced) out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

}  // namespace chrum
