#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chrum/config.hpp"
#include "chrum/emitter.hpp"
#include "chrum/errors.hpp"
#include "chrum/properties.hpp"
#include "chrum/storage.hpp"

namespace chrum {

// One choice of value per multivalued key. The label names the combination's
// directories and its PARAMETER_COMBINATION stamp.
struct Combination {
    std::vector<std::pair<std::string, std::string>> assignments;  // declared order
    std::string label;
};

namespace detail {

inline std::string sanitize_label_part(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        bool safe = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
        out += safe ? c : '-';
    }
    return out;
}

}  // namespace detail

// Cartesian product of the multivalued keys, row-major in declaration order
// (first key varies slowest). No multivalued keys: one combination, "default".
inline std::vector<Combination> enumerate_combinations(const PropertySet& props) {
    std::vector<const Property*> multi = props.multi_entries();
    std::size_t total = 1;
    for (const Property* p : multi) total *= p->values.size();

    std::vector<Combination> out;
    out.reserve(total);
    std::set<std::string> seen_labels;
    for (std::size_t k = 0; k < total; ++k) {
        Combination combo;
        std::size_t rem = k;
        combo.assignments.resize(multi.size());
        for (std::size_t a = multi.size(); a-- > 0;) {
            const Property* p = multi[a];
            combo.assignments[a] = {p->key, p->values[rem % p->values.size()]};
            rem /= p->values.size();
        }
        if (combo.assignments.empty()) {
            combo.label = "default";
        } else {
            for (const auto& [key, value] : combo.assignments) {
                if (!combo.label.empty()) combo.label += '_';
                combo.label +=
                    detail::sanitize_label_part(key) + "=" + detail::sanitize_label_part(value);
            }
        }
        // sanitization can alias distinct values; labels must stay unique
        if (!seen_labels.insert(combo.label).second) {
            int suffix = 2;
            while (!seen_labels.insert(combo.label + "." + std::to_string(suffix)).second) ++suffix;
            combo.label += "." + std::to_string(suffix);
        }
        out.push_back(std::move(combo));
    }
    return out;
}

// Single-valued view of one combination: singles plus the flattened choices.
inline std::map<std::string, std::string> flattened_view(const PropertySet& props,
                                                         const Combination& combo) {
    std::map<std::string, std::string> out = props.singles();
    for (const auto& [key, value] : combo.assignments) out[key] = value;
    return out;
}

struct ComboPaths {
    std::filesystem::path local_dir;
    std::filesystem::path storage_dir;
    std::filesystem::path properties_file;
};

// Directory layout contract:
//   LOCAL/PROJECT/COMPILATION_TIME/PARAMETER_COMBINATION
//   STORAGE/PROJECT/COMPILATION_TIME/PARAMETER_COMBINATION
struct ExperimentPlan {
    ChrumConfig config;
    std::string compilation_time;
    std::vector<Combination> combinations;
    std::filesystem::path local_root;
    std::vector<ComboPaths> paths;  // parallel to combinations
};

inline ExperimentPlan make_plan(ChrumConfig config, const PropertySet& props,
                                std::filesystem::path local_root, std::string compilation_time) {
    ExperimentPlan plan;
    plan.config = std::move(config);
    plan.compilation_time = std::move(compilation_time);
    plan.combinations = enumerate_combinations(props);
    plan.local_root = std::move(local_root);
    for (const Combination& combo : plan.combinations) {
        ComboPaths paths;
        paths.local_dir =
            plan.local_root / plan.config.project / plan.compilation_time / combo.label;
        paths.storage_dir = std::filesystem::path(plan.config.storage_root) / plan.config.project /
                            plan.compilation_time / combo.label;
        paths.properties_file = paths.local_dir / "job.properties";
        plan.paths.push_back(std::move(paths));
    }
    return plan;
}

// Flattened per-combination properties: every entry in declaration order with
// multivalued keys pinned to this combination's choice, stamps last.
inline std::string combination_properties_text(const ExperimentPlan& plan,
                                               const Combination& combo,
                                               const PropertySet& props) {
    std::string out;
    for (const Property& entry : props.entries) {
        const std::string* value = &entry.values.front();
        if (entry.multi) {
            for (const auto& [key, chosen] : combo.assignments)
                if (key == entry.key) value = &chosen;
        }
        out += entry.key + "=" + *value + "\n";
    }
    out += "COMPILATION_TIME=" + plan.compilation_time + "\n";
    out += "PARAMETER_COMBINATION=" + combo.label + "\n";
    return out;
}

inline void write_combination_properties(const ExperimentPlan& plan, std::size_t index,
                                         const PropertySet& props, Storage& storage) {
    const ComboPaths& paths = plan.paths.at(index);
    storage.write_file(paths.properties_file,
                       combination_properties_text(plan, plan.combinations[index], props));
}

struct MaterializationReport {
    int directories = 0;
    int files = 0;
};

// Materializes one combination: local dir (properties + submission manifest),
// storage dir (workflow.xml, configured folders, results/).
inline MaterializationReport materialize_combination(const ExperimentPlan& plan, std::size_t index,
                                                     const EmittedWorkflow& workflow,
                                                     const PropertySet& props, Storage& storage) {
    const ComboPaths& paths = plan.paths.at(index);
    const Combination& combo = plan.combinations[index];
    MaterializationReport report;

    storage.make_dirs(paths.local_dir);
    storage.make_dirs(paths.storage_dir);
    report.directories += 2;

    write_combination_properties(plan, index, props, storage);
    ++report.files;

    nlohmann::json manifest{
        {"project", plan.config.project},
        {"combination", combo.label},
        {"compilation_time", plan.compilation_time},
        {"server", plan.config.server_address},
        {"port", plan.config.server_port},
        {"application_path", paths.storage_dir.string()},
        {"properties_file", paths.properties_file.string()},
        {"workflow", "workflow.xml"},
    };
    storage.write_file(paths.local_dir / "submit.json", manifest.dump(2) + "\n");
    ++report.files;

    storage.write_file(paths.storage_dir / "workflow.xml", workflow.xml_text);
    ++report.files;

    for (const FolderMapping& folder : plan.config.folders) {
        if (!storage.exists(folder.source))
            throw Error(Errc::SourceMissing,
                        "folder '" + folder.name + "' source path '" + folder.source +
                            "' does not exist");
        storage.make_dirs(paths.storage_dir / folder.name);
        ++report.directories;
        report.files += storage.copy_in(folder.source, paths.storage_dir / folder.name);
    }

    storage.make_dirs(paths.storage_dir / "results");
    ++report.directories;
    return report;
}

inline MaterializationReport materialize(const ExperimentPlan& plan,
                                         const std::vector<EmittedWorkflow>& workflows,
                                         const PropertySet& props, Storage& storage) {
    if (workflows.size() != plan.combinations.size())
        throw std::invalid_argument("materialize: one workflow per combination required");
    for (const EmittedWorkflow& wf : workflows)
        if (!validate_graph(wf.graph).empty())
            throw std::invalid_argument("materialize: workflow failed graph validation");
    MaterializationReport total;
    for (std::size_t i = 0; i < plan.combinations.size(); ++i) {
        MaterializationReport r = materialize_combination(plan, i, workflows[i], props, storage);
        total.directories += r.directories;
        total.files += r.files;
    }
    return total;
}

}  // namespace chrum
