#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chrum/errors.hpp"
#include "chrum/xml.hpp"

namespace chrum {

enum class NodeKind { Start, Action, Fork, Join, Kill, End };

inline const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Start: return "start";
        case NodeKind::Action: return "action";
        case NodeKind::Fork: return "fork";
        case NodeKind::Join: return "join";
        case NodeKind::Kill: return "kill";
        case NodeKind::End: return "end";
    }
    return "?";
}

enum class ViolationKind {
    DanglingTarget,
    Cycle,
    UnreachableNode,
    ForkWithoutJoin,
    JoinFanInMismatch,
    MultipleStarts,
    MissingStart,
    MissingEnd,
    DuplicateName,
};

inline const char* violation_kind_name(ViolationKind k) {
    switch (k) {
        case ViolationKind::DanglingTarget: return "DanglingTarget";
        case ViolationKind::Cycle: return "Cycle";
        case ViolationKind::UnreachableNode: return "UnreachableNode";
        case ViolationKind::ForkWithoutJoin: return "ForkWithoutJoin";
        case ViolationKind::JoinFanInMismatch: return "JoinFanInMismatch";
        case ViolationKind::MultipleStarts: return "MultipleStarts";
        case ViolationKind::MissingStart: return "MissingStart";
        case ViolationKind::MissingEnd: return "MissingEnd";
        case ViolationKind::DuplicateName: return "DuplicateName";
    }
    return "?";
}

struct Violation {
    ViolationKind kind{};
    std::string node;
    std::string detail;
    std::vector<std::string> path;  // node sequence for Cycle

    std::string str() const {
        std::string out = violation_kind_name(kind);
        if (!node.empty()) out += " [" + node + "]";
        if (!detail.empty()) out += ": " + detail;
        if (!path.empty()) {
            out += " (";
            for (std::size_t i = 0; i < path.size(); ++i)
                out += (i ? " -> " : "") + path[i];
            out += ")";
        }
        return out;
    }
};

// Typed view of a workflow-app document. The anonymous <start> element is
// registered under the reserved name "start"; its transition lives in
// ok_edges like an action's.
struct WorkflowGraph {
    std::map<std::string, NodeKind> nodes;
    std::map<std::string, std::string> ok_edges;
    std::map<std::string, std::string> error_edges;
    std::map<std::string, std::vector<std::string>> fork_paths;
    std::map<std::string, std::string> join_targets;
    std::vector<Violation> build_violations;

    bool operator==(const WorkflowGraph& other) const {
        return nodes == other.nodes && ok_edges == other.ok_edges &&
               error_edges == other.error_edges && fork_paths == other.fork_paths &&
               join_targets == other.join_targets;
    }

    std::vector<std::string> action_names() const {
        std::vector<std::string> out;
        for (const auto& [name, kind] : nodes)
            if (kind == NodeKind::Action) out.push_back(name);
        return out;
    }

    std::map<std::string, int> node_counts() const {
        std::map<std::string, int> out;
        for (const auto& [name, kind] : nodes) ++out[node_kind_name(kind)];
        return out;
    }

    // Successors over every edge kind.
    std::vector<std::string> successors(const std::string& name) const {
        std::vector<std::string> out;
        if (auto it = ok_edges.find(name); it != ok_edges.end()) out.push_back(it->second);
        if (auto it = error_edges.find(name); it != error_edges.end()) out.push_back(it->second);
        if (auto it = fork_paths.find(name); it != fork_paths.end())
            out.insert(out.end(), it->second.begin(), it->second.end());
        if (auto it = join_targets.find(name); it != join_targets.end()) out.push_back(it->second);
        return out;
    }
};

inline WorkflowGraph build_graph(const xml::Node& root) {
    if (root.name != "workflow-app")
        throw Error(Errc::XmlMalformed, "root element is <" + root.name + ">, expected <workflow-app>");

    WorkflowGraph g;
    int start_count = 0;

    auto require_attr = [](const xml::Node& node, const char* attr) -> const std::string& {
        const std::string* v = node.find_attr(attr);
        if (!v)
            throw Error(Errc::XmlMalformed,
                        "<" + node.name + "> is missing the '" + std::string(attr) + "' attribute");
        return *v;
    };

    auto add_node = [&](const std::string& name, NodeKind kind) -> bool {
        auto [it, inserted] = g.nodes.emplace(name, kind);
        if (!inserted)
            g.build_violations.push_back({ViolationKind::DuplicateName, name,
                                          "name used by both a " +
                                              std::string(node_kind_name(it->second)) + " and a " +
                                              node_kind_name(kind) + " node"});
        return inserted;
    };

    for (const xml::Node& child : root.children) {
        if (child.name == "start") {
            ++start_count;
            if (start_count > 1) {
                g.build_violations.push_back(
                    {ViolationKind::MultipleStarts, "start", "workflow has more than one <start>"});
                continue;
            }
            add_node("start", NodeKind::Start);
            g.ok_edges["start"] = require_attr(child, "to");
        } else if (child.name == "end") {
            add_node(require_attr(child, "name"), NodeKind::End);
        } else if (child.name == "kill") {
            add_node(require_attr(child, "name"), NodeKind::Kill);
        } else if (child.name == "action") {
            const std::string& name = require_attr(child, "name");
            const xml::Node* ok = child.find_child("ok");
            const xml::Node* error = child.find_child("error");
            if (!ok || !error)
                throw Error(Errc::XmlMalformed,
                            "action '" + name + "' must have <ok> and <error> transitions");
            if (add_node(name, NodeKind::Action)) {
                g.ok_edges[name] = require_attr(*ok, "to");
                g.error_edges[name] = require_attr(*error, "to");
            }
        } else if (child.name == "fork") {
            const std::string& name = require_attr(child, "name");
            std::vector<std::string> paths;
            for (const xml::Node& path : child.children) {
                if (path.name != "path")
                    throw Error(Errc::XmlMalformed,
                                "fork '" + name + "' contains unexpected <" + path.name + ">");
                paths.push_back(require_attr(path, "start"));
            }
            if (add_node(name, NodeKind::Fork)) g.fork_paths[name] = std::move(paths);
        } else if (child.name == "join") {
            const std::string& name = require_attr(child, "name");
            if (add_node(name, NodeKind::Join)) g.join_targets[name] = require_attr(child, "to");
        } else {
            throw Error(Errc::XmlMalformed,
                        "unexpected element <" + child.name + "> in <workflow-app>");
        }
    }
    return g;
}

namespace detail {

// Follows ok transitions from a fork path until a join at the fork's nesting
// level; nested forks are skipped through their own exit join.
class RegionAnalysis {
public:
    explicit RegionAnalysis(const WorkflowGraph& g) : g_(g) {}

    // empty optional: some path leaves the region (end/kill/dead end) or
    // paths disagree on the join.
    std::optional<std::string> exit_join(const std::string& fork) {
        if (auto it = memo_.find(fork); it != memo_.end()) return it->second;
        memo_[fork] = std::nullopt;  // cycle guard; real cycles are reported separately
        std::optional<std::string> join;
        for (const std::string& path_start : g_.fork_paths.at(fork)) {
            std::optional<std::string> reached = walk_to_join(path_start);
            if (!reached || (join && *join != *reached)) {
                memo_[fork] = std::nullopt;
                return std::nullopt;
            }
            join = reached;
        }
        memo_[fork] = join;
        return join;
    }

private:
    std::optional<std::string> walk_to_join(std::string node) {
        std::set<std::string> seen;
        for (;;) {
            if (!seen.insert(node).second) return std::nullopt;
            auto it = g_.nodes.find(node);
            if (it == g_.nodes.end()) return std::nullopt;
            switch (it->second) {
                case NodeKind::Join:
                    return node;
                case NodeKind::Action:
                    node = g_.ok_edges.at(node);
                    break;
                case NodeKind::Fork: {
                    std::optional<std::string> inner = exit_join(node);
                    if (!inner) return std::nullopt;
                    node = g_.join_targets.at(*inner);
                    break;
                }
                default:
                    return std::nullopt;  // start/end/kill: left the region
            }
        }
    }

    const WorkflowGraph& g_;
    std::map<std::string, std::optional<std::string>> memo_;
};

}  // namespace detail

// Returns every violation found; an empty report means the graph is a
// well-formed fork/join DAG.
inline std::vector<Violation> validate_graph(const WorkflowGraph& g) {
    std::vector<Violation> report = g.build_violations;

    bool has_start = g.nodes.count("start") && g.nodes.at("start") == NodeKind::Start;
    if (!has_start) report.push_back({ViolationKind::MissingStart, "", "workflow has no <start>"});
    bool has_end = false;
    for (const auto& [name, kind] : g.nodes)
        if (kind == NodeKind::End) has_end = true;
    if (!has_end) report.push_back({ViolationKind::MissingEnd, "", "workflow has no <end>"});

    bool dangling = false;
    auto check_target = [&](const std::string& from, const std::string& to, const char* via) {
        if (!g.nodes.count(to)) {
            dangling = true;
            report.push_back({ViolationKind::DanglingTarget, from,
                              std::string(via) + " transition targets missing node '" + to + "'"});
        }
    };
    for (const auto& [from, to] : g.ok_edges) check_target(from, to, "ok");
    for (const auto& [from, to] : g.error_edges) check_target(from, to, "error");
    for (const auto& [from, targets] : g.fork_paths)
        for (const auto& to : targets) check_target(from, to, "path");
    for (const auto& [from, to] : g.join_targets) check_target(from, to, "join");

    // cycle detection: DFS over all edges, one report per back edge
    bool cyclic = false;
    {
        std::map<std::string, int> color;  // 0 white, 1 grey, 2 black
        std::vector<std::string> stack;
        auto dfs = [&](auto&& self, const std::string& node) -> void {
            color[node] = 1;
            stack.push_back(node);
            for (const std::string& next : g.successors(node)) {
                if (!g.nodes.count(next)) continue;
                int c = color[next];
                if (c == 0) {
                    self(self, next);
                } else if (c == 1) {
                    cyclic = true;
                    auto at = std::find(stack.begin(), stack.end(), next);
                    std::vector<std::string> path(at, stack.end());
                    path.push_back(next);
                    report.push_back({ViolationKind::Cycle, next, "", std::move(path)});
                }
            }
            stack.pop_back();
            color[node] = 2;
        };
        for (const auto& [name, kind] : g.nodes)
            if (color[name] == 0) dfs(dfs, name);
    }

    // reachability from start over all edges
    if (has_start) {
        std::set<std::string> reached;
        std::vector<std::string> frontier{"start"};
        reached.insert("start");
        while (!frontier.empty()) {
            std::string node = frontier.back();
            frontier.pop_back();
            for (const std::string& next : g.successors(node))
                if (g.nodes.count(next) && reached.insert(next).second) frontier.push_back(next);
        }
        for (const auto& [name, kind] : g.nodes)
            if (!reached.count(name))
                report.push_back({ViolationKind::UnreachableNode, name,
                                  "not reachable from <start>"});
    }

    // fork/join pairing; meaningful only once targets resolve and no cycles
    if (!dangling && !cyclic) {
        detail::RegionAnalysis regions(g);
        std::map<std::string, std::string> join_owner;  // join -> fork
        for (const auto& [fork, paths] : g.fork_paths) {
            std::optional<std::string> join = regions.exit_join(fork);
            if (!join) {
                report.push_back({ViolationKind::ForkWithoutJoin, fork,
                                  "paths do not converge at a single join"});
            } else {
                join_owner.emplace(*join, fork);
            }
        }
        std::map<std::string, int> fan_in;
        for (const auto& [from, to] : g.ok_edges)
            if (g.nodes.count(to) && g.nodes.at(to) == NodeKind::Join) ++fan_in[to];
        for (const auto& [from, to] : g.error_edges)
            if (g.nodes.count(to) && g.nodes.at(to) == NodeKind::Join) ++fan_in[to];
        for (const auto& [from, targets] : g.fork_paths)
            for (const auto& to : targets)
                if (g.nodes.count(to) && g.nodes.at(to) == NodeKind::Join) ++fan_in[to];
        for (const auto& [from, to] : g.join_targets)
            if (g.nodes.count(to) && g.nodes.at(to) == NodeKind::Join) ++fan_in[to];
        for (const auto& [name, kind] : g.nodes) {
            if (kind != NodeKind::Join) continue;
            auto owner = join_owner.find(name);
            if (owner == join_owner.end()) {
                report.push_back(
                    {ViolationKind::JoinFanInMismatch, name, "join is not paired with any fork"});
            } else {
                int expected = static_cast<int>(g.fork_paths.at(owner->second).size());
                int actual = fan_in[name];
                if (actual != expected)
                    report.push_back({ViolationKind::JoinFanInMismatch, name,
                                      "fan-in " + std::to_string(actual) + " != fork '" +
                                          owner->second + "' fan-out " + std::to_string(expected)});
            }
        }
    }
    return report;
}

struct TraceEvent {
    enum class Kind { Fork, Action, Join } kind{};
    std::string name;

    bool operator==(const TraceEvent&) const = default;

    std::string str() const {
        switch (kind) {
            case Kind::Fork: return "fork(" + name + ")";
            case Kind::Join: return "join(" + name + ")";
            case Kind::Action: return name;
        }
        return name;
    }
};

// Success-path execution order: a topological walk over ok transitions with
// ties broken by node name. Requires a graph that validates cleanly.
inline std::vector<TraceEvent> dry_run(const WorkflowGraph& g) {
    if (!validate_graph(g).empty())
        throw std::invalid_argument("dry_run requires a graph with an empty validation report");

    auto ok_successors = [&](const std::string& name) -> std::vector<std::string> {
        if (auto it = g.fork_paths.find(name); it != g.fork_paths.end()) return it->second;
        if (auto it = g.ok_edges.find(name); it != g.ok_edges.end()) return {it->second};
        if (auto it = g.join_targets.find(name); it != g.join_targets.end()) return {it->second};
        return {};
    };

    // restrict to nodes on the success path
    std::set<std::string> active;
    {
        std::vector<std::string> frontier{"start"};
        active.insert("start");
        while (!frontier.empty()) {
            std::string node = frontier.back();
            frontier.pop_back();
            for (const std::string& next : ok_successors(node))
                if (active.insert(next).second) frontier.push_back(next);
        }
    }

    std::map<std::string, int> pending;  // remaining unexecuted predecessors
    for (const std::string& node : active)
        for (const std::string& next : ok_successors(node)) ++pending[next];

    std::set<std::string> ready;  // ordered: deterministic tie-break by name
    for (const std::string& node : active)
        if (pending[node] == 0) ready.insert(node);

    std::vector<TraceEvent> trace;
    while (!ready.empty()) {
        std::string node = *ready.begin();
        ready.erase(ready.begin());
        switch (g.nodes.at(node)) {
            case NodeKind::Action: trace.push_back({TraceEvent::Kind::Action, node}); break;
            case NodeKind::Fork: trace.push_back({TraceEvent::Kind::Fork, node}); break;
            case NodeKind::Join: trace.push_back({TraceEvent::Kind::Join, node}); break;
            default: break;
        }
        for (const std::string& next : ok_successors(node))
            if (--pending[next] == 0) ready.insert(next);
    }
    return trace;
}

}  // namespace chrum
