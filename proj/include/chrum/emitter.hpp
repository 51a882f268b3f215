#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "chrum/errors.hpp"
#include "chrum/expand.hpp"
#include "chrum/strings.hpp"
#include "chrum/template_parser.hpp"
#include "chrum/workflow_graph.hpp"
#include "chrum/xml.hpp"

namespace chrum {

struct WorkflowStats {
    int total_lines = 0;
    int non_blank_lines = 0;
    std::map<std::string, int> node_counts;
};

struct EmittedWorkflow {
    std::string xml_text;
    WorkflowGraph graph;
    WorkflowStats stats;
};

// Assembles the final workflow document: passthrough text verbatim, each
// ACTION/FORK_MERGE block replaced by its expanded nodes (fork + actions +
// join contiguously), REPLACE blocks dropped. Generated XML is re-indented at
// four spaces per depth, where depth is tracked through the passthrough text.
// The result must parse as a single workflow-app document.
inline EmittedWorkflow emit_workflow(const TemplateDocument& doc,
                                     const std::vector<ExpandedNodeSet>& expanded) {
    std::vector<std::string> lines;
    int depth = 0;
    std::size_t next_set = 0;

    for (const Segment& segment : doc.segments) {
        if (const Passthrough* p = std::get_if<Passthrough>(&segment)) {
            for (const std::string& line : p->lines) {
                lines.push_back(line);
                depth = xml::advance_depth(line, depth);
            }
            continue;
        }
        const Block& block = std::get<Block>(segment);
        if (block.kind == BlockKind::Replace) continue;
        if (next_set >= expanded.size())
            throw std::invalid_argument("emit_workflow: fewer expanded node sets than blocks");
        const ExpandedNodeSet& set = expanded[next_set++];
        for (const ExpandedNode& node : set.nodes) {
            xml::Node tree;
            try {
                tree = xml::parse(node.xml_text, doc.source_name);
            } catch (const Error& e) {
                throw Error(Errc::XmlMalformed,
                            "node '" + node.name + "' (block at line " +
                                std::to_string(block.start_line) + "): " + e.what(),
                            doc.source_name, block.start_line);
            }
            xml::write_lines(tree, lines, depth);
        }
    }
    if (next_set != expanded.size())
        throw std::invalid_argument("emit_workflow: more expanded node sets than blocks");

    EmittedWorkflow out;
    out.xml_text = join_lines(lines, true);
    xml::Node root = xml::parse(out.xml_text, doc.source_name);
    if (root.name != "workflow-app")
        throw Error(Errc::XmlMalformed,
                    "root element is <" + root.name + ">, expected <workflow-app>");
    out.graph = build_graph(root);
    out.stats.total_lines = static_cast<int>(lines.size());
    out.stats.non_blank_lines = count_non_blank(lines);
    out.stats.node_counts = out.graph.node_counts();
    return out;
}

}  // namespace chrum
