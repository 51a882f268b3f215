#include <catch2/catch_amalgamated.hpp>

#include <chrum/emitter.hpp>

#include "test_util.hpp"

using namespace chrum;

namespace {

std::string wrap_in_skeleton(const std::string& blocks, const std::string& first_node) {
    return "<workflow-app xmlns='uri:oozie:workflow:0.2' name='w'>\n"
           "    <start to='" + first_node + "'/>\n" +
           blocks +
           "    <kill name='kill'>\n"
           "        <message>failed</message>\n"
           "    </kill>\n"
           "    <end name='end'/>\n"
           "</workflow-app>\n";
}

EmittedWorkflow emit_from(const std::string& text,
                          const std::map<std::string, std::string>& props = {}) {
    TemplateDocument doc = parse_template(text, "t");
    ReplaceTable table = build_replace_table(doc);
    return emit_workflow(doc, expand_document(doc, table, props, IdiomRegistry::with_builtins()));
}

}  // namespace

TEST_CASE("emit reproduces the classic action inside a skeleton") {
    std::string closing =
        "# BEG:ACTION name=createDocClassif_02 ok=end error=kill\n"
        "    <fs><mkdir path='${out}'/></fs>\n"
        "# END:ACTION\n";
    EmittedWorkflow wf = emit_from(
        wrap_in_skeleton(std::string(chrum_test::kActionFixtureTemplate) + closing,
                         "docs2neigh_01"));

    CHECK(validate_graph(wf.graph).empty());
    xml::Node root = xml::parse(wf.xml_text);
    const xml::Node* action = nullptr;
    for (const auto& child : root.children)
        if (child.name == "action" && *child.find_attr("name") == "docs2neigh_01") action = &child;
    REQUIRE(action);
    CHECK(xml::equal_ignoring_whitespace(*action, xml::parse(chrum_test::kExpectedActionXml)));

    // element sequence of the pig payload, as in the reference action
    const xml::Node* pig = action->find_child("pig");
    REQUIRE(pig);
    std::vector<std::string> sequence;
    for (const auto& child : pig->children) sequence.push_back(child.name);
    CHECK(sequence == std::vector<std::string>{"job-tracker", "name-node", "prepare",
                                               "configuration", "script", "param", "param",
                                               "param", "file"});
}

TEST_CASE("emit itself does not require a complete graph") {
    // a minimal skeleton whose action points at a node defined elsewhere:
    // emission succeeds, the dangling target is validate_graph's business
    std::string text =
        "<workflow-app name='w'>\n"
        "    <start to='a'/>\n"
        "# BEG:ACTION name=a ok=defined_later error=kill\n"
        "    <fs/>\n"
        "# END:ACTION\n"
        "    <kill name='kill'><message>m</message></kill>\n"
        "    <end name='end'/>\n"
        "</workflow-app>\n";
    EmittedWorkflow wf = emit_from(text);
    CHECK(wf.graph.ok_edges.at("a") == "defined_later");
    CHECK_FALSE(validate_graph(wf.graph).empty());
}

TEST_CASE("document with zero blocks passes through with validation only") {
    std::string text = wrap_in_skeleton("", "end");
    EmittedWorkflow wf = emit_from(text);
    CHECK(wf.xml_text == text);
    CHECK(wf.graph.nodes.size() == 3);
}

TEST_CASE("unclosed element in an expanded node is XmlMalformed") {
    std::string text = wrap_in_skeleton(
        "# BEG:ACTION name=a ok=end error=kill\n"
        "    <pig>\n"
        "# END:ACTION\n",
        "a");
    try {
        emit_from(text);
        FAIL("expected XmlMalformed");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::XmlMalformed);
    }
}

TEST_CASE("broken passthrough XML is XmlMalformed") {
    CHECK_THROWS_AS(emit_from("<workflow-app>\n<start to='end'/>\n"), Error);
}

TEST_CASE("generated nodes are indented to their document position") {
    std::string text = wrap_in_skeleton(
        "# BEG:ACTION name=a ok=end error=kill\n"
        "    <fs><mkdir path='/x'/></fs>\n"
        "# END:ACTION\n",
        "a");
    EmittedWorkflow wf = emit_from(text);
    CHECK(wf.xml_text.find("\n    <action name='a'>\n") != std::string::npos);
    CHECK(wf.xml_text.find("\n        <fs>\n") != std::string::npos);
    CHECK(wf.xml_text.find("\n        <ok to='end'/>\n") != std::string::npos);
}

TEST_CASE("fork, actions and join are emitted contiguously at the block position") {
    std::string text = wrap_in_skeleton(
        "# BEG:FORK_MERGE name=f node_after_join=end error=kill\n"
        "@a@ 1 2\n"
        "    <fs><mkdir path='/@a@'/></fs>\n"
        "# END:FORK_MERGE\n",
        "f");
    EmittedWorkflow wf = emit_from(text);
    CHECK(validate_graph(wf.graph).empty());
    std::size_t fork_pos = wf.xml_text.find("<fork name='f'>");
    std::size_t a0_pos = wf.xml_text.find("<action name='f-0'>");
    std::size_t a1_pos = wf.xml_text.find("<action name='f-1'>");
    std::size_t join_pos = wf.xml_text.find("<join name='f-join' to='end'/>");
    REQUIRE(fork_pos != std::string::npos);
    CHECK(fork_pos < a0_pos);
    CHECK(a0_pos < a1_pos);
    CHECK(a1_pos < join_pos);
    CHECK(join_pos < wf.xml_text.find("<kill"));
}

TEST_CASE("stats count lines and nodes") {
    std::string text = wrap_in_skeleton(
        "# BEG:ACTION name=a ok=end error=kill\n"
        "    <fs><mkdir path='/x'/></fs>\n"
        "# END:ACTION\n",
        "a");
    EmittedWorkflow wf = emit_from(text);
    CHECK(wf.stats.node_counts.at("action") == 1);
    CHECK(wf.stats.node_counts.at("kill") == 1);
    CHECK(wf.stats.non_blank_lines > 0);
    CHECK(wf.stats.total_lines >= wf.stats.non_blank_lines);
}

TEST_CASE("emitted XML re-parses to an isomorphic graph") {
    TemplateDocument doc = parse_template(
        chrum_test::read_file(chrum_test::samples_dir() / "doc-classification" / "workflow.chrum"),
        "doc-classification");
    ReplaceTable table = build_replace_table(doc);
    std::map<std::string, std::string> props{{"dc_m_int_folds", "3"}};
    EmittedWorkflow wf =
        emit_workflow(doc, expand_document(doc, table, props, IdiomRegistry::with_builtins()));

    CHECK(validate_graph(wf.graph).empty());
    WorkflowGraph reparsed = build_graph(xml::parse(wf.xml_text));
    CHECK(reparsed == wf.graph);
    CHECK(wf.graph.fork_paths.at("split_03").size() == 8);
}

TEST_CASE("expanded sets must match the document's blocks") {
    TemplateDocument doc = parse_template(
        wrap_in_skeleton("# BEG:ACTION name=a ok=end error=kill\n<x/>\n# END:ACTION\n", "a"), "t");
    CHECK_THROWS_AS(emit_workflow(doc, {}), std::invalid_argument);
}
