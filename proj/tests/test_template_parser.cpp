#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <tuple>

#include <chrum/template_parser.hpp>

#include "test_util.hpp"

using namespace chrum;

namespace {

const char* kActionBlock =
    "# BEG:ACTION name=docs2neigh_01 ok=createDocClassif_02 error=kill\n"
    "    @PIG_START@\n"
    "        @PR-1@\n"
    "        @CONFIG-1@\n"
    "        @WF-1@\n"
    "    @PIG_END@\n"
    "# END:ACTION\n";

Errc parse_error(const std::string& text) {
    try {
        parse_template(text, "t");
    } catch (const Error& e) {
        return e.code();
    }
    throw std::logic_error("expected a parse error");
}

}  // namespace

TEST_CASE("parses the classic ACTION block") {
    TemplateDocument doc = parse_template(kActionBlock, "t");
    REQUIRE(doc.segments.size() == 1);
    const Block& block = std::get<Block>(doc.segments[0]);
    CHECK(block.kind == BlockKind::Action);
    CHECK(block.attr("name") == "docs2neigh_01");
    CHECK(block.attr("ok") == "createDocClassif_02");
    CHECK(block.attr("error") == "kill");
    CHECK(block.body.size() == 5);
    CHECK(block.start_line == 1);
    CHECK(block.end_line == 7);
}

TEST_CASE("parses REPLACE and FORK_MERGE markers") {
    TemplateDocument doc = parse_template(
        "# BEG:REPLACE @WF-1@\n"
        "<x/>\n"
        "# END:REPLACE\n" +
            std::string(chrum_test::kForkMergeFixtureBlock),
        "t");
    auto blocks = doc.blocks();
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0]->kind == BlockKind::Replace);
    CHECK(blocks[0]->replace_target() == "@WF-1@");
    CHECK(blocks[1]->kind == BlockKind::ForkMerge);
    CHECK(blocks[1]->attr("node_after_join") == "enrich_04");
    CHECK(blocks[1]->body.size() == 10);
}

TEST_CASE("empty input yields zero segments") {
    TemplateDocument doc = parse_template("", "t");
    CHECK(doc.segments.empty());
    CHECK(doc.serialize().empty());
}

TEST_CASE("passthrough is interleaved and verbatim") {
    std::string text = std::string("<workflow-app>\n") + kActionBlock + "</workflow-app>\n";
    TemplateDocument doc = parse_template(text, "t");
    REQUIRE(doc.segments.size() == 3);
    CHECK(std::get<Passthrough>(doc.segments[0]).lines ==
          std::vector<std::string>{"<workflow-app>"});
    CHECK(std::get<Block>(doc.segments[1]).kind == BlockKind::Action);
    CHECK(doc.serialize() == text);
}

TEST_CASE("marker whitespace is tolerated, comment char required") {
    TemplateDocument doc = parse_template(
        "  #  BEG:ACTION name=a ok=b error=kill\n"
        "body\n"
        "\t# END:ACTION\n",
        "t");
    REQUIRE(doc.blocks().size() == 1);
    // ordinary comments and BEG-like words are passthrough
    TemplateDocument other = parse_template("# BEGIN of file\n# just a comment\n", "t");
    CHECK(other.blocks().empty());
}

TEST_CASE("parse errors carry codes and line numbers") {
    CHECK(parse_error("# BEG:ACTION name=a ok=b error=kill\n") == Errc::UnterminatedBlock);
    CHECK(parse_error("# END:ACTION\n") == Errc::UnexpectedEnd);
    CHECK(parse_error("# BEG:REPLACE @A@\n# BEG:REPLACE @B@\n") == Errc::NestedBlock);
    CHECK(parse_error("# BEG:ACTION name=a ok=b error=kill\n# END:REPLACE\n") ==
          Errc::UnexpectedEnd);
    CHECK(parse_error("# BEG:WHILE cond=x\n# END:WHILE\n") == Errc::UnknownBlockKind);

    try {
        parse_template("<x/>\n# BEG:ACTION name=a ok=b error=kill\n", "wf.chrum");
        FAIL("expected UnterminatedBlock");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnterminatedBlock);
        CHECK(e.source() == "wf.chrum");
        CHECK(e.line() == 2);
    }
}

TEST_CASE("attribute sets are enforced per kind") {
    CHECK(parse_error("# BEG:ACTION name=a ok=b\n# END:ACTION\n") == Errc::BadAttributes);
    CHECK(parse_error("# BEG:ACTION name=a ok=b error=kill extra=1\n# END:ACTION\n") ==
          Errc::BadAttributes);
    CHECK(parse_error("# BEG:ACTION name=a name=b ok=c error=kill\n# END:ACTION\n") ==
          Errc::BadAttributes);
    CHECK(parse_error("# BEG:ACTION garbage\n# END:ACTION\n") == Errc::BadAttributes);
    CHECK(parse_error("# BEG:ACTION name= ok=b error=kill\n# END:ACTION\n") ==
          Errc::BadAttributes);
    CHECK(parse_error("# BEG:FORK_MERGE name=f ok=b error=kill\n# END:FORK_MERGE\n") ==
          Errc::BadAttributes);
    CHECK(parse_error("# BEG:REPLACE @A@ @B@\n# END:REPLACE\n") == Errc::BadAttributes);
    CHECK(parse_error("# BEG:REPLACE WF-1\n# END:REPLACE\n") == Errc::BadAttributes);
    CHECK(parse_error("# BEG:ACTION name=a ok=b error=kill\n# END:ACTION junk\n") ==
          Errc::BadAttributes);
}

TEST_CASE("attribute order in the marker is irrelevant") {
    TemplateDocument doc =
        parse_template("# BEG:ACTION error=kill name=a ok=b\n# END:ACTION\n", "t");
    const Block* block = doc.blocks().at(0);
    CHECK(block->attr("name") == "a");
    CHECK(block->attr("ok") == "b");
    CHECK(block->attr("error") == "kill");
}

namespace {

// random well-formed documents for the round-trip property
std::string random_document(std::mt19937& rng, int& beg_count) {
    std::uniform_int_distribution<int> seg_count(0, 6);
    std::uniform_int_distribution<int> kind_pick(0, 3);
    std::uniform_int_distribution<int> line_count(0, 4);
    std::uniform_int_distribution<int> word(0, 25);
    std::string text;
    int segments = seg_count(rng);
    for (int s = 0; s < segments; ++s) {
        int kind = kind_pick(rng);
        if (kind == 0) {
            for (int i = line_count(rng); i-- > 0;)
                text += "  <passthrough line='" + std::to_string(word(rng)) + "'/>\n";
            continue;
        }
        ++beg_count;
        std::string name = "n" + std::to_string(word(rng));
        if (kind == 1) {
            text += "# BEG:REPLACE @" + name + "@\n";
            for (int i = line_count(rng); i-- > 0;) text += "    body " + std::to_string(i) + "\n";
            text += "# END:REPLACE\n";
        } else if (kind == 2) {
            text += "# BEG:ACTION name=" + name + " ok=next error=kill\n";
            for (int i = line_count(rng); i-- > 0;) text += "    <x v='" + std::to_string(i) + "'/>\n";
            text += "# END:ACTION\n";
        } else {
            text += "# BEG:FORK_MERGE name=" + name + " node_after_join=next error=kill\n";
            text += "@axis@ a b c\n";
            for (int i = line_count(rng); i-- > 0;) text += "    <y v='@axis@'/>\n";
            text += "# END:FORK_MERGE\n";
        }
    }
    return text;
}

}  // namespace

TEST_CASE("round-trip and block-count properties over random documents") {
    std::mt19937 rng(20260809);
    for (int iter = 0; iter < 200; ++iter) {
        int beg_count = 0;
        std::string text = random_document(rng, beg_count);
        TemplateDocument doc = parse_template(text, "t");
        CHECK(doc.serialize() == text);
        CHECK(static_cast<int>(doc.blocks().size()) == beg_count);
    }
}

TEST_CASE("permuting two disjoint blocks permutes only the block values") {
    std::string block_a =
        "# BEG:ACTION name=a ok=b error=kill\n"
        "    <first/>\n"
        "# END:ACTION\n";
    std::string block_b =
        "# BEG:REPLACE @R@\n"
        "    <second/>\n"
        "# END:REPLACE\n";
    std::string middle = "<gap/>\n";

    TemplateDocument ab = parse_template(block_a + middle + block_b, "t");
    TemplateDocument ba = parse_template(block_b + middle + block_a, "t");

    auto content = [](const Block& b) {
        return std::tuple{b.kind, b.attributes, b.body, b.raw_lines};
    };
    REQUIRE(ab.blocks().size() == 2);
    REQUIRE(ba.blocks().size() == 2);
    CHECK(content(*ab.blocks()[0]) == content(*ba.blocks()[1]));
    CHECK(content(*ab.blocks()[1]) == content(*ba.blocks()[0]));
    CHECK(std::get<Passthrough>(ab.segments[1]).lines ==
          std::get<Passthrough>(ba.segments[1]).lines);
}
