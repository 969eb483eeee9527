#include "doctest.h"

#include "helpers.hpp"
#include "treels/errors.hpp"
#include "treels/instance_io.hpp"
#include "treels/oracles.hpp"

using namespace treels;

namespace {

const char* kStarStp =
    "33D32945 STP File, STP Format Version 1.0\n"
    "# tiny star\n"
    "SECTION Graph\n"
    "Nodes 4\n"
    "Edges 3\n"
    "E 1 2 1\n"
    "E 1 3 1\n"
    "E 1 4 1\n"
    "END\n"
    "\n"
    "SECTION Terminals\n"
    "Terminals 3\n"
    "T 2\n"
    "T 3\n"
    "T 4\n"
    "END\n"
    "\n"
    "EOF\n";

bool same_wtap(const WtapInstance& a, const WtapInstance& b) {
    if (a.tree.vertex_count != b.tree.vertex_count || a.tree.root != b.tree.root) return false;
    if (a.tree.edge_ends != b.tree.edge_ends) return false;
    if (a.links.size() != b.links.size()) return false;
    for (std::size_t i = 0; i < a.links.size(); ++i) {
        if (a.links[i].a != b.links[i].a || a.links[i].b != b.links[i].b ||
            a.links[i].weight != b.links[i].weight)
            return false;
    }
    return true;
}

bool same_steiner(const SteinerInstance& a, const SteinerInstance& b) {
    if (a.vertex_count != b.vertex_count) return false;
    if (a.terminals != b.terminals) return false;
    if (a.edges.size() != b.edges.size()) return false;
    for (std::size_t i = 0; i < a.edges.size(); ++i) {
        if (a.edges[i].a != b.edges[i].a || a.edges[i].b != b.edges[i].b ||
            a.edges[i].weight != b.edges[i].weight)
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("parse_wtap echoes the documented example") {
    WtapInstance instance = parse_wtap("WTAP 3 1\nROOT 1\nEDGE 1 2\nEDGE 2 3\nLINK 1 3 2.5\n");
    CHECK(instance.tree.vertex_count == 3);
    CHECK(instance.tree.root == 0);
    REQUIRE(instance.links.size() == 1);
    CHECK(instance.links[0].a == 0);
    CHECK(instance.links[0].b == 2);
    CHECK(instance.links[0].weight == 2.5);
}

TEST_CASE("parse_wtap error paths") {
    CHECK_THROWS_AS(parse_wtap("WTAP 3 1\nROOT 1\nEDGE 1 2\nEDGE 2 3\nLINK 1 3 0\n"),
                    NonPositiveWeight);
    CHECK_THROWS_AS(parse_wtap("WTAP 3 1\nROOT 1\nEDGE 1 2\nEDGE 2 3\nLINK 2 2 1\n"),
                    SelfLoopLink);
    CHECK_THROWS_AS(parse_wtap("WTAP 3 0\nROOT 1\nEDGE 1 2\nEDGE 1 2\n"), NotATree);
    CHECK_THROWS_AS(parse_wtap("WTAP 3 0\nROOT 1\nEDGE 1 2\nEDGE 2 9\n"), ParseError);
    CHECK_THROWS_AS(parse_wtap(""), ParseError);
    try {
        parse_wtap("WTAP 3 1\nROOT 1\nEDGE 1 2\nEDGE 2 3\nLINK x 3 1\n");
        FAIL("expected ParseError");
    } catch (const ParseError& error) {
        CHECK(error.line == 5);
    }
}

TEST_CASE("parse_stp reads the star fixture") {
    SteinerInstance instance = parse_stp(kStarStp);
    CHECK(instance.vertex_count == 4);
    CHECK(instance.edges.size() == 3);
    CHECK(instance.terminals == std::vector<int>{1, 2, 3});
}

TEST_CASE("parse_stp error paths") {
    CHECK_THROWS_AS(parse_stp("SECTION Graph\nNodes 2\nEdges 1\nE 1 2 0\nEND\nEOF\n"),
                    NonPositiveWeight);
    CHECK_THROWS_AS(parse_stp("SECTION Graph\nNodes 2\nEdges 1\nE 1 2 1\nEND\nEOF\n"),
                    MissingSection);
    CHECK_THROWS_AS(parse_stp("EOF\n"), MissingSection);  // no Graph section at all
    // declared counts must match the lines that follow
    CHECK_THROWS_AS(parse_stp("SECTION Graph\nNodes 2\nEdges 2\nE 1 2 1\nEND\n"
                              "SECTION Terminals\nTerminals 1\nT 1\nEND\nEOF\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_stp("SECTION Graph\nNodes 2\nEdges 1\nE 1 2 1\nEND\n"
                              "SECTION Terminals\nTerminals 1\nT 1\nEND\n"),
                    ParseError);  // missing EOF
}

TEST_CASE("parse_stp skips unknown sections") {
    std::string text =
        "SECTION Comment\nName \"x\"\nEND\n"
        "SECTION Graph\nNodes 2\nEdges 1\nE 1 2 4\nEND\n"
        "SECTION Coordinates\nDD 1 0 0\nEND\n"
        "SECTION Terminals\nTerminals 2\nT 1\nT 2\nEND\nEOF\n";
    SteinerInstance instance = parse_stp(text);
    CHECK(instance.vertex_count == 2);
    CHECK(instance.edges.size() == 1);
    CHECK(instance.terminals.size() == 2);
}

TEST_CASE("wtap round-trip identity on generated instances") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        GeneratorConfig config;
        config.seed = seed;
        config.vertex_count = 2 + static_cast<int>(seed % 9);
        int max_pairs = config.vertex_count * (config.vertex_count - 1) / 2;
        config.edge_count = std::min(max_pairs, 3 + static_cast<int>(seed % 7));
        WtapInstance instance = gen_wtap(config);
        WtapInstance reparsed = parse_wtap(write_wtap(instance));
        CHECK(same_wtap(instance, reparsed));
        CHECK(write_wtap(instance) == write_wtap(reparsed));
    }
}

TEST_CASE("stp round-trip identity on generated instances") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        GeneratorConfig config;
        config.seed = seed;
        config.vertex_count = 3 + static_cast<int>(seed % 8);
        int max_pairs = config.vertex_count * (config.vertex_count - 1) / 2;
        config.edge_count = std::min(max_pairs, config.vertex_count + 2);
        config.terminal_count = 2 + static_cast<int>(seed % 3);
        if (config.terminal_count > config.vertex_count)
            config.terminal_count = config.vertex_count;
        SteinerInstance instance = gen_steiner(config);
        SteinerInstance reparsed = parse_stp(write_stp(instance));
        CHECK(same_steiner(instance, reparsed));
        CHECK(write_stp(instance) == write_stp(reparsed));
    }
}

TEST_CASE("generators are deterministic and feasible") {
    GeneratorConfig config;
    config.seed = 99;
    config.vertex_count = 9;
    config.edge_count = 14;
    config.terminal_count = 4;

    CHECK(write_wtap(gen_wtap(config)) == write_wtap(gen_wtap(config)));
    CHECK(write_stp(gen_steiner(config)) == write_stp(gen_steiner(config)));

    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        config.seed = seed;
        WtapInstance wtap = gen_wtap(config);
        std::vector<int> all;
        for (const Link& link : wtap.links) all.push_back(link.id);
        CHECK(validate_wtap(wtap, all));

        SteinerInstance steiner = gen_steiner(config);
        std::vector<int> edges;
        for (const SteinerEdge& e : steiner.edges) edges.push_back(e.id);
        CHECK(validate_steiner(steiner, edges));
    }
}

TEST_CASE("generator configuration errors") {
    GeneratorConfig config;
    config.vertex_count = 0;
    CHECK_THROWS_AS(gen_wtap(config), ConfigError);
    config.vertex_count = 4;
    config.edge_count = 100;
    CHECK_THROWS_AS(gen_wtap(config), ConfigError);
    CHECK_THROWS_AS(gen_steiner(config), ConfigError);
    config.edge_count = 4;
    config.terminal_count = 9;
    CHECK_THROWS_AS(gen_steiner(config), ConfigError);
}

TEST_CASE("weights serialize as shortest round-trip decimals") {
    CHECK(format_number(2.5) == "2.5");
    CHECK(format_number(3.0) == "3");
    CHECK(format_number(0.1) == "0.1");
}
