#include "doctest.h"

#include "helpers.hpp"
#include "treels/errors.hpp"
#include "treels/oracles.hpp"

using namespace treels;
using treels::testing::make_steiner;
using treels::testing::make_wtap;
using treels::testing::path3_fixture;
using treels::testing::steiner_star_fixture;

TEST_CASE("opt_wtap_bruteforce on the path fixture") {
    OracleReport report = opt_wtap_bruteforce(path3_fixture());
    CHECK(report.opt_value == 2.0);
    CHECK(report.certificate == std::vector<int>{1, 2});
    CHECK(validate_wtap(path3_fixture(), report.certificate));
}

TEST_CASE("opt_wtap_bruteforce on a single link") {
    WtapInstance instance = make_wtap({{0, 1}}, 0, {{{0, 1}, 4.0}});
    CHECK(opt_wtap_bruteforce(instance).opt_value == 4.0);
}

TEST_CASE("opt_wtap_bruteforce rejects infeasible and oversized inputs") {
    WtapInstance uncoverable = make_wtap({{0, 1}, {1, 2}}, 0, {{{0, 1}, 1.0}});
    CHECK_THROWS_AS(opt_wtap_bruteforce(uncoverable), Infeasible);
    WtapInstance small = path3_fixture();
    CHECK_THROWS_AS(opt_wtap_bruteforce(small, 2), SizeLimit);
}

TEST_CASE("opt_steiner_exact examples") {
    CHECK(opt_steiner_exact(steiner_star_fixture()).opt_value == 3.0);

    SteinerInstance two = make_steiner(2, {{{0, 1}, 5.0}}, {0, 1});
    CHECK(opt_steiner_exact(two).opt_value == 5.0);

    SteinerInstance path =
        make_steiner(4, {{{0, 1}, 1.0}, {{1, 2}, 1.0}, {{2, 3}, 1.0}}, {0, 1, 2, 3});
    CHECK(opt_steiner_exact(path).opt_value == 3.0);
    CHECK_THROWS_AS(opt_steiner_exact(path, 2), SizeLimit);
}

TEST_CASE("opt_krestricted_bruteforce on the star fixture") {
    SteinerInstance star = steiner_star_fixture();
    CHECK(opt_krestricted_bruteforce(star, 3).opt_value == 3.0);
    CHECK(opt_krestricted_bruteforce(star, 2).opt_value == 4.0);  // two shortest paths
}

TEST_CASE("opt_krestricted value is monotone in k and at least the exact optimum") {
    for (std::uint64_t seed = 600; seed < 612; ++seed) {
        GeneratorConfig config;
        config.seed = seed;
        config.vertex_count = 7;
        config.edge_count = 11;
        config.terminal_count = 4;
        SteinerInstance instance = gen_steiner(config);
        double exact = opt_steiner_exact(instance).opt_value;
        double previous = 1e100;
        for (int k = 2; k <= 4; ++k) {
            OracleReport report = opt_krestricted_bruteforce(instance, k);
            CHECK(report.opt_value <= previous + 1e-9);
            CHECK(report.opt_value >= exact - 1e-9);
            CHECK(validate_steiner(instance, report.certificate));
            previous = report.opt_value;
        }
    }
}

TEST_CASE("component bruteforce degenerate cases") {
    WtapInstance instance = path3_fixture();
    WtapState state = init_state(instance, {1, 2}, 0.5, 8);

    SUBCASE("k = 0 leaves only the empty component") {
        state.k = 0;
        WtapSearchResult result = best_component_bruteforce_wtap(state, 3);
        CHECK(result.component.empty());
        CHECK(result.gain == 0.0);
    }
    SUBCASE("no positive gain yields the empty component") {
        WtapSearchResult result = best_component_bruteforce_wtap(state, 3);
        CHECK(result.component.empty());
        CHECK(result.gain == 0.0);
    }
    SUBCASE("size limit") {
        CHECK_THROWS_AS(best_component_bruteforce_wtap(state, 3, 2), SizeLimit);
    }
}

TEST_CASE("drop bruteforce degenerate cases") {
    SteinerInstance star = steiner_star_fixture();
    SteinerState state = initial_steiner_state(star, 0.5, 3);

    SUBCASE("contracting all terminals drops everything") {
        auto [dropped, value] = drop_bruteforce_steiner(state, {1, 2, 3});
        CHECK(dropped.size() == 2);
        CHECK(value == 3.0);
    }
    SUBCASE("a pair already in S is always droppable") {
        auto [dropped, value] = drop_bruteforce_steiner(state, {1, 2});
        std::map<TerminalPair, double> wbar = terminal_tree_wbar(state);
        CHECK(value >= wbar.at({1, 2}));
    }
    SUBCASE("size limit") {
        CHECK_THROWS_AS(drop_bruteforce_steiner(state, {1, 2}, 1), SizeLimit);
    }
}

TEST_CASE("validate verdicts") {
    WtapInstance wtap = path3_fixture();
    CHECK(validate_wtap(wtap, {0}));
    CHECK_FALSE(validate_wtap(wtap, {1}));
    CHECK(validate_wtap(wtap, {0, 1, 2}));

    SteinerInstance two = make_steiner(2, {{{0, 1}, 5.0}}, {0, 1});
    CHECK_FALSE(validate_steiner(two, {}));
    CHECK(validate_steiner(two, {0}));
}

TEST_CASE("oracle certificates validate") {
    for (std::uint64_t seed = 700; seed < 712; ++seed) {
        WtapInstance instance = testing::small_closed_wtap(seed, 15);
        OracleReport report = opt_wtap_bruteforce(instance);
        CHECK(validate_wtap(instance, report.certificate));

        GeneratorConfig config;
        config.seed = seed;
        config.vertex_count = 7;
        config.edge_count = 10;
        config.terminal_count = 3;
        SteinerInstance steiner = gen_steiner(config);
        CHECK(validate_steiner(steiner, opt_steiner_exact(steiner).certificate));
    }
}
