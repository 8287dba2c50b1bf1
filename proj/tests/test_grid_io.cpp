#include <catch2/catch_amalgamated.hpp>

#include "cycleflow/errors.hpp"
#include "cycleflow/grid.hpp"
#include "cycleflow/matpower.hpp"
#include "cycleflow/native_io.hpp"
#include "cycleflow/operators.hpp"
#include "cycleflow/topology.hpp"

#include <json.hpp>

#include "test_support.hpp"

using namespace cycleflow;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("merge_parallel_lines adds susceptances") {
    std::vector<Branch> raw{branch_from_susceptance(0, 1, 2.0),
                            branch_from_susceptance(0, 1, 3.0)};
    auto merged = merge_parallel_lines(raw);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].susceptance == 5.0);
    CHECK(merged[0].tail == 0);
    CHECK(merged[0].head == 1);
}

TEST_CASE("merge_parallel_lines keeps a single branch unchanged") {
    std::vector<Branch> raw{branch_from_reactance(2, 7, 0.4)};
    auto merged = merge_parallel_lines(raw);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0] == raw[0]);
}

TEST_CASE("merge_parallel_lines merges three equal branches") {
    std::vector<Branch> raw{branch_from_reactance(0, 1, 0.3),
                            branch_from_reactance(1, 0, 0.3),
                            branch_from_reactance(0, 1, 0.3)};
    auto merged = merge_parallel_lines(raw);
    REQUIRE(merged.size() == 1);
    CHECK_THAT(merged[0].susceptance, Catch::Matchers::WithinRel(10.0, 1e-12));
    // Orientation comes from the first member.
    CHECK(merged[0].tail == 0);
    CHECK(merged[0].head == 1);
}

TEST_CASE("merging commutes with nodal susceptance assembly") {
    // A multigraph with repeats in both orientations.
    std::vector<Branch> raw{
        branch_from_reactance(0, 1, 0.1), branch_from_reactance(1, 0, 0.2),
        branch_from_reactance(1, 2, 0.5), branch_from_reactance(2, 3, 0.25),
        branch_from_reactance(3, 2, 0.125), branch_from_reactance(0, 3, 1.0),
    };
    Eigen::MatrixXd from_raw = Eigen::MatrixXd::Zero(4, 4);
    for (const Branch& br : raw) {
        from_raw(br.tail, br.tail) += br.susceptance;
        from_raw(br.head, br.head) += br.susceptance;
        from_raw(br.tail, br.head) -= br.susceptance;
        from_raw(br.head, br.tail) -= br.susceptance;
    }

    std::vector<Bus> buses{{10}, {20}, {30}, {40}};
    Grid grid("multi", buses, raw, 0);
    auto ops = assemble_operators(grid, build_incidence(grid));
    const Eigen::MatrixXd from_merged = Eigen::MatrixXd(ops.nodal);
    REQUIRE(((from_merged - from_raw).cwiseAbs().array() <=
             1e-12 * from_raw.cwiseAbs().maxCoeff())
                .all());
}

TEST_CASE("case5 parses to the expected grid") {
    const Grid grid = parse_matpower_case(cftest::read_file(cftest::fixture_path("case5.m")));
    CHECK(grid.name() == "case5");
    CHECK(grid.node_count() == 5);
    CHECK(grid.line_count() == 6);
    CHECK(grid.id_of(grid.slack()) == 4);  // the type-3 reference bus
    // susceptance = 1/x
    CHECK_THAT(grid.branches()[0].susceptance, Catch::Matchers::WithinRel(1.0 / 0.0281, 1e-12));
    // orientation follows file order: from-bus is the tail
    CHECK(grid.id_of(grid.branches()[5].tail) == 4);
    CHECK(grid.id_of(grid.branches()[5].head) == 5);
}

TEST_CASE("two-bus case gives the reciprocal susceptance") {
    const std::string text =
        "mpc.bus = [\n 1 3;\n 2 1;\n];\n"
        "mpc.branch = [\n 1 2 0.01 0.1;\n];\n";
    const Grid grid = parse_matpower_case(text);
    REQUIRE(grid.line_count() == 1);
    CHECK_THAT(grid.branches()[0].susceptance, Catch::Matchers::WithinRel(10.0, 1e-12));
    CHECK(grid.slack() == 0);
}

TEST_CASE("out-of-service branches are dropped") {
    const std::string text =
        "mpc.bus = [\n 1 3;\n 2 1;\n 3 1;\n];\n"
        "mpc.branch = [\n"
        " 1 2 0 0.1 0 0 0 0 0 0 1;\n"
        " 2 3 0 0.2 0 0 0 0 0 0 1;\n"
        " 1 3 0 -0.5 0 0 0 0 0 0 0;\n"  // off, bad x must not matter
        "];\n";
    const Grid grid = parse_matpower_case(text);
    CHECK(grid.line_count() == 2);
}

TEST_CASE("parse errors carry line numbers") {
    const std::string text =
        "mpc.bus = [\n 1 3;\n 2 1;\n];\n"
        "mpc.branch = [\n 1 2 0 0.1;\n 1 oops 0 0.2;\n];\n";
    try {
        parse_matpower_case(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 7);
        CHECK_THAT(e.what(), ContainsSubstring("oops"));
    }
}

TEST_CASE("non-positive reactance on an in-service branch is rejected") {
    const std::string text =
        "mpc.bus = [\n 1 3;\n 2 1;\n];\n"
        "mpc.branch = [\n 1 2 0 0.0;\n];\n";
    CHECK_THROWS_MATCHES(parse_matpower_case(text), ValidationError,
                         Catch::Matchers::MessageMatches(ContainsSubstring("non-positive reactance")));
}

TEST_CASE("phase shifters are rejected") {
    const std::string text =
        "mpc.bus = [\n 1 3;\n 2 1;\n];\n"
        "mpc.branch = [\n 1 2 0 0.1 0 0 0 0 0 30 1;\n];\n";
    CHECK_THROWS_MATCHES(parse_matpower_case(text), ValidationError,
                         Catch::Matchers::MessageMatches(ContainsSubstring("phase shifter")));
}

TEST_CASE("disconnected case names a bus in the smaller component") {
    const std::string text =
        "mpc.bus = [\n 1 3;\n 2 1;\n 3 1;\n 4 1;\n 5 1;\n];\n"
        "mpc.branch = [\n 1 2 0 0.1;\n 2 3 0 0.1;\n 4 5 0 0.1;\n];\n";
    try {
        parse_matpower_case(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("disconnected") != std::string::npos);
        // bus 4 or 5: the two-bus component is the smaller one
        CHECK((msg.find("bus 4") != std::string::npos || msg.find("bus 5") != std::string::npos));
    }
}

TEST_CASE("slack falls back to the lowest bus id without a type-3 bus") {
    const std::string text =
        "mpc.bus = [\n 7 1;\n 2 1;\n 5 1;\n];\n"
        "mpc.branch = [\n 7 2 0 0.1;\n 2 5 0 0.1;\n];\n";
    const Grid grid = parse_matpower_case(text);
    CHECK(grid.id_of(grid.slack()) == 2);
}

TEST_CASE("native JSON matches the parsed case file") {
    const Grid from_json = load_native(cftest::read_file(cftest::fixture_path("case5.json")));
    const Grid from_case =
        parse_matpower_case(cftest::read_file(cftest::fixture_path("case5.m")));
    CHECK(from_json == from_case);
}

TEST_CASE("native save/load round-trips") {
    auto check_roundtrip = [](const Grid& grid) {
        const Grid again = load_native(save_native(grid));
        CHECK(again == grid);
    };
    check_roundtrip(cftest::golden_five_bus());
    check_roundtrip(cftest::triangle_grid());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        check_roundtrip(cftest::random_grid(2 + static_cast<int>(seed) * 3,
                                            static_cast<int>(seed % 5), seed));
    }
}

TEST_CASE("saving and reparsing preserves the JSON document") {
    const std::string text = cftest::read_file(cftest::fixture_path("case5.json"));
    const std::string saved = save_native(load_native(text));
    CHECK(nlohmann::json::parse(saved) == nlohmann::json::parse(text));
}

TEST_CASE("native JSON schema violations are descriptive") {
    CHECK_THROWS_AS(load_native("[1,2,3]"), ValidationError);
    CHECK_THROWS_AS(load_native("{\"name\":\"g\",\"slack\":1,\"buses\":[1,2]}"),
                    ValidationError);
    CHECK_THROWS_MATCHES(
        load_native("{\"name\":\"g\",\"slack\":1,\"buses\":[1,2],\"branches\":[],\"extra\":0}"),
        ValidationError, Catch::Matchers::MessageMatches(ContainsSubstring("unknown key")));
    CHECK_THROWS_AS(load_native("this is not json"), ParseError);
    // empty branch list: connectivity must fail for N >= 2
    CHECK_THROWS_AS(
        load_native("{\"name\":\"g\",\"slack\":1,\"buses\":[1,2],\"branches\":[]}"),
        ValidationError);
}

TEST_CASE("grid invariants are enforced") {
    std::vector<Bus> buses{{1}, {2}};
    CHECK_THROWS_AS(Grid("one-bus", {{1}}, {branch_from_reactance(0, 0, 1.0)}, 0),
                    ValidationError);
    CHECK_THROWS_AS(Grid("self-loop", buses, {branch_from_reactance(1, 1, 1.0)}, 0),
                    ValidationError);
    CHECK_THROWS_AS(Grid("dup-ids", {{1}, {1}}, {branch_from_reactance(0, 1, 1.0)}, 0),
                    ValidationError);
    CHECK_THROWS_AS(branch_from_reactance(0, 1, -2.0), ValidationError);
    CHECK_THROWS_AS(Grid("bad-slack", buses, {branch_from_reactance(0, 1, 1.0)}, 5),
                    ValidationError);
}
