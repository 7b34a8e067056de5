#include <doctest.h>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "sinkeq/anonymous.hpp"
#include "sinkeq/errors.hpp"
#include "sinkeq/io.hpp"
#include "sinkeq/market.hpp"
#include "sinkeq/valid_utility.hpp"

using namespace sinkeq;

namespace {

// Same class, same shape, same utilities everywhere.
void check_same_game(const Game& a, const Game& b) {
    REQUIRE(a.game_class() == b.game_class());
    REQUIRE(a.strategy_counts() == b.strategy_counts());
    for (PlayerId i = 0; i < a.num_players(); ++i) {
        CHECK(a.player_name(i) == b.player_name(i));
        for (StrategyId s = 0; s < a.num_strategies(i); ++s) CHECK(a.strategy_name(i, s) == b.strategy_name(i, s));
    }
    for (const auto& p : oracle::all_profiles(a.strategy_counts()))
        for (PlayerId i = 0; i < a.num_players(); ++i) CHECK(a.utility(i, p) == b.utility(i, p));
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "sinkeq_io_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("table and congestion games round trip") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = oracle::random_table(rng, 32);
        auto back = io::parse_game(io::serialize_game(*t));
        check_same_game(*t, *back);
        CHECK(io::serialize_game(*back) == io::serialize_game(*t));

        const auto raw = oracle::random_congestion(rng, 3, 3, 3, trial % 2 == 0, trial % 3 == 0);
        const auto g = oracle::build(raw);
        check_same_game(g, *io::parse_game(io::serialize_game(g)));
    }
}

TEST_CASE("anonymous, market and valid-utility games round trip") {
    using namespace hist;
    AnonymousGame anon({"A", "B", "C"}, {AnonymousPlayer{"p", {0, 2}, {{0, all({ge(count(2), lit(1)), lt(sub(count(0), count(1)), lit(2))})}}},
                                         AnonymousPlayer{"q", {0, 1, 2}, {{1, eq(add(count(0), count(1)), lit(2))}}}});
    check_same_game(anon, *io::parse_game(io::serialize_game(anon)));

    MarketBuilder mb;
    auto x = mb.add_player("x");
    auto z = mb.add_player("z");
    auto y = mb.passive("y", 4, {z, x});
    mb.add_strategy(x, "take", {y});
    mb.add_strategy(x, "skip", {});
    mb.add_strategy(z, "skip", {});
    mb.add_strategy(z, "take", {y});
    auto market = std::move(mb).build();
    check_same_game(market, *io::parse_game(io::serialize_game(market)));

    ValidUtilityGame vu(2, {{"a", {0, 1}, {{}, {0}, {0, 1}}}, {"b", {1}, {{}, {1}}}},
                        SocialFunction{SocialFunction::Kind::Coverage, {3, 5}, {}}, UtilityFunction{});
    check_same_game(vu, *io::parse_game(io::serialize_game(vu)));
}

TEST_CASE("delay shorthand is accepted on input") {
    const auto g = io::parse_game(R"({"class": "congestion", "mode": "shared",
        "resources": [{"name": "e", "delay": "1/5"}],
        "players": [{"name": "p", "weight": 1, "strategies": [{"name": "s", "resources": [0]}]},
                    {"name": "q", "weight": 1, "strategies": [{"name": "s", "resources": [0]}]}]})");
    CHECK(g->utility(0, StrategyProfile({0, 0})) == -5);
}

TEST_CASE("parse errors carry a path") {
    try {
        io::parse_game(R"({"class": "table", "strategy_counts": [2], "payoffs": [[1], "x"]})");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.path().find("/payoffs/1") != std::string::npos);
    }
    CHECK_THROWS_AS(io::parse_game("{not json"), ParseError);
    CHECK_THROWS_AS(io::parse_game(R"({"class": "mystery"})"), ParseError);
    try {
        io::parse_game(R"({"class": "congestion", "mode": "shared", "resources": [],
            "players": [{"name": "p", "strategies": [{"name": "s", "resources": [3]}]}]})");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.path().find("/players/0/strategies/0") != std::string::npos);
    }
}

TEST_CASE("machines round trip") {
    for (const auto& m : {desk::looper(2), desk::halter(3), desk::bouncer(2)}) CHECK(io::tm_from_json(io::tm_to_json(m)) == m);
    auto with_accept = io::parse_tm(R"({"states": ["a", "h", "y"], "initial": "a", "halt": "h", "accept": "y", "tape_bound": 1,
        "delta": [{"state": "a", "read": "0", "next_state": "y", "write": "0", "move": "S"},
                  {"state": "a", "read": "1", "next_state": "h", "write": "1", "move": "S"},
                  {"state": "a", "read": "b", "next_state": "a", "write": "1", "move": "S"}]})");
    CHECK(with_accept.accept == 2u);
    CHECK_THROWS_AS(io::parse_tm(R"({"states": ["a"], "initial": "z", "halt": "a", "tape_bound": 1, "delta": []})"), ParseError);
}

TEST_CASE("dimacs parsing") {
    auto f = io::parse_dimacs("c demo\np cnf 3 2\n1 -2 3 0\n-1 2 2 0\n%\n0\n");
    CHECK(f.variables == 3);
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[1] == std::array<std::int32_t, 3>{-1, 2, 2});
    CHECK(io::formula_from_json(io::formula_to_json(f)) == f);
    CHECK_THROWS_AS(io::parse_dimacs("p cnf 2 1\n1 2 0\n"), ParseError);    // two literals
    CHECK_THROWS_AS(io::parse_dimacs("p cnf 2 2\n1 2 -1 0\n"), ParseError); // missing clause
    CHECK_THROWS_AS(io::parse_dimacs("1 2 -1 0\n"), ParseError);            // no header
    CHECK_THROWS_AS(io::parse_dimacs("p cnf 2 1\n1 5 -1 0\n"), ParseError); // variable out of range
}

TEST_CASE("compiled reductions save and load with their sidecar") {
    auto c = compile_tm_weighted(desk::looper(2));
    const auto path = scratch("looper.json");
    io::save_compiled(path, c);
    CHECK(std::filesystem::exists(io::sidecar_path(path)));
    auto back = io::load_compiled(path);
    CHECK(back.kind == c.kind);
    CHECK(back.roles == c.roles);
    CHECK(back.initial == c.initial);
    CHECK(back.M == c.M);
    CHECK(back.machine == c.machine);
    CHECK(verify_round_weighted(back, back.initial).matches);

    CnfFormula f;
    f.variables = 2;
    f.clauses = {{1, -2, 2}};
    auto s = compile_sat_market(f);
    const auto spath = scratch("sat.json");
    io::save_compiled(spath, s);
    auto sback = io::load_compiled(spath);
    CHECK(sback.formula == f);
    check_same_game(*s.game, *sback.game);
}
