#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sinkeq/congestion.hpp"
#include "sinkeq/dynamics.hpp"
#include "sinkeq/errors.hpp"
#include "sinkeq/market.hpp"
#include "sinkeq/reductions.hpp"

using namespace sinkeq;

namespace {

std::vector<TMSpec> desk_machines() { return {desk::looper(2), desk::halter(2), desk::bouncer(2)}; }

}  // namespace

TEST_CASE("compiled player counts") {
    auto w = compile_tm_weighted(desk::looper(2));
    CHECK(w.game->num_players() == 92);
    CHECK(compile_tm_weighted(desk::bouncer(2)).game->num_players() == 134);
    CHECK(w.roles.size() == 92);
    CHECK(2 * control_count(desk::looper(2)) + 8 == 92);
    CHECK(w.find_player("clock").has_value());
    CHECK_FALSE(w.find_player("nobody").has_value());
    CHECK_THROWS(w.player("nobody"));
}

TEST_CASE("all TM compiles share roles and strategy names") {
    for (const auto& m : desk_machines()) {
        auto w = compile_tm_weighted(m);
        auto ps = compile_tm_player_specific(m);
        auto mk = compile_tm_market(m);
        CHECK(w.roles == ps.roles);
        CHECK(w.roles == mk.roles);
        CHECK(w.initial == ps.initial);
        CHECK(w.initial == mk.initial);
        for (PlayerId i = 0; i < w.game->num_players(); ++i) {
            REQUIRE(w.game->num_strategies(i) == mk.game->num_strategies(i));
            for (StrategyId s = 0; s < w.game->num_strategies(i); ++s)
                CHECK(w.game->strategy_name(i, s) == mk.game->strategy_name(i, s));
        }
    }
}

TEST_CASE("configurations encode and decode") {
    const auto m = desk::bouncer(2);
    for (auto kind : {ReductionKind::Weighted, ReductionKind::Anonymous}) {
        auto c = kind == ReductionKind::Weighted ? compile_tm_weighted(m) : compile_tm_anonymous(m);
        CHECK(decode_config(c, c.initial) == initial_config(m));
        CHECK(is_round_start(c, c.initial));
        TapeConfig cfg{1, 2, {Symbol::One, Symbol::Zero, Symbol::Blank}};
        auto p = encode_config(c, cfg);
        CHECK(decode_config(c, p) == cfg);
        CHECK(is_round_start(c, p));
    }
}

TEST_CASE("one weighted round is one machine step") {
    for (const auto& m : desk_machines())
        for (auto compile : {compile_tm_weighted, compile_tm_player_specific, compile_tm_market}) {
            auto c = compile(m, kDefaultPenalty);
            auto r = verify_round_weighted(c, c.initial);
            INFO(to_string(c.kind), " ", m.states[0], ": ", r.expected, " / ", r.actual);
            CHECK(r.matches);
            REQUIRE(r.end_config.has_value());
            CHECK(*r.end_config == tm_step(m, initial_config(m)));
        }
}

TEST_CASE("consecutive weighted rounds follow the machine") {
    const auto m = desk::bouncer(2);
    auto c = compile_tm_weighted(m);
    auto p = c.initial;
    auto cfg = initial_config(m);
    for (int round = 0; round < 4; ++round) {
        auto r = verify_round_weighted(c, p);
        REQUIRE(r.matches);
        cfg = tm_step(m, cfg);
        CHECK(*r.end_config == cfg);
        p = r.end_profile;
    }
}

TEST_CASE("weighted round rejects a mid-round profile") {
    auto c = compile_tm_weighted(desk::looper(2));
    auto p = c.initial;
    const auto clock = c.player("clock");
    p[clock] = (p[clock] + 1) % static_cast<StrategyId>(c.game->num_strategies(clock));
    CHECK_THROWS_AS(verify_round_weighted(c, p), PreconditionError);
    auto a = compile_tm_anonymous(desk::looper(2));
    CHECK_THROWS_AS(verify_round_weighted(a, a.initial), UnsupportedOperation);
}

TEST_CASE("anonymous round is one machine step") {
    for (const auto& m : desk_machines()) {
        auto c = compile_tm_anonymous(m);
        auto r = verify_round_anonymous(c, c.initial);
        INFO(r.expected, " / ", r.actual);
        CHECK(r.matches);
        if (!m.is_final(tm_step(m, initial_config(m)).state)) {
            REQUIRE(r.end_config.has_value());
            CHECK(*r.end_config == tm_step(m, initial_config(m)));
        }
    }
}

TEST_CASE("anonymous control1 strategy list") {
    const auto& names = anonymous_control1_strategies();
    REQUIRE(names.size() == 10);
    CHECK(names.back() == "halt");
}

TEST_CASE("compilers reject unsupported inputs") {
    auto with_accept = desk::looper(2);
    with_accept.states.push_back("acc");
    with_accept.delta.resize(with_accept.states.size() * kAlphabetSize);
    with_accept.accept = 2;
    CHECK_THROWS_AS(compile_tm_weighted(with_accept), ConfigError);
    CHECK_THROWS_AS(compile_tm_weighted(desk::looper(2), 100), ConfigError);
}

TEST_CASE("sat market structure") {
    CnfFormula f;
    f.variables = 3;
    f.clauses = {{1, -2, 3}};
    auto c = compile_sat_market(f);
    const auto& g = dynamic_cast<const MarketGame&>(*c.game);
    CHECK(g.num_players() == 5);
    CHECK(c.roles == std::vector<std::string>{"X_1", "X_2", "X_3", "C_1", "K_1"});
    CHECK(g.passive().size() == 3 + 6);
    CHECK(c.initial == StrategyProfile(std::vector<StrategyId>(5, 0)));
}

TEST_CASE("sat market has a pure NE exactly when the formula is satisfiable") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        auto f = oracle::random_formula(rng, 3, 3);
        auto c = compile_sat_market(f);
        CHECK(find_pure_ne(*c.game, 1u << 22).has_value() == oracle::satisfiable(f));
    }
}

TEST_CASE("sat market equilibria encode satisfying assignments") {
    CnfFormula f;
    f.variables = 2;
    f.clauses = {{1, 2, 2}, {-1, -1, 2}};
    auto c = compile_sat_market(f);
    for (const auto& p : oracle::all_profiles(c.game->strategy_counts())) {
        if (!is_pure_ne(*c.game, p)) continue;
        // Strategy 0 of X_v means x_v is true.
        std::vector<bool> a{p[0] == 0, p[1] == 0};
        CHECK(f.satisfied_by(a));
    }
}

TEST_CASE("formula validation") {
    CnfFormula f;
    f.variables = 2;
    f.clauses = {{1, 3, -2}};
    CHECK_THROWS_AS(f.validate(), ConfigError);
    f.clauses = {{1, 0, -2}};
    CHECK_THROWS_AS(f.validate(), ConfigError);
    CHECK(parse_reduction_kind("tm2market") == ReductionKind::Market);
    CHECK(to_string(ReductionKind::SatMarket) == "sat2market");
    CHECK_THROWS(parse_reduction_kind("tm2nothing"));
}
