#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "sinkeq/dynamics.hpp"
#include "sinkeq/errors.hpp"

using namespace sinkeq;

namespace {

std::vector<std::vector<std::uint64_t>> engine_sinks(const TableGame& g, Semantics sem) {
    std::vector<std::vector<std::uint64_t>> out;
    for (const auto& s : sinks(g, sem, 1u << 20)) {
        std::vector<std::uint64_t> ids;
        for (const auto& p : s.members) ids.push_back(g.codec().encode(p));
        std::sort(ids.begin(), ids.end());
        out.push_back(ids);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::shared_ptr<TableGame> matching_pennies() {
    return std::make_shared<TableGame>(std::vector<std::uint32_t>{2, 2},
                                       std::vector<std::vector<Payoff>>{{1, -1}, {-1, 1}, {-1, 1}, {1, -1}});
}

}  // namespace

TEST_CASE("matching pennies has one sink of size four and no pure NE") {
    auto g = matching_pennies();
    auto s = sinks(*g, Semantics::Improvement, 100);
    REQUIRE(s.size() == 1);
    CHECK(s[0].members.size() == 4);
    CHECK_FALSE(find_pure_ne(*g, 100).has_value());
    CHECK(has_non_singleton_sink(*g, Semantics::Improvement, 100));
    CHECK_FALSE(has_singleton_sink(*g, 100));
    CHECK(in_a_sink(*g, StrategyProfile({0, 1}), Semantics::Improvement, 100).answer == true);
}

TEST_CASE("improving moves are ordered and respect the semantics") {
    // Player 0 has payoffs 0,1,2 regardless of player 1.
    TableGame g({3, 1}, {{0, 0}, {1, 0}, {2, 0}});
    auto imp = improving_moves(g, StrategyProfile({0, 0}));
    REQUIRE(imp.size() == 2);
    CHECK(imp[0] == Move{0, 1, 1});
    CHECK(imp[1] == Move{0, 2, 2});
    auto br = improving_moves(g, StrategyProfile({0, 0}), Semantics::BestResponse);
    REQUIRE(br.size() == 1);
    CHECK(br[0].strategy == 2);
    CHECK(improving_moves(g, StrategyProfile({2, 0})).empty());
    CHECK(is_pure_ne(g, StrategyProfile({2, 0})));
}

TEST_CASE("sinks agree with the matrix oracle on random tables") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 80; ++trial) {
        auto g = oracle::random_table(rng, 48);
        for (bool br : {false, true}) {
            const auto sem = br ? Semantics::BestResponse : Semantics::Improvement;
            auto expect = oracle::bottom_sccs(oracle::table_edges(*g, br));
            std::sort(expect.begin(), expect.end());
            CHECK(engine_sinks(*g, sem) == expect);
        }
    }
}

TEST_CASE("tarjan components agree with the oracle on random tables") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        auto g = oracle::random_table(rng, 64);
        auto graph = full_state_graph(*g, Semantics::Improvement, 1u << 20);
        std::vector<std::vector<std::uint64_t>> got;
        for (const auto& c : sccs(graph)) got.emplace_back(c.begin(), c.end());
        auto expect = oracle::all_sccs(oracle::table_edges(*g, false));
        std::sort(got.begin(), got.end());
        std::sort(expect.begin(), expect.end());
        CHECK(got == expect);
    }
}

TEST_CASE("in-a-sink agrees with sink membership") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = oracle::random_table(rng, 36);
        const auto bottoms = oracle::bottom_sccs(oracle::table_edges(*g, false));
        std::set<std::uint64_t> members;
        for (const auto& c : bottoms) members.insert(c.begin(), c.end());
        for (std::uint64_t v = 0; v < *g->codec().space_size(); ++v) {
            auto r = in_a_sink(*g, g->codec().decode(v), Semantics::Improvement, 1000);
            REQUIRE(r.answer.has_value());
            CHECK(*r.answer == (members.count(v) > 0));
        }
    }
}

TEST_CASE("caps raise or report inconclusive") {
    auto g = std::make_shared<TableGame>(std::vector<std::uint32_t>{4, 4, 4},
                                         std::vector<std::vector<Payoff>>(64, std::vector<Payoff>(3, 0)));
    CHECK_THROWS_AS(sinks(*g, Semantics::Improvement, 10), CapExceeded);
    CHECK_NOTHROW(sinks(*g, Semantics::Improvement, 64));

    // A long improvement chain: player 0 climbs 0..9.
    std::vector<std::vector<Payoff>> pay;
    for (Payoff k = 0; k < 10; ++k) pay.push_back({k});
    TableGame chain({10}, pay);
    auto r = in_a_sink(chain, StrategyProfile({0}), Semantics::Improvement, 3);
    CHECK_FALSE(r.answer.has_value());
    CHECK(r.cap == 3);
    auto closure = forward_closure(chain, StrategyProfile({0}), Semantics::Improvement, 3);
    CHECK_FALSE(closure.complete);
}

TEST_CASE("pure NE equal singleton sinks") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = oracle::random_table(rng, 64);
        std::set<StrategyProfile> ne, singles;
        for (const auto& p : oracle::all_profiles(g->strategy_counts()))
            if (is_pure_ne(*g, p)) ne.insert(p);
        for (const auto& s : sinks(*g, Semantics::Improvement, 1000))
            if (s.singleton()) singles.insert(s.members[0]);
        CHECK(ne == singles);
        CHECK(has_singleton_sink(*g, 1000) == !ne.empty());
    }
}

TEST_CASE("alpha-NE relaxes pure NE") {
    // One cost player: costs 10 and 9 on its two strategies.
    CongestionBuilder b(DelayMode::Shared);
    auto e0 = b.resource("e0", DelayTable::constant(10));
    auto e1 = b.resource("e1", DelayTable::constant(9));
    auto p = b.add_player("p");
    b.add_strategy(p, "a", {e0});
    b.add_strategy(p, "b", {e1});
    auto g = std::move(b).build();
    CHECK_FALSE(is_pure_ne(g, StrategyProfile({0})));
    CHECK(is_alpha_ne(g, StrategyProfile({0}), Rational{1, 5}));
    CHECK_FALSE(is_alpha_ne(g, StrategyProfile({0}), Rational{1, 20}));
    CHECK_THROWS(is_alpha_ne(g, StrategyProfile({0}), Rational{3, 2}));
}

TEST_CASE("rosenthal potential drops by the mover's gain") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const auto raw = oracle::random_congestion(rng, 3, 4, 3, false, false);
        const auto g = oracle::build(raw);
        for (const auto& p : oracle::all_profiles(g.strategy_counts()))
            for (const auto& m : improving_moves(g, p)) {
                const auto q = p.with(m.player, m.strategy);
                CHECK(rosenthal_potential(g, p) - rosenthal_potential(g, q) ==
                      oracle::raw_cost(raw, m.player, p) - oracle::raw_cost(raw, m.player, q));
            }
    }
}

TEST_CASE("random walks are reproducible per seed") {
    auto g = matching_pennies();
    WalkOptions opt;
    opt.max_steps = 20;
    auto a = simulate_walk(*g, StrategyProfile({0, 0}), WalkPolicy::random(3), opt);
    auto b = simulate_walk(*g, StrategyProfile({0, 0}), WalkPolicy::random(3), opt);
    CHECK(a.path == b.path);
    CHECK(a.moves.size() == 20);
    CHECK(a.entered_sink_at == std::optional<std::size_t>{0});
}

TEST_CASE("walks stop at a pure NE") {
    TableGame g({3, 1}, {{0, 0}, {1, 0}, {2, 0}});
    auto r = simulate_walk(g, StrategyProfile({0, 0}), WalkPolicy::first(), WalkOptions{});
    CHECK(r.outcome == WalkResult::Outcome::ReachedSinkState);
    CHECK(r.path.back() == StrategyProfile({2, 0}));
    CHECK(r.moves.size() == 2);
}

TEST_CASE("priority walks only move listed players") {
    auto g = matching_pennies();
    WalkOptions opt;
    opt.max_steps = 5;
    auto r = simulate_walk(*g, StrategyProfile({0, 1}), WalkPolicy::priority({1}), opt);
    for (const auto& m : r.moves) CHECK(m.player == 1);
}

TEST_CASE("frozen players contribute no edges") {
    auto g = matching_pennies();
    FrozenPlayersGame frozen(g, {0});
    for (const auto& p : oracle::all_profiles(g->strategy_counts()))
        for (const auto& m : improving_moves(frozen, p)) CHECK(m.player == 1);
    auto s = sinks(frozen, Semantics::Improvement, 100);
    CHECK(s.size() == 2);
}

TEST_CASE("closure isomorphism detects a relabeling and a mismatch") {
    auto g = matching_pennies();
    // Swapping player roles maps matching pennies onto its mirror image.
    TableGame mirror({2, 2}, {{-1, 1}, {1, -1}, {1, -1}, {-1, 1}});
    auto a = forward_closure(*g, StrategyProfile({0, 0}), Semantics::Improvement, 100);
    auto b = forward_closure(mirror, StrategyProfile({0, 0}), Semantics::Improvement, 100);
    auto swap = [](const StrategyProfile& p) { return StrategyProfile({p[1], p[0]}); };
    CHECK(compare_closures(a, b, swap, {1, 0}).isomorphic);
    auto wrong = compare_closures(a, b, [](const StrategyProfile& p) { return p; }, {0, 1});
    CHECK_FALSE(wrong.isomorphic);
    CHECK_FALSE(wrong.mismatch.empty());
}

TEST_CASE("dot export marks sinks") {
    TableGame g({2, 1}, {{0, 0}, {1, 0}});
    auto graph = full_state_graph(g, Semantics::Improvement, 10);
    DotOptions opt;
    opt.decode_names = true;
    const auto dot = export_dot(g, graph, opt);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("peripheries=2") != std::string::npos);
    CHECK(dot.find("->") != std::string::npos);
}
