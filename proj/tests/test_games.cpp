#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sinkeq/anonymous.hpp"
#include "sinkeq/congestion.hpp"
#include "sinkeq/errors.hpp"
#include "sinkeq/market.hpp"
#include "sinkeq/valid_utility.hpp"

using namespace sinkeq;

TEST_CASE("codec round trips and orders player 0 first") {
    ProfileCodec codec({2, 3, 4});
    CHECK(codec.space_size() == 24u);
    CHECK(codec.encode(StrategyProfile({1, 0, 0})) == 1);
    CHECK(codec.encode(StrategyProfile({0, 1, 0})) == 2);
    CHECK(codec.encode(StrategyProfile({1, 2, 3})) == 23);
    for (std::uint64_t v = 0; v < 24; ++v) CHECK(codec.encode(codec.decode(v)) == v);
}

TEST_CASE("codec reports overflow as unknown size") {
    ProfileCodec codec(std::vector<std::uint32_t>(70, 2));
    CHECK_FALSE(codec.space_size().has_value());
}

TEST_CASE("table game reads payoffs and rejects bad profiles") {
    // Matching pennies.
    TableGame g({2, 2}, {{1, -1}, {-1, 1}, {-1, 1}, {1, -1}});
    CHECK(g.utility(0, StrategyProfile({0, 0})) == 1);
    CHECK(g.utility(1, StrategyProfile({1, 0})) == 1);
    std::vector<Payoff> dev;
    g.deviation_utilities(0, StrategyProfile({0, 1}), dev);
    CHECK(dev == std::vector<Payoff>{-1, 1});
    CHECK_THROWS_AS(g.check_profile(StrategyProfile({2, 0})), PreconditionError);
    CHECK_THROWS_AS(g.check_profile(StrategyProfile({0})), PreconditionError);
    CHECK_THROWS_AS(TableGame({2}, {{1}}), ConfigError);
}

TEST_CASE("delay tables") {
    auto t = DelayTable::parse_shorthand("0/7/9");
    CHECK(t.at(1) == 0);
    CHECK(t.at(2) == 7);
    CHECK(t.at(3) == 9);
    CHECK(t.at(40) == 9);
    CHECK(DelayTable::constant(5).at(1) == 5);
    CHECK_THROWS_AS(DelayTable::parse_shorthand("1/x"), ConfigError);
    DelayTable finite{{1, 2}, std::nullopt};
    CHECK(finite.covers(2));
    CHECK_FALSE(finite.covers(3));
}

TEST_CASE("congestion costs match a brute-force sum over random games") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const bool ps = trial % 3 == 2;
        const auto raw = oracle::random_congestion(rng, 3, 4, 3, trial % 3 == 1, ps);
        const auto g = oracle::build(raw);
        std::vector<Payoff> dev;
        for (const auto& p : oracle::all_profiles(g.strategy_counts()))
            for (PlayerId i = 0; i < g.num_players(); ++i) {
                CHECK(g.player_cost(i, p) == oracle::raw_cost(raw, i, p));
                CHECK(g.utility(i, p) == -oracle::raw_cost(raw, i, p));
                g.deviation_utilities(i, p, dev);
                for (StrategyId s = 0; s < g.num_strategies(i); ++s)
                    CHECK(dev[s] == -oracle::raw_cost(raw, i, p.with(i, s)));
            }
    }
}

TEST_CASE("weighted loads add player weights") {
    CongestionBuilder b(DelayMode::Shared);
    auto e = b.resource("e", DelayTable{{1, 2, 3, 4, 5}, std::nullopt});
    auto p0 = b.add_player("heavy", 3);
    auto p1 = b.add_player("light", 2);
    b.add_strategy(p0, "use", {e});
    b.add_strategy(p1, "use", {e});
    auto g = std::move(b).build();
    StrategyProfile s({0, 0});
    CHECK(g.loads(s) == std::vector<Payoff>{5});
    CHECK(g.player_cost(0, s) == 5);
    CHECK_FALSE(g.unweighted());
}

TEST_CASE("congestion construction errors") {
    SUBCASE("undefined delay at a reachable load") {
        CongestionBuilder b(DelayMode::Shared);
        auto e = b.resource("e", DelayTable{{1}, std::nullopt});
        for (int i = 0; i < 2; ++i) b.add_strategy(b.add_player("p" + std::to_string(i)), "s", {e});
        CHECK_THROWS_AS(std::move(b).build(), ConfigError);
    }
    SUBCASE("player without strategies") {
        CongestionBuilder b(DelayMode::Shared);
        b.add_player("idle");
        CHECK_THROWS_AS(std::move(b).build(), ConfigError);
    }
    SUBCASE("unknown resource name") {
        CongestionBuilder b(DelayMode::Shared);
        CHECK_THROWS(b.resource("ghost"));
    }
}

TEST_CASE("market winners follow the preference lists") {
    std::mt19937_64 rng(5);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int trial = 0; trial < 40; ++trial) {
        MarketBuilder b;
        const int n = pick(1, 3), m = pick(1, 4);
        for (int x = 0; x < n; ++x) b.add_player("x" + std::to_string(x));
        std::vector<std::vector<PlayerId>> prefs(m);
        for (int y = 0; y < m; ++y) {
            auto& pref = prefs[y];
            for (int x = 0; x < n; ++x)
                if (pick(0, 2)) pref.push_back(x);
            std::shuffle(pref.begin(), pref.end(), rng);
            b.passive("y" + std::to_string(y), pick(1, 9), pref);
        }
        // Every subset of the agents that rank x, which is a lower ideal.
        std::vector<int> acceptable(n, 0);
        for (int y = 0; y < m; ++y)
            for (auto x : prefs[y]) acceptable[x] |= 1 << y;
        for (int x = 0; x < n; ++x)
            for (int mask = 0; mask < (1 << m); ++mask) {
                std::vector<std::uint32_t> d;
                for (int y = 0; y < m; ++y)
                    if (mask >> y & 1) d.push_back(y);
                if ((mask & acceptable[x]) == mask) b.add_strategy(x, "m" + std::to_string(mask), d);
            }
        auto g = std::move(b).build();
        CHECK(g.lower_ideal_violations().empty());
        std::vector<Payoff> dev;
        for (int k = 0; k < 30; ++k) {
            StrategyProfile p{std::vector<StrategyId>(n)};
            for (int x = 0; x < n; ++x) p[x] = pick(0, static_cast<int>(g.num_strategies(x)) - 1);
            CHECK(g.compute_winners(p) == oracle::winners(g, p));
            for (PlayerId x = 0; x < static_cast<PlayerId>(n); ++x) {
                CHECK(g.utility(x, p) == oracle::market_value(g, x, p));
                g.deviation_utilities(x, p, dev);
                for (StrategyId s = 0; s < g.num_strategies(x); ++s) CHECK(dev[s] == oracle::market_value(g, x, p.with(x, s)));
            }
        }
    }
}

TEST_CASE("market reports a demand set that is not a lower ideal") {
    MarketBuilder b;
    auto x = b.add_player("x");
    auto y0 = b.passive("y0", 1, {x});
    auto y1 = b.passive("y1", 1, {x});
    b.add_strategy(x, "both", {y0, y1});
    b.add_strategy(x, "none", {});
    auto g = std::move(b).build();
    CHECK_FALSE(g.lower_ideal_violations().empty());
}

TEST_CASE("anonymous utilities depend on the histogram only") {
    using namespace hist;
    // Two strategies; a player is happy on A while at most one player stands on A.
    std::vector<AnonymousPlayer> players;
    for (int i = 0; i < 3; ++i)
        players.push_back(AnonymousPlayer{"p" + std::to_string(i), {0, 1}, {{0, le(count(0), lit(1))}, {1, ge(count(1), lit(2))}}});
    AnonymousGame g({"A", "B"}, players);
    StrategyProfile p({0, 1, 1});
    CHECK(g.histogram(p) == std::vector<std::uint32_t>{1, 2});
    CHECK(g.utility(0, p) == 2);
    CHECK(g.utility(1, p) == 2);
    CHECK(g.utility(0, StrategyProfile({0, 0, 1})) == 1);
    // Permuting players permutes utilities.
    CHECK(g.utility(2, StrategyProfile({1, 1, 0})) == g.utility(0, p));
}

TEST_CASE("anonymous disallowed strategies pay zero") {
    using namespace hist;
    AnonymousGame g({"A", "B"}, {AnonymousPlayer{"only-a", {0}, {}}});
    CHECK(g.utility(0, StrategyProfile({0})) == 1);
    CHECK(g.utility(0, StrategyProfile({1})) == 0);
}

TEST_CASE("histogram expressions type-check") {
    using namespace hist;
    CHECK_THROWS_AS(add(count(0), lit(1)).validate(2), ConfigError);
    CHECK_THROWS_AS(eq(count(5), lit(1)).validate(2), ConfigError);
    CHECK_NOTHROW(all({eq(count(0), lit(1)), lt(sub(count(1), count(0)), lit(3))}).validate(2));
    const std::vector<std::uint32_t> h{2, 5};
    CHECK(sub(count(1), count(0)).eval_int(h) == 3);
    CHECK(all({ge(count(1), lit(5)), ne(count(0), lit(1))}).eval_bool(h));
}

namespace {

// Two players, three elements with weights 1, 2, 4.
ValidUtilityGame coverage_game(bool perturb) {
    std::vector<ValidUtilityPlayer> players{
        {"a", {0, 1}, {{}, {0}, {1}, {0, 1}}},
        {"b", {1, 2}, {{}, {1}, {2}, {1, 2}}},
    };
    SocialFunction social{SocialFunction::Kind::Coverage, {1, 2, 4}, {}};
    if (!perturb) return ValidUtilityGame(3, players, social, UtilityFunction{});
    // Marginal utilities, except player a gets 0 when both play {1}.
    ValidUtilityGame base(3, players, social, UtilityFunction{});
    std::vector<std::vector<Payoff>> values;
    for (const auto& p : oracle::all_profiles(base.strategy_counts())) {
        std::vector<Payoff> row;
        for (PlayerId i = 0; i < 2; ++i) row.push_back(base.utility(i, p));
        if (p[0] == 2 && p[1] == 1) row[0] = -1;
        values.push_back(row);
    }
    return ValidUtilityGame(3, players, social, UtilityFunction{UtilityFunction::Kind::Table, values});
}

}  // namespace

TEST_CASE("coverage game utilities are marginal contributions") {
    auto g = coverage_game(false);
    CHECK(g.utility(0, StrategyProfile({3, 0})) == 3);
    CHECK(g.utility(0, StrategyProfile({3, 1})) == 1);  // element 1 already covered by b
    CHECK(g.utility(1, StrategyProfile({3, 3})) == 4);
    CHECK(g.social(g.sets_of(StrategyProfile({3, 3}))) == 7);
}

TEST_CASE("valid-utility checker flags") {
    auto good = check_valid_utility(coverage_game(false), 1u << 20);
    CHECK(good.all());
    CHECK(good.counterexamples.empty());
    auto bad = check_valid_utility(coverage_game(true), 1u << 20);
    CHECK(bad.nondecreasing);
    CHECK(bad.submodular);
    CHECK(bad.sum_bounded);
    CHECK_FALSE(bad.marginal_utility);
    REQUIRE(bad.counterexamples.size() == 1);
    CHECK(bad.counterexamples[0].first == "marginal_utility");
}

TEST_CASE("valid-utility checker catches a non-submodular social function") {
    std::vector<ValidUtilityPlayer> players{{"a", {0}, {{}, {0}}}, {"b", {1}, {{}, {1}}}};
    // gamma: 0 for {}, 0 for {0}, 0 for {1}, 5 for {0,1}: supermodular.
    SocialFunction social{SocialFunction::Kind::Table, {}, {0, 0, 0, 5}};
    ValidUtilityGame g(2, players, social, UtilityFunction{});
    auto r = check_valid_utility(g, 1u << 20);
    CHECK_FALSE(r.submodular);
    CHECK(r.nondecreasing);
}
