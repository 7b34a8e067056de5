// 3SAT -> two-sided market game.

#include <algorithm>
#include <cstdlib>

#include "reductions_internal.hpp"
#include "sinkeq/market.hpp"

namespace sinkeq {

CompiledReduction compile_sat_market(const CnfFormula& formula) {
    formula.validate();
    const auto n = formula.variables;
    const auto clauses = static_cast<std::uint32_t>(formula.clauses.size());
    auto X = [](std::uint32_t v) { return static_cast<PlayerId>(v); };
    auto Cp = [&](std::uint32_t j) { return static_cast<PlayerId>(n + 2 * j); };
    auto Kp = [&](std::uint32_t j) { return static_cast<PlayerId>(n + 2 * j + 1); };

    MarketBuilder b;
    std::vector<std::uint32_t> a(clauses), bm(clauses), cm(clauses);
    // r_{j,k} and p_{j,k} for literal k of clause j.
    std::vector<std::array<std::uint32_t, 3>> r(clauses), p(clauses);
    for (std::uint32_t j = 0; j < clauses; ++j) {
        const auto js = std::to_string(j + 1);
        a[j] = b.passive("a_" + js, 305, {Kp(j), Cp(j)});
        bm[j] = b.passive("b_" + js, 8, {Cp(j), Kp(j)});
        cm[j] = b.passive("c_" + js, 310, {Cp(j)});
        for (std::uint32_t k = 0; k < 3; ++k) {
            const auto v = static_cast<std::uint32_t>(std::abs(formula.clauses[j][k])) - 1;
            const auto ks = js + "_" + std::to_string(k + 1);
            r[j][k] = b.passive("r_" + ks, 100, {X(v), Kp(j)});
            p[j][k] = b.passive("p_" + ks, 100, {X(v)});
        }
    }
    for (std::uint32_t v = 0; v < n; ++v) b.add_player("X_" + std::to_string(v + 1));
    for (std::uint32_t j = 0; j < clauses; ++j) {
        b.add_player("C_" + std::to_string(j + 1));
        b.add_player("K_" + std::to_string(j + 1));
    }
    // zero claims r on literals x_i and p on literals not-x_i, so zero reads as x_i = true.
    for (std::uint32_t v = 0; v < n; ++v) {
        std::vector<std::uint32_t> zero, one;
        for (std::uint32_t j = 0; j < clauses; ++j)
            for (std::uint32_t k = 0; k < 3; ++k) {
                const auto lit = formula.clauses[j][k];
                if (static_cast<std::uint32_t>(std::abs(lit)) - 1 != v) continue;
                zero.push_back(lit > 0 ? r[j][k] : p[j][k]);
                one.push_back(lit > 0 ? p[j][k] : r[j][k]);
            }
        std::sort(zero.begin(), zero.end());
        std::sort(one.begin(), one.end());
        b.add_strategy(X(v), "zero", std::move(zero));
        b.add_strategy(X(v), "one", std::move(one));
    }
    for (std::uint32_t j = 0; j < clauses; ++j) {
        b.add_strategy(Cp(j), "zero", {a[j], bm[j]});
        b.add_strategy(Cp(j), "one", {cm[j]});
        b.add_strategy(Kp(j), "zero", {a[j]});
        std::vector<std::uint32_t> one{bm[j], r[j][0], r[j][1], r[j][2]};
        std::sort(one.begin(), one.end());
        b.add_strategy(Kp(j), "one", std::move(one));
    }

    CompiledReduction c;
    c.kind = ReductionKind::SatMarket;
    auto game = std::make_shared<MarketGame>(std::move(b).build());
    for (PlayerId i = 0; i < game->num_players(); ++i) c.roles.push_back(game->player_name(i));
    c.initial = StrategyProfile(std::vector<StrategyId>(game->num_players(), 0));
    c.game = std::move(game);
    c.formula = formula;
    return c;
}

}  // namespace sinkeq
