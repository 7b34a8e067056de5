#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these call into the engine's graph code.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <tuple>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "sinkeq/congestion.hpp"
#include "sinkeq/game.hpp"
#include "sinkeq/machine.hpp"
#include "sinkeq/market.hpp"
#include "sinkeq/reductions.hpp"

namespace oracle {

using namespace sinkeq;

inline std::vector<StrategyProfile> all_profiles(const std::vector<std::uint32_t>& counts) {
    std::vector<StrategyProfile> out;
    StrategyProfile p(std::vector<StrategyId>(counts.size(), 0));
    while (true) {
        out.push_back(p);
        std::size_t i = 0;
        while (i < counts.size() && ++p[i] == counts[i]) p[i++] = 0;
        if (i == counts.size()) break;
    }
    return out;
}

// ---------------------------------------------------------------- congestion

struct RawCongestion {
    bool player_specific = false;
    std::vector<Payoff> weights;
    std::vector<std::vector<std::vector<std::uint32_t>>> strategies;  // [player][strategy] -> resources
    std::vector<std::vector<Payoff>> delay;                          // shared: [resource][load-1]
    std::vector<std::vector<std::vector<Payoff>>> pdelay;            // player-specific: [resource][player][count-1]
};

inline Payoff raw_cost(const RawCongestion& g, PlayerId i, const StrategyProfile& s) {
    Payoff total = 0;
    for (auto e : g.strategies[i][s[i]]) {
        Payoff load = 0;
        std::size_t users = 0;
        for (PlayerId j = 0; j < g.strategies.size(); ++j) {
            const auto& set = g.strategies[j][s[j]];
            if (std::find(set.begin(), set.end(), e) != set.end()) {
                load += g.weights[j];
                ++users;
            }
        }
        total += g.player_specific ? g.pdelay[e][i][users - 1] : g.delay[e][load - 1];
    }
    return total;
}

inline CongestionGame build(const RawCongestion& g) {
    CongestionBuilder b(g.player_specific ? DelayMode::PlayerSpecific : DelayMode::Shared);
    const auto resources = g.player_specific ? g.pdelay.size() : g.delay.size();
    for (std::uint32_t e = 0; e < resources; ++e) {
        DelayTable t;
        if (!g.player_specific) t.values = g.delay[e];
        b.resource("e" + std::to_string(e), t);
    }
    for (PlayerId i = 0; i < g.strategies.size(); ++i) {
        b.add_player("p" + std::to_string(i), g.weights[i]);
        for (std::size_t s = 0; s < g.strategies[i].size(); ++s) b.add_strategy(i, "s" + std::to_string(s), g.strategies[i][s]);
    }
    if (g.player_specific)
        for (std::uint32_t e = 0; e < resources; ++e)
            for (PlayerId i = 0; i < g.strategies.size(); ++i) {
                DelayTable t;
                t.values = g.pdelay[e][i];
                b.set_player_delay(e, i, t);
            }
    return std::move(b).build();
}

/// Random instance; every strategy is a non-empty resource subset.
inline RawCongestion random_congestion(std::mt19937_64& rng, std::uint32_t max_players, std::uint32_t max_resources,
                                       std::uint32_t max_strategies, bool weighted, bool player_specific) {
    auto pick = [&](std::uint32_t lo, std::uint32_t hi) { return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng); };
    RawCongestion g;
    g.player_specific = player_specific;
    const auto n = pick(1, max_players), m = pick(1, max_resources);
    for (PlayerId i = 0; i < n; ++i) {
        g.weights.push_back(weighted && !player_specific ? pick(1, 3) : 1);
        std::set<std::vector<std::uint32_t>> seen;
        const auto k = pick(1, max_strategies);
        std::vector<std::vector<std::uint32_t>> list;
        for (std::uint32_t tries = 0; list.size() < k && tries < 50; ++tries) {
            std::vector<std::uint32_t> set;
            for (std::uint32_t e = 0; e < m; ++e)
                if (pick(0, 1)) set.push_back(e);
            if (set.empty()) set.push_back(pick(0, m - 1));
            if (seen.insert(set).second) list.push_back(set);
        }
        g.strategies.push_back(std::move(list));
    }
    Payoff total = 0;
    for (auto w : g.weights) total += w;
    if (player_specific) {
        g.pdelay.assign(m, std::vector<std::vector<Payoff>>(n));
        for (auto& per : g.pdelay)
            for (auto& t : per)
                for (std::uint32_t l = 0; l < n; ++l) t.push_back(pick(0, 9));
    } else {
        g.delay.assign(m, {});
        for (auto& t : g.delay)
            for (Payoff l = 0; l < total; ++l) t.push_back(pick(0, 9));
    }
    return g;
}

// ---------------------------------------------------------------- tables

inline std::shared_ptr<TableGame> random_table(std::mt19937_64& rng, std::uint64_t max_profiles, Payoff max_payoff = 4) {
    auto pick = [&](std::uint32_t lo, std::uint32_t hi) { return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng); };
    std::vector<std::uint32_t> counts;
    std::uint64_t size = 1;
    const auto n = pick(1, 4);
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto limit = static_cast<std::uint32_t>(std::min<std::uint64_t>(4, max_profiles / size));
        if (limit < 1) break;
        const auto k = pick(1, std::max<std::uint32_t>(1, limit));
        counts.push_back(k);
        size *= k;
    }
    if (counts.empty()) counts.push_back(1);
    std::vector<std::vector<Payoff>> payoffs(size, std::vector<Payoff>(counts.size()));
    for (auto& row : payoffs)
        for (auto& u : row) u = static_cast<Payoff>(pick(0, static_cast<std::uint32_t>(max_payoff)));
    return std::make_shared<TableGame>(counts, payoffs);
}

inline std::uint64_t encode(const std::vector<std::uint32_t>& counts, const StrategyProfile& p) {
    std::uint64_t index = 0, place = 1;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        index += p[i] * place;
        place *= counts[i];
    }
    return index;
}

/// Improvement (or best-response) successors read straight from the payoff table.
inline std::vector<std::vector<std::uint64_t>> table_edges(const TableGame& g, bool best_response) {
    const auto counts = g.strategy_counts();
    const auto profiles = all_profiles(counts);
    std::vector<std::vector<std::uint64_t>> adj(profiles.size());
    for (const auto& p : profiles) {
        const auto v = encode(counts, p);
        for (PlayerId i = 0; i < counts.size(); ++i) {
            const Payoff cur = g.payoffs()[v][i];
            Payoff best = cur;
            for (StrategyId s = 0; s < counts[i]; ++s) best = std::max(best, g.payoffs()[encode(counts, p.with(i, s))][i]);
            for (StrategyId s = 0; s < counts[i]; ++s) {
                const auto w = encode(counts, p.with(i, s));
                const Payoff u = g.payoffs()[w][i];
                if (u > cur && (!best_response || u == best)) adj[v].push_back(w);
            }
        }
    }
    return adj;
}

/// Bottom SCCs by Floyd-Warshall reachability; each sorted, list sorted.
inline std::vector<std::vector<std::uint64_t>> bottom_sccs(const std::vector<std::vector<std::uint64_t>>& adj) {
    const auto n = adj.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t v = 0; v < n; ++v) {
        reach[v][v] = true;
        for (auto w : adj[v]) reach[v][w] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;
    std::vector<std::vector<std::uint64_t>> out;
    std::vector<bool> done(n, false);
    for (std::size_t v = 0; v < n; ++v) {
        if (done[v]) continue;
        std::vector<std::uint64_t> comp;
        for (std::size_t w = 0; w < n; ++w)
            if (reach[v][w] && reach[w][v]) comp.push_back(w);
        for (auto w : comp) done[w] = true;
        bool bottom = true;
        for (std::size_t w = 0; w < n; ++w)
            if (reach[v][w] && !reach[w][v]) bottom = false;
        if (bottom) out.push_back(comp);
    }
    return out;
}

/// All strongly connected components, same conventions.
inline std::vector<std::vector<std::uint64_t>> all_sccs(const std::vector<std::vector<std::uint64_t>>& adj) {
    const auto n = adj.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t v = 0; v < n; ++v) {
        reach[v][v] = true;
        for (auto w : adj[v]) reach[v][w] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;
    std::vector<std::vector<std::uint64_t>> out;
    std::vector<bool> done(n, false);
    for (std::size_t v = 0; v < n; ++v) {
        if (done[v]) continue;
        std::vector<std::uint64_t> comp;
        for (std::size_t w = 0; w < n; ++w)
            if (reach[v][w] && reach[w][v]) comp.push_back(w), done[w] = true;
        out.push_back(comp);
    }
    return out;
}

// ---------------------------------------------------------------- markets

/// Winner of every passive agent by walking its preference list.
inline std::vector<std::optional<PlayerId>> winners(const MarketGame& g, const StrategyProfile& s) {
    std::vector<std::optional<PlayerId>> out(g.passive().size());
    for (std::uint32_t y = 0; y < g.passive().size(); ++y)
        for (auto x : g.passive()[y].preference) {
            const auto& d = g.players()[x].strategies[s[x]].demand;
            if (std::find(d.begin(), d.end(), y) != d.end()) {
                out[y] = x;
                break;
            }
        }
    return out;
}

inline Payoff market_value(const MarketGame& g, PlayerId x, const StrategyProfile& s) {
    Payoff total = 0;
    const auto w = winners(g, s);
    for (std::uint32_t y = 0; y < w.size(); ++y)
        if (w[y] == x) total += g.passive()[y].value;
    return total;
}

// ---------------------------------------------------------------- SAT

inline bool satisfiable(const CnfFormula& f) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.variables); ++mask) {
        bool all = true;
        for (const auto& c : f.clauses) {
            bool any = false;
            for (auto lit : c) {
                const bool value = (mask >> (std::abs(lit) - 1)) & 1;
                any = any || (lit > 0 ? value : !value);
            }
            all = all && any;
        }
        if (all) return true;
    }
    return false;
}

inline CnfFormula random_formula(std::mt19937_64& rng, std::uint32_t variables, std::uint32_t max_clauses) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    CnfFormula f;
    f.variables = variables;
    const int m = pick(1, static_cast<int>(max_clauses));
    for (int j = 0; j < m; ++j) {
        std::array<std::int32_t, 3> c{};
        for (auto& lit : c) lit = pick(1, static_cast<int>(variables)) * (pick(0, 1) ? 1 : -1);
        f.clauses.push_back(c);
    }
    return f;
}

// ---------------------------------------------------------------- machines

enum class Verdict { Accepts, Rejects, Breaches, Loops };

/// M on x inside cells 0..t, with its own step loop and cycle detection.
inline Verdict direct_run(const TMSpec& m, const std::vector<Symbol>& x, std::uint32_t t) {
    std::vector<Symbol> tape(t + 1, Symbol::Blank);
    std::copy(x.begin(), x.end(), tape.begin());
    std::uint32_t q = m.initial;
    std::int64_t head = 0;
    std::set<std::tuple<std::uint32_t, std::int64_t, std::vector<Symbol>>> seen;
    while (true) {
        if (q == m.halt) return Verdict::Rejects;
        if (m.accept && q == *m.accept) return Verdict::Accepts;
        if (!seen.emplace(q, head, tape).second) return Verdict::Loops;
        const auto& tr = *m.delta[q * 3 + static_cast<std::uint32_t>(tape[head])];
        tape[head] = tr.write;
        q = tr.next;
        head += static_cast<int>(tr.move);
        if (head < 0 || head > static_cast<std::int64_t>(t)) return q == m.halt ? Verdict::Rejects : Verdict::Breaches;
    }
}

/// Random machine with `work` non-final states plus reject (q_h) and accept.
inline TMSpec random_machine(std::mt19937_64& rng, std::uint32_t work, std::uint32_t tape_bound) {
    auto pick = [&](std::uint32_t lo, std::uint32_t hi) { return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng); };
    std::vector<std::string> names;
    for (std::uint32_t q = 0; q < work; ++q) names.push_back("w" + std::to_string(q));
    names.push_back("rej");
    names.push_back("acc");
    TMSpec m(names, 0, work, tape_bound, work + 1);
    for (std::uint32_t q = 0; q < work; ++q)
        for (std::uint32_t s = 0; s < 3; ++s)
            m.set(q, static_cast<Symbol>(s),
                  Transition{pick(0, work + 1), static_cast<Symbol>(pick(0, 2)), static_cast<HeadMove>(static_cast<int>(pick(0, 2)) - 1)});
    return m;
}

}  // namespace oracle
