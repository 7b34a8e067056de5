#include "sinkeq/dynamics.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <random>

#include "sinkeq/congestion.hpp"
#include "sinkeq/errors.hpp"

namespace sinkeq {

std::string_view to_string(Semantics s) {
    return s == Semantics::Improvement ? "improvement" : "best-response";
}

Semantics parse_semantics(std::string_view text) {
    if (text == "improvement") return Semantics::Improvement;
    if (text == "best-response") return Semantics::BestResponse;
    throw ConfigError("unknown semantics '" + std::string(text) + "'");
}

namespace {

std::uint64_t env_cap(const char* name, std::uint64_t fallback) {
    const char* raw = std::getenv(name);
    if (!raw || !*raw) return fallback;
    char* end = nullptr;
    const auto v = std::strtoull(raw, &end, 10);
    if (*end != '\0' || v == 0) throw ConfigError(std::string(name) + " must be a positive integer");
    return v;
}

}  // namespace

std::uint64_t default_full_cap() { return env_cap("SINKEQ_CAP", kDefaultFullCap); }
std::uint64_t default_closure_cap() { return env_cap("SINKEQ_CLOSURE_CAP", kDefaultClosureCap); }

// ---------------------------------------------------------------- moves

namespace {

void append_moves(const Game& game, const StrategyProfile& profile, PlayerId player, Semantics semantics,
                  std::vector<Payoff>& scratch, std::vector<Move>& out) {
    game.deviation_utilities(player, profile, scratch);
    const Payoff current = scratch[profile[player]];
    Payoff best = current;
    for (auto u : scratch) best = std::max(best, u);
    if (best == current) return;
    for (StrategyId s = 0; s < scratch.size(); ++s) {
        const Payoff u = scratch[s];
        if (u <= current) continue;
        if (semantics == Semantics::BestResponse && u != best) continue;
        out.push_back(Move{player, s, u});
    }
}

}  // namespace

std::vector<Move> improving_moves(const Game& game, const StrategyProfile& profile, Semantics semantics) {
    game.check_profile(profile);
    std::vector<Move> out;
    std::vector<Payoff> scratch;
    for (PlayerId i = 0; i < game.num_players(); ++i) append_moves(game, profile, i, semantics, scratch, out);
    return out;
}

std::vector<Move> improving_moves_of(const Game& game, const StrategyProfile& profile, PlayerId player,
                                     Semantics semantics) {
    game.check_profile(profile);
    std::vector<Move> out;
    std::vector<Payoff> scratch;
    append_moves(game, profile, player, semantics, scratch, out);
    return out;
}

bool is_pure_ne(const Game& game, const StrategyProfile& profile) {
    game.check_profile(profile);
    std::vector<Payoff> scratch;
    for (PlayerId i = 0; i < game.num_players(); ++i) {
        game.deviation_utilities(i, profile, scratch);
        const Payoff current = scratch[profile[i]];
        for (auto u : scratch)
            if (u > current) return false;
    }
    return true;
}

bool is_alpha_ne(const Game& game, const StrategyProfile& profile, Rational alpha) {
    if (alpha.den <= 0 || alpha.num <= 0 || alpha.num >= alpha.den)
        throw PreconditionError("alpha must lie strictly between 0 and 1");
    game.check_profile(profile);
    StrategyProfile probe = profile;
    for (PlayerId i = 0; i < game.num_players(); ++i) {
        const auto c = game.cost(i, profile);
        if (!c) throw UnsupportedOperation("alpha-NE needs a cost game, got " + std::string(to_string(game.game_class())));
        const __int128 rhs = static_cast<__int128>(alpha.den - alpha.num) * *c;
        for (StrategyId s = 0; s < game.num_strategies(i); ++s) {
            if (s == profile[i]) continue;
            probe.choices[i] = s;
            const __int128 lhs = static_cast<__int128>(alpha.den) * *game.cost(i, probe);
            if (lhs < rhs) return false;
        }
        probe.choices[i] = profile[i];
    }
    return true;
}

// ---------------------------------------------------------------- graphs

std::size_t ExplicitGraph::edge_count() const noexcept {
    std::size_t total = 0;
    for (const auto& e : edges) total += e.size();
    return total;
}

std::optional<std::uint32_t> ExplicitGraph::find(const StrategyProfile& p) const {
    auto it = index.find(p);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

ExplicitGraph forward_closure(const Game& game, const StrategyProfile& start, Semantics semantics,
                              std::uint64_t cap) {
    game.check_profile(start);
    ExplicitGraph g;
    g.states.push_back(start);
    g.index.emplace(start, 0);
    g.edges.emplace_back();
    std::vector<Payoff> scratch;
    std::vector<Move> moves;
    for (std::size_t head = 0; head < g.states.size(); ++head) {
        moves.clear();
        const StrategyProfile current = g.states[head];
        for (PlayerId i = 0; i < game.num_players(); ++i) append_moves(game, current, i, semantics, scratch, moves);
        std::vector<LabeledEdge> out;
        out.reserve(moves.size());
        for (const auto& m : moves) {
            StrategyProfile next = current.with(m.player, m.strategy);
            auto it = g.index.find(next);
            if (it == g.index.end()) {
                if (g.states.size() >= cap) {
                    g.complete = false;
                    g.edges[head] = std::move(out);
                    return g;
                }
                const auto id = static_cast<std::uint32_t>(g.states.size());
                it = g.index.emplace(next, id).first;
                g.states.push_back(std::move(next));
                g.edges.emplace_back();
            }
            out.push_back(LabeledEdge{it->second, m.player});
        }
        g.edges[head] = std::move(out);
    }
    return g;
}

ExplicitGraph full_state_graph(const Game& game, Semantics semantics, std::uint64_t cap) {
    ProfileCodec codec(game.strategy_counts());
    const auto size = codec.space_size();
    if (!size || *size > cap) throw CapExceeded(cap, "profile space too large for full enumeration");
    ExplicitGraph g;
    g.states.resize(*size);
    g.edges.resize(*size);
    std::vector<Payoff> scratch;
    std::vector<Move> moves;
    for (std::uint64_t v = 0; v < *size; ++v) {
        codec.decode_into(v, g.states[v]);
        g.index.emplace(g.states[v], static_cast<std::uint32_t>(v));
        moves.clear();
        for (PlayerId i = 0; i < game.num_players(); ++i) append_moves(game, g.states[v], i, semantics, scratch, moves);
        for (const auto& m : moves)
            g.edges[v].push_back(
                LabeledEdge{static_cast<std::uint32_t>(codec.encode(g.states[v].with(m.player, m.strategy))), m.player});
    }
    return g;
}

namespace {

using SuccFn = std::function<void(std::uint32_t, std::vector<std::uint32_t>&)>;

struct TarjanResult {
    std::vector<std::uint32_t> component;  // vertex -> component id
    std::uint32_t count = 0;
};

TarjanResult tarjan(std::uint32_t n, const SuccFn& successors) {
    constexpr std::uint32_t kUnvisited = 0xffffffffu;
    std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    TarjanResult result;
    result.component.assign(n, 0);

    struct Frame {
        std::uint32_t v;
        std::vector<std::uint32_t> succ;
        std::size_t pos = 0;
    };
    std::vector<Frame> frames;
    std::uint32_t counter = 0;

    auto enter = [&](std::uint32_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        Frame f{v, {}, 0};
        successors(v, f.succ);
        frames.push_back(std::move(f));
    };

    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != kUnvisited) continue;
        enter(root);
        while (!frames.empty()) {
            auto& f = frames.back();
            if (f.pos < f.succ.size()) {
                const auto w = f.succ[f.pos++];
                if (index[w] == kUnvisited) {
                    enter(w);
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const auto v = f.v;
            frames.pop_back();
            if (low[v] == index[v]) {
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    result.component[w] = result.count;
                } while (w != v);
                ++result.count;
            }
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
    }
    return result;
}

std::vector<std::vector<std::uint32_t>> group_components(const TarjanResult& t) {
    std::vector<std::vector<std::uint32_t>> comps(t.count);
    for (std::uint32_t v = 0; v < t.component.size(); ++v) comps[t.component[v]].push_back(v);
    // Members are already ascending; order components by smallest member.
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

SuccFn explicit_successors(const ExplicitGraph& g) {
    return [&g](std::uint32_t v, std::vector<std::uint32_t>& out) {
        out.clear();
        for (const auto& e : g.edges[v]) out.push_back(e.target);
    };
}

}  // namespace

std::vector<std::vector<std::uint32_t>> sccs(const ExplicitGraph& graph) {
    return group_components(tarjan(static_cast<std::uint32_t>(graph.size()), explicit_successors(graph)));
}

std::vector<bool> bottom_flags(const ExplicitGraph& graph, const std::vector<std::vector<std::uint32_t>>& components) {
    std::vector<std::uint32_t> comp(graph.size());
    for (std::uint32_t c = 0; c < components.size(); ++c)
        for (auto v : components[c]) comp[v] = c;
    std::vector<bool> bottom_comp(components.size(), true);
    for (std::uint32_t v = 0; v < graph.size(); ++v)
        for (const auto& e : graph.edges[v])
            if (comp[e.target] != comp[v]) bottom_comp[comp[v]] = false;
    std::vector<bool> flags(graph.size());
    for (std::uint32_t v = 0; v < graph.size(); ++v) flags[v] = bottom_comp[comp[v]];
    return flags;
}

std::vector<SinkEquilibrium> sinks(const Game& game, Semantics semantics, std::uint64_t cap, SearchStats* stats) {
    ProfileCodec codec(game.strategy_counts());
    const auto size = codec.space_size();
    if (!size || *size > cap) throw CapExceeded(cap, "profile space too large for sink enumeration");
    const auto n = static_cast<std::uint32_t>(*size);

    std::vector<std::int64_t> place(game.num_players(), 1);
    for (PlayerId i = 1; i < place.size(); ++i) place[i] = place[i - 1] * codec.radices()[i - 1];
    std::uint64_t edge_total = 0;
    StrategyProfile scratch_profile;
    std::vector<Payoff> scratch;
    std::vector<Move> moves;
    auto successors = [&](std::uint32_t v, std::vector<std::uint32_t>& out) {
        out.clear();
        moves.clear();
        codec.decode_into(v, scratch_profile);
        for (PlayerId i = 0; i < game.num_players(); ++i)
            append_moves(game, scratch_profile, i, semantics, scratch, moves);
        for (const auto& m : moves) {
            const std::int64_t delta = static_cast<std::int64_t>(m.strategy) - scratch_profile[m.player];
            out.push_back(static_cast<std::uint32_t>(static_cast<std::int64_t>(v) + delta * place[m.player]));
        }
    };
    const auto t = tarjan(n, [&](std::uint32_t v, std::vector<std::uint32_t>& out) {
        successors(v, out);
        edge_total += out.size();
    });

    std::vector<bool> bottom(t.count, true);
    std::vector<std::uint32_t> succ;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (!bottom[t.component[v]]) continue;
        successors(v, succ);
        for (auto w : succ)
            if (t.component[w] != t.component[v]) {
                bottom[t.component[v]] = false;
                break;
            }
    }
    std::vector<SinkEquilibrium> out;
    for (const auto& comp : group_components(t)) {
        if (!bottom[t.component[comp.front()]]) continue;
        SinkEquilibrium s;
        for (auto v : comp) s.members.push_back(codec.decode(v));
        out.push_back(std::move(s));
    }
    if (stats) {
        stats->states = n;
        stats->edges = edge_total;
        stats->components = t.count;
    }
    return out;
}

bool in_a_sink_within(const ExplicitGraph& closure, std::uint32_t vertex) {
    const auto n = closure.size();
    std::vector<bool> forward(n, false), backward(n, false);
    std::deque<std::uint32_t> queue{vertex};
    forward[vertex] = true;
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        for (const auto& e : closure.edges[v])
            if (!forward[e.target]) {
                forward[e.target] = true;
                queue.push_back(e.target);
            }
    }
    std::vector<std::vector<std::uint32_t>> reverse(n);
    for (std::uint32_t v = 0; v < n; ++v)
        if (forward[v])
            for (const auto& e : closure.edges[v]) reverse[e.target].push_back(v);
    queue.push_back(vertex);
    backward[vertex] = true;
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop_front();
        for (auto u : reverse[v])
            if (!backward[u]) {
                backward[u] = true;
                queue.push_back(u);
            }
    }
    for (std::uint32_t v = 0; v < n; ++v)
        if (forward[v] && !backward[v]) return false;
    return true;
}

InSinkResult in_a_sink(const Game& game, const StrategyProfile& profile, Semantics semantics, std::uint64_t cap) {
    const auto closure = forward_closure(game, profile, semantics, cap);
    InSinkResult r;
    r.explored = closure.size();
    r.edges = closure.edge_count();
    r.cap = cap;
    if (closure.complete) r.answer = in_a_sink_within(closure, 0);
    return r;
}

std::optional<StrategyProfile> find_pure_ne(const Game& game, std::uint64_t cap, std::uint64_t* scanned) {
    ProfileCodec codec(game.strategy_counts());
    const auto size = codec.space_size();
    if (!size || *size > cap) throw CapExceeded(cap, "profile space too large for exhaustive scan");
    StrategyProfile p;
    for (std::uint64_t v = 0; v < *size; ++v) {
        codec.decode_into(v, p);
        if (is_pure_ne(game, p)) {
            if (scanned) *scanned = v + 1;
            return p;
        }
    }
    if (scanned) *scanned = *size;
    return std::nullopt;
}

bool has_singleton_sink(const Game& game, std::uint64_t cap) { return find_pure_ne(game, cap).has_value(); }

bool has_non_singleton_sink(const Game& game, Semantics semantics, std::uint64_t cap) {
    const auto all = sinks(game, semantics, cap);
    return std::any_of(all.begin(), all.end(), [](const SinkEquilibrium& s) { return !s.singleton(); });
}

// ---------------------------------------------------------------- walks

WalkResult simulate_walk(const Game& game, const StrategyProfile& start, const WalkPolicy& policy,
                         const WalkOptions& options) {
    game.check_profile(start);
    WalkResult result;
    const auto closure = forward_closure(game, start, options.semantics, options.closure_cap);
    std::vector<bool> bottom;
    if (closure.complete) {
        bottom = bottom_flags(closure, sccs(closure));
    } else {
        result.sink_known = false;
    }
    std::mt19937_64 rng(policy.seed);

    StrategyProfile current = start;
    result.path.push_back(current);
    bool in_sink = false;
    for (std::size_t step = 0;; ++step) {
        std::vector<Move> moves;
        if (policy.kind == WalkPolicy::Kind::PriorityList) {
            for (auto p : policy.order) {
                moves = improving_moves_of(game, current, p, options.semantics);
                if (!moves.empty()) break;
            }
        } else {
            moves = improving_moves(game, current, options.semantics);
        }
        in_sink = result.sink_known ? bool(bottom[*closure.find(current)]) : moves.empty();
        if (in_sink && !result.entered_sink_at) result.entered_sink_at = step;
        if ((in_sink && options.stop_at_sink) || step == options.max_steps || moves.empty()) break;

        std::size_t pick = 0;
        if (policy.kind == WalkPolicy::Kind::RandomImprover) {
            std::uniform_int_distribution<std::size_t> dist(0, moves.size() - 1);
            pick = dist(rng);
        }
        const auto& m = moves[pick];
        result.moves.push_back(WalkStep{m.player, current[m.player], m.strategy});
        current[m.player] = m.strategy;
        result.path.push_back(current);
    }
    result.outcome = in_sink ? WalkResult::Outcome::ReachedSinkState : WalkResult::Outcome::StillMoving;
    return result;
}

// ---------------------------------------------------------------- potential

Payoff rosenthal_potential(const CongestionGame& game, const StrategyProfile& profile) {
    if (game.mode() != DelayMode::Shared || !game.unweighted())
        throw UnsupportedOperation("Rosenthal potential needs an unweighted shared-delay congestion game");
    game.check_profile(profile);
    const auto loads = game.loads(profile);
    Payoff phi = 0;
    for (std::uint32_t e = 0; e < loads.size(); ++e)
        for (Payoff j = 1; j <= loads[e]; ++j) phi += game.resources()[e].delay.at(static_cast<std::uint64_t>(j));
    return phi;
}

// ---------------------------------------------------------------- DOT

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string export_dot(const Game& game, const ExplicitGraph& graph, const DotOptions& options) {
    std::vector<bool> bottom;
    if (graph.complete) bottom = bottom_flags(graph, sccs(graph));
    std::string out = "digraph " + options.graph_name + " {\n";
    for (std::uint32_t v = 0; v < graph.size(); ++v) {
        std::string label = std::to_string(v);
        if (options.decode_names) {
            label += ": ";
            for (PlayerId i = 0; i < game.num_players(); ++i) {
                if (i) label += ",";
                label += game.strategy_name(i, graph.states[v][i]);
            }
        }
        out += "  n" + std::to_string(v) + " [label=\"" + dot_escape(label) + "\"";
        if (!bottom.empty() && bottom[v]) out += ", peripheries=2, sink=true";
        out += "];\n";
    }
    for (std::uint32_t v = 0; v < graph.size(); ++v)
        for (const auto& e : graph.edges[v]) {
            const std::string who = options.decode_names ? game.player_name(e.player) : std::to_string(e.player);
            out += "  n" + std::to_string(v) + " -> n" + std::to_string(e.target) + " [label=\"" + dot_escape(who) +
                   "\"];\n";
        }
    return out + "}\n";
}

// ---------------------------------------------------------------- isomorphism

IsomorphismResult compare_closures(const ExplicitGraph& a, const ExplicitGraph& b,
                                   const std::function<StrategyProfile(const StrategyProfile&)>& map,
                                   const std::vector<PlayerId>& player_map) {
    IsomorphismResult r;
    auto fail = [&](std::string why) {
        r.isomorphic = false;
        r.mismatch = std::move(why);
        return r;
    };
    if (!a.complete || !b.complete) return fail("closure incomplete");
    if (a.size() != b.size())
        return fail("state counts differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    std::vector<std::uint32_t> image(a.size());
    std::vector<bool> hit(b.size(), false);
    for (std::uint32_t v = 0; v < a.size(); ++v) {
        const auto w = b.find(map(a.states[v]));
        if (!w) return fail("state " + std::to_string(v) + " " + to_string(a.states[v]) + " has no image");
        if (hit[*w]) return fail("two states map onto " + std::to_string(*w));
        hit[*w] = true;
        image[v] = *w;
    }
    auto key = [](const LabeledEdge& e) { return std::pair{e.target, e.player}; };
    for (std::uint32_t v = 0; v < a.size(); ++v) {
        std::vector<std::pair<std::uint32_t, PlayerId>> lhs, rhs;
        for (const auto& e : a.edges[v]) lhs.emplace_back(image[e.target], player_map.at(e.player));
        for (const auto& e : b.edges[image[v]]) rhs.push_back(key(e));
        std::sort(lhs.begin(), lhs.end());
        std::sort(rhs.begin(), rhs.end());
        if (lhs != rhs)
            return fail("edges differ at state " + std::to_string(v) + " " + to_string(a.states[v]) + ": " +
                        std::to_string(lhs.size()) + " vs " + std::to_string(rhs.size()) + " successors");
    }
    return r;
}

// ---------------------------------------------------------------- frozen view

FrozenPlayersGame::FrozenPlayersGame(GamePtr base, std::vector<PlayerId> frozen)
    : base_(std::move(base)), frozen_(base_->num_players(), false) {
    for (auto p : frozen) {
        if (p >= frozen_.size()) throw PreconditionError("frozen player " + std::to_string(p) + " out of range");
        frozen_[p] = true;
    }
}

Payoff FrozenPlayersGame::utility(PlayerId player, const StrategyProfile& profile) const {
    return frozen_.at(player) ? 0 : base_->utility(player, profile);
}

void FrozenPlayersGame::deviation_utilities(PlayerId player, const StrategyProfile& profile,
                                            std::vector<Payoff>& out) const {
    if (frozen_.at(player)) {
        out.assign(base_->num_strategies(player), 0);
        return;
    }
    base_->deviation_utilities(player, profile, out);
}

std::optional<Payoff> FrozenPlayersGame::cost(PlayerId player, const StrategyProfile& profile) const {
    return frozen_.at(player) ? std::optional<Payoff>(0) : base_->cost(player, profile);
}

}  // namespace sinkeq
