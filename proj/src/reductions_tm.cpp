// TM gadget shared by the weighted, player-specific and market compiles.

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

#include "reductions_internal.hpp"
#include "sinkeq/congestion.hpp"
#include "sinkeq/dynamics.hpp"
#include "sinkeq/market.hpp"

namespace sinkeq {
namespace detail {

std::vector<ControlKey> control_keys(const TMSpec& spec) {
    std::vector<ControlKey> keys;
    const auto tp = static_cast<std::int64_t>(spec.tape_bound);
    for (std::uint32_t q = 0; q < spec.num_states(); ++q)
        for (std::int64_t i = 0; i <= tp; ++i)
            for (std::int64_t i2 = i - 1; i2 <= i + 1; ++i2) {
                if (i2 < 0 || i2 > tp) continue;
                for (std::uint32_t s = 0; s < kAlphabetSize; ++s)
                    keys.push_back(ControlKey{q, static_cast<std::uint32_t>(i2), static_cast<std::uint32_t>(i), s});
            }
    return keys;
}

std::string key_name(const TMSpec& spec, const ControlKey& k) {
    return spec.states[k.q] + "_" + std::to_string(k.i2) + "_" + std::to_string(k.i) + "_" + sym_name(k.s);
}

TmLayout::TmLayout(const TMSpec& spec) {
    controls = control_keys(spec).size();
    first_w = first_cell + spec.tape_bound + 1;
    first_v = first_w + static_cast<PlayerId>(controls);
    control_d = first_v + static_cast<PlayerId>(controls);
    transition = control_d + 1;
    clock = transition + 1;
}

namespace {

struct Element {
    enum class Kind { Alpha, Beta, TriggerMain, TriggerClock, ClockWait, Fixed };
    std::string name;
    Kind kind = Kind::Fixed;
    PlayerId owner = 0;              // Alpha, Beta, and guard markets
    std::optional<Payoff> cost;      // Fixed: constant delay; nullopt = market only
    std::optional<Payoff> value;     // Fixed: market value; nullopt = congestion only
};

struct GStrategy {
    std::string name;
    std::vector<std::uint32_t> elements;
};

struct GPlayer {
    std::string role;
    Payoff weight = 1;
    std::vector<GStrategy> strategies;
};

struct Gadget {
    std::vector<Element> elements;
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<GPlayer> players;
    Payoff M = 0;
    Payoff N = 0;

    std::uint32_t element(const std::string& name, Element::Kind kind, PlayerId owner = 0,
                          std::optional<Payoff> cost = std::nullopt, std::optional<Payoff> value = std::nullopt) {
        auto [it, fresh] = index.emplace(name, static_cast<std::uint32_t>(elements.size()));
        if (fresh) elements.push_back(Element{name, kind, owner, cost, value});
        return it->second;
    }
    std::uint32_t alpha(const std::string& name, PlayerId owner) { return element("a_" + name, Element::Kind::Alpha, owner); }
    std::uint32_t beta(const std::string& name, PlayerId owner) { return element("b_" + name, Element::Kind::Beta, owner); }
};

Gadget build_gadget(const TMSpec& spec, Payoff M) {
    spec.validate();
    if (spec.accept) throw ConfigError("TM gadgets take M' directly; the machine must not have an accepting state");
    if (M <= 110) throw ConfigError("penalty M must exceed 110");

    const TmLayout L(spec);
    const auto keys = control_keys(spec);
    const auto Q = static_cast<Payoff>(spec.num_states());
    const auto tp = spec.tape_bound;
    const auto C = static_cast<Payoff>(keys.size());
    const Payoff K = Q + static_cast<Payoff>(tp) + static_cast<Payoff>(kAlphabetSize) - 1;

    Gadget g;
    g.M = M;
    g.N = 2 * C * M;
    g.players.resize(L.clock + 1);

    const auto qn = [&](std::uint32_t q) { return spec.states[q]; };
    auto a_state = [&](std::uint32_t q) { return g.alpha("state_" + qn(q), L.state); };
    auto b_state = [&](std::uint32_t q) { return g.beta("state_" + qn(q), L.state); };
    auto a_pos = [&](std::uint32_t i) { return g.alpha("pos_" + std::to_string(i), L.position); };
    auto b_pos = [&](std::uint32_t i) { return g.beta("pos_" + std::to_string(i), L.position); };
    auto a_cell = [&](std::uint32_t i, std::uint32_t s) {
        return g.alpha("cell" + std::to_string(i) + "_" + sym_name(s), L.cell(i));
    };
    auto b_cell = [&](std::uint32_t i, std::uint32_t s) {
        return g.beta("cell" + std::to_string(i) + "_" + sym_name(s), L.cell(i));
    };
    auto ctl = [&](char which, int bit, bool is_alpha, std::size_t k) {
        const PlayerId owner = static_cast<PlayerId>((which == 'W' ? L.first_w : L.first_v) + k);
        const std::string name = std::to_string(bit) + "_" + which + "_" + key_name(spec, keys[k]);
        return is_alpha ? g.alpha(name, owner) : g.beta(name, owner);
    };
    auto d_res = [&](int bit, bool is_alpha) {
        return is_alpha ? g.alpha(std::to_string(bit) + "_D", L.control_d) : g.beta(std::to_string(bit) + "_D", L.control_d);
    };

    // Configuration players.
    auto& state = g.players[L.state];
    state.role = "state";
    for (std::uint32_t q = 0; q < spec.num_states(); ++q) state.strategies.push_back({qn(q), {a_state(q), b_state(q)}});
    auto& position = g.players[L.position];
    position.role = "position";
    for (std::uint32_t i = 0; i <= tp; ++i) position.strategies.push_back({std::to_string(i), {a_pos(i), b_pos(i)}});
    for (std::uint32_t i = 0; i <= tp; ++i) {
        auto& cell = g.players[L.cell(i)];
        cell.role = "cell_" + std::to_string(i);
        for (std::uint32_t s = 0; s < kAlphabetSize; ++s) cell.strategies.push_back({sym_name(s), {a_cell(i, s), b_cell(i, s)}});
    }

    // Control players.
    for (std::size_t k = 0; k < keys.size(); ++k)
        for (char which : {'W', 'V'}) {
            auto& p = g.players[(which == 'W' ? L.first_w : L.first_v) + k];
            p.role = std::string("control_") + which + "_" + key_name(spec, keys[k]);
            p.strategies.push_back({"Zero", {ctl(which, 0, false, k), ctl(which, 0, true, k)}});
            p.strategies.push_back({"One", {ctl(which, 1, false, k), ctl(which, 1, true, k)}});
        }
    auto& d = g.players[L.control_d];
    d.role = "control_D";
    const auto guard0 = g.element("guard0_D", Element::Kind::Fixed, L.control_d, std::nullopt, 1);
    const auto guard1 = g.element("guard1_D", Element::Kind::Fixed, L.control_d, std::nullopt, 1);
    d.strategies.push_back({"Zero", {d_res(0, false), d_res(0, true), guard0}});
    d.strategies.push_back({"One", {d_res(1, false), d_res(1, true), guard1}});

    // Transition player.
    const auto trigger_main = g.element("TriggerMain", Element::Kind::TriggerMain);
    const auto trigger_clock = g.element("TriggerClock", Element::Kind::TriggerClock);
    const auto nn_read = g.element("nn_read", Element::Kind::Fixed, 0, 80, g.N - K * M + 20);
    const auto nn_write = g.element("nn_write", Element::Kind::Fixed, 0, 60, g.N - M + 40);
    const auto nn_verify = g.element("nn_verify", Element::Kind::Fixed, 0, 40, g.N - K * M + 60);
    const auto nn_done = g.element("nn_done", Element::Kind::Fixed, 0, 10, g.N - M + 20 - 2 * C);
    const auto nn_halt = g.element("nn_halt", Element::Kind::Fixed, 0, std::nullopt, g.N + 101 - (Q - 1) * M);

    std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t>, std::size_t> key_index;
    for (std::size_t k = 0; k < keys.size(); ++k) key_index[{keys[k].q, keys[k].i2, keys[k].i, keys[k].s}] = k;

    auto& t = g.players[L.transition];
    t.role = "transition";
    {
        GStrategy wait{"Wait", {}};
        for (std::size_t k = 0; k < keys.size(); ++k) {
            wait.elements.push_back(ctl('W', 1, false, k));
            wait.elements.push_back(ctl('V', 1, false, k));
        }
        wait.elements.push_back(d_res(1, true));
        wait.elements.push_back(trigger_main);
        t.strategies.push_back(std::move(wait));
    }
    for (std::uint32_t q = 0; q < spec.num_states(); ++q) {
        if (spec.is_final(q)) continue;
        for (std::uint32_t i = 0; i <= tp; ++i)
            for (std::uint32_t s = 0; s < kAlphabetSize; ++s) {
                GStrategy read{"Read_" + qn(q) + "_" + std::to_string(i) + "_" + sym_name(s), {}};
                for (std::uint32_t p = 0; p < spec.num_states(); ++p)
                    if (p != q) read.elements.push_back(b_state(p));
                for (std::uint32_t j = 0; j <= tp; ++j)
                    if (j != i) read.elements.push_back(b_pos(j));
                for (std::uint32_t o = 0; o < kAlphabetSize; ++o)
                    if (o != s) read.elements.push_back(b_cell(i, o));
                read.elements.push_back(d_res(1, false));
                const auto& tr = *spec.transition(q, static_cast<Symbol>(s));
                const auto i2 = static_cast<std::int64_t>(i) + static_cast<int>(tr.move);
                if (i2 >= 0 && i2 <= static_cast<std::int64_t>(tp)) {
                    const auto k = key_index.at({tr.next, static_cast<std::uint32_t>(i2), i, static_cast<std::uint32_t>(tr.write)});
                    read.elements.push_back(ctl('W', 0, true, k));
                }
                read.elements.push_back(nn_read);
                t.strategies.push_back(std::move(read));
            }
    }
    for (std::size_t k = 0; k < keys.size(); ++k) {
        const auto& key = keys[k];
        GStrategy write{"Write_" + key_name(spec, key), {}};
        for (std::uint32_t p = 0; p < spec.num_states(); ++p)
            if (p != key.q) write.elements.push_back(a_state(p));
        for (std::uint32_t j = 0; j <= tp; ++j)
            if (j != key.i2) write.elements.push_back(a_pos(j));
        for (std::uint32_t o = 0; o < kAlphabetSize; ++o)
            if (o != key.s) write.elements.push_back(a_cell(key.i, o));
        write.elements.push_back(ctl('V', 0, true, k));
        write.elements.push_back(ctl('W', 0, false, k));
        write.elements.push_back(nn_write);
        t.strategies.push_back(std::move(write));
    }
    for (std::size_t k = 0; k < keys.size(); ++k) {
        const auto& key = keys[k];
        GStrategy verify{"Verify_" + key_name(spec, key), {}};
        for (std::uint32_t p = 0; p < spec.num_states(); ++p)
            if (p != key.q) verify.elements.push_back(b_state(p));
        for (std::uint32_t j = 0; j <= tp; ++j)
            if (j != key.i2) verify.elements.push_back(b_pos(j));
        for (std::uint32_t o = 0; o < kAlphabetSize; ++o)
            if (o != key.s) verify.elements.push_back(b_cell(key.i, o));
        verify.elements.push_back(ctl('V', 0, false, k));
        verify.elements.push_back(d_res(0, true));
        verify.elements.push_back(nn_verify);
        t.strategies.push_back(std::move(verify));
    }
    {
        GStrategy done{"Done", {trigger_clock, d_res(0, false)}};
        for (std::size_t k = 0; k < keys.size(); ++k) {
            done.elements.push_back(ctl('W', 1, true, k));
            done.elements.push_back(ctl('V', 1, true, k));
        }
        done.elements.push_back(nn_done);
        t.strategies.push_back(std::move(done));
        GStrategy halt{"Halt", {}};
        for (std::uint32_t q = 0; q < spec.num_states(); ++q)
            if (q != spec.halt) halt.elements.push_back(b_state(q));
        halt.elements.push_back(guard0);
        halt.elements.push_back(nn_halt);
        t.strategies.push_back(std::move(halt));
    }

    auto& clock = g.players[L.clock];
    clock.role = "clock";
    clock.weight = 2;
    clock.strategies.push_back({"Trigger", {trigger_main, trigger_clock}});
    clock.strategies.push_back({"Wait", {g.element("ClockWait", Element::Kind::ClockWait, L.clock, 110, 110)}});
    return g;
}

CompiledReduction finish(ReductionKind kind, GamePtr game, const Gadget& g, const TMSpec& spec) {
    CompiledReduction c;
    c.kind = kind;
    c.game = std::move(game);
    c.M = g.M;
    c.N = kind == ReductionKind::Market ? g.N : 0;
    c.machine = spec;
    for (const auto& p : g.players) c.roles.push_back(p.role);
    c.initial = encode_tm(c, initial_config(spec));
    return c;
}

CompiledReduction emit_congestion(const TMSpec& spec, Payoff M, DelayMode mode) {
    const Gadget g = build_gadget(spec, M);
    const TmLayout L(spec);
    CongestionBuilder b(mode);
    std::vector<std::int64_t> res_of(g.elements.size(), -1);
    auto shared_table = [&](const Element& e) -> DelayTable {
        switch (e.kind) {
            case Element::Kind::Alpha: return DelayTable::steps({0, 1});
            case Element::Kind::Beta: return DelayTable::steps({0, M});
            case Element::Kind::TriggerMain: return DelayTable::steps({0, 100, 100});
            case Element::Kind::TriggerClock: return DelayTable::steps({0, 0, 20});
            case Element::Kind::ClockWait: return DelayTable::constant(110);
            case Element::Kind::Fixed: return DelayTable::constant(*e.cost);
        }
        return {};
    };
    for (std::uint32_t x = 0; x < g.elements.size(); ++x)
        if (g.elements[x].kind != Element::Kind::Fixed || g.elements[x].cost)
            res_of[x] = b.resource(g.elements[x].name, shared_table(g.elements[x]));
    for (const auto& p : g.players) {
        const auto id = b.add_player(p.role, mode == DelayMode::Shared ? p.weight : 1);
        for (const auto& s : p.strategies) {
            std::vector<std::uint32_t> rs;
            for (auto x : s.elements)
                if (res_of[x] >= 0) rs.push_back(static_cast<std::uint32_t>(res_of[x]));
            b.add_strategy(id, s.name, std::move(rs));
        }
    }
    if (mode == DelayMode::PlayerSpecific) {
        for (PlayerId i = 0; i < g.players.size(); ++i) {
            std::vector<bool> seen(g.elements.size(), false);
            for (const auto& s : g.players[i].strategies)
                for (auto x : s.elements) {
                    if (res_of[x] < 0 || seen[x]) continue;
                    seen[x] = true;
                    const auto& e = g.elements[x];
                    DelayTable table = shared_table(e);
                    if (e.kind == Element::Kind::TriggerMain)
                        table = i == L.clock ? DelayTable::constant(100) : DelayTable::steps({0, 100});
                    else if (e.kind == Element::Kind::TriggerClock)
                        table = DelayTable::steps({0, 20});
                    b.set_player_delay(static_cast<std::uint32_t>(res_of[x]), i, table);
                }
        }
    }
    auto game = std::make_shared<CongestionGame>(std::move(b).build());
    return finish(mode == DelayMode::Shared ? ReductionKind::Weighted : ReductionKind::PlayerSpecific, game, g, spec);
}

}  // namespace

StrategyProfile encode_tm(const CompiledReduction& c, const TapeConfig& config) {
    const auto& spec = *c.machine;
    const TmLayout L(spec);
    if (config.tape.size() != spec.tape_bound + 1 || config.head > spec.tape_bound || config.state >= spec.num_states())
        throw PreconditionError("configuration does not fit the machine");
    StrategyProfile p(std::vector<StrategyId>(L.clock + 1, 0));
    p[L.state] = config.state;
    p[L.position] = config.head;
    for (std::uint32_t i = 0; i <= spec.tape_bound; ++i) p[L.cell(i)] = static_cast<StrategyId>(config.tape[i]);
    return p;
}

TapeConfig decode_tm(const CompiledReduction& c, const StrategyProfile& p) {
    const auto& spec = *c.machine;
    const TmLayout L(spec);
    TapeConfig config;
    config.state = p[L.state];
    config.head = p[L.position];
    for (std::uint32_t i = 0; i <= spec.tape_bound; ++i) config.tape.push_back(static_cast<Symbol>(p[L.cell(i)]));
    return config;
}

bool round_start_tm(const CompiledReduction& c, const StrategyProfile& p) {
    const TmLayout L(*c.machine);
    for (PlayerId i = L.first_w; i <= L.clock; ++i)
        if (p[i] != 0) return false;
    return true;
}

}  // namespace detail

using namespace detail;

std::size_t control_count(const TMSpec& spec) { return control_keys(spec).size(); }

CompiledReduction compile_tm_weighted(const TMSpec& spec, Payoff M) {
    return emit_congestion(spec, M, DelayMode::Shared);
}

CompiledReduction compile_tm_player_specific(const TMSpec& spec, Payoff M) {
    return emit_congestion(spec, M, DelayMode::PlayerSpecific);
}

CompiledReduction compile_tm_market(const TMSpec& spec, Payoff M) {
    const Gadget g = build_gadget(spec, M);
    const TmLayout L(spec);
    const Payoff K = static_cast<Payoff>(spec.num_states() + spec.tape_bound + kAlphabetSize - 1);
    if (K > 20)
        throw ConfigError("market gadget needs |Q| + t' + |Gamma| - 1 <= 20 so that Verify outbids Write; got " +
                          std::to_string(K));
    if (g.N <= 0) throw ConfigError("market constant N must be positive");
    MarketBuilder b;
    std::vector<std::int64_t> market_of(g.elements.size(), -1);
    for (std::uint32_t x = 0; x < g.elements.size(); ++x) {
        const auto& e = g.elements[x];
        const PlayerId T = L.transition;
        std::uint32_t id = 0;
        switch (e.kind) {
            case Element::Kind::Alpha: id = b.passive(e.name, 1, {T, e.owner}); break;
            case Element::Kind::Beta: id = b.passive(e.name, M, {e.owner, T}); break;
            case Element::Kind::TriggerMain: id = b.passive(e.name, 100, {L.clock, T}); break;
            case Element::Kind::TriggerClock: id = b.passive(e.name, 80, {T, L.clock}); break;
            case Element::Kind::ClockWait: id = b.passive(e.name, 110, {L.clock}); break;
            case Element::Kind::Fixed:
                if (!e.value) continue;
                if (*e.value <= 0) throw ConfigError("market '" + e.name + "' would have a non-positive value");
                id = e.owner == L.control_d && e.name.rfind("guard", 0) == 0 ? b.passive(e.name, *e.value, {L.control_d, T})
                                                                             : b.passive(e.name, *e.value, {T});
                break;
        }
        market_of[x] = id;
    }
    for (const auto& p : g.players) {
        const auto id = b.add_player(p.role);
        for (const auto& s : p.strategies) {
            std::vector<std::uint32_t> ms;
            for (auto x : s.elements)
                if (market_of[x] >= 0) ms.push_back(static_cast<std::uint32_t>(market_of[x]));
            b.add_strategy(id, s.name, std::move(ms));
        }
    }
    auto game = std::make_shared<MarketGame>(std::move(b).build());
    return finish(ReductionKind::Market, game, g, spec);
}

// ---------------------------------------------------------------- round check

namespace {

struct Expect {
    PlayerId player;
    StrategyId strategy;
};

std::string describe_move(const CompiledReduction& c, PlayerId p, StrategyId from, StrategyId to) {
    return c.roles[p] + ": " + c.game->strategy_name(p, from) + " -> " + c.game->strategy_name(p, to);
}

}  // namespace

RoundReport verify_round_weighted(const CompiledReduction& c, const StrategyProfile& start) {
    if (c.kind != ReductionKind::Weighted && c.kind != ReductionKind::PlayerSpecific && c.kind != ReductionKind::Market)
        throw UnsupportedOperation("verify-round weighted needs a congestion or market TM compile");
    const auto& spec = *c.machine;
    const Game& g = *c.game;
    const TmLayout L(spec);
    g.check_profile(start);
    if (!round_start_tm(c, start)) throw PreconditionError("start is not a round-start profile");

    RoundReport r;
    StrategyProfile p = start;
    const auto cfg = decode_tm(c, start);
    r.start_config = cfg;
    const auto T = L.transition;

    auto fail = [&](std::size_t step, std::string expected, std::string actual) {
        r.matches = false;
        r.divergent_step = step;
        r.expected = std::move(expected);
        r.actual = std::move(actual);
        r.end_profile = p;
        return r;
    };

    if (cfg.state == spec.halt) {
        const auto halt = c.strategy(T, "Halt");
        const auto moves = improving_moves(g, p);
        if (moves.size() != 1 || moves[0].player != T || moves[0].strategy != halt)
            return fail(1, "transition: Wait -> Halt only", std::to_string(moves.size()) + " improving moves");
        r.trace.push_back("(1) " + describe_move(c, T, p[T], halt));
        p[T] = halt;
        if (!is_pure_ne(g, p)) return fail(1, "pure Nash equilibrium after Halt", "profile still has improving moves");
        r.matches = true;
        r.end_profile = p;
        r.end_config = cfg;
        return r;
    }

    TapeConfig next;
    try {
        next = tm_step(spec, cfg);
    } catch (const BoundViolation& e) {
        return fail(1, "a transition inside the tape", e.what());
    }
    const auto& tr = *spec.transition(cfg.state, cfg.tape[cfg.head]);
    const auto keys = control_keys(spec);
    const ControlKey want{tr.next, next.head, cfg.head, static_cast<std::uint32_t>(tr.write)};
    const auto k = static_cast<PlayerId>(std::find(keys.begin(), keys.end(), want) - keys.begin());
    const PlayerId W = L.first_w + k, V = L.first_v + k;
    const std::string kn = key_name(spec, want);
    const StrategyId zero = 0, one = 1;

    std::vector<std::vector<Expect>> steps = {
        {{T, c.strategy(T, "Read_" + spec.states[cfg.state] + "_" + std::to_string(cfg.head) + "_" +
                               sym_name(static_cast<std::uint32_t>(cfg.tape[cfg.head])))}},
        {{W, one}},
        {{T, c.strategy(T, "Write_" + kn)}},
        {},
        {{T, c.strategy(T, "Verify_" + kn)}},
        {{L.control_d, one}},
        {{T, c.strategy(T, "Done")}},
        {{L.clock, 1}, {W, zero}, {V, zero}},
        {{T, c.strategy(T, "Wait")}},
        {{L.clock, 0}, {L.control_d, zero}},
    };
    if (next.state != cfg.state) steps[3].push_back({L.state, next.state});
    if (next.head != cfg.head) steps[3].push_back({L.position, next.head});
    if (next.tape[cfg.head] != cfg.tape[cfg.head])
        steps[3].push_back({L.cell(cfg.head), static_cast<StrategyId>(next.tape[cfg.head])});
    steps[3].push_back({V, one});

    const auto halt = c.strategy(T, "Halt");
    for (std::size_t s = 0; s < steps.size(); ++s) {
        auto remaining = steps[s];
        const std::size_t label = s + 1;
        while (!remaining.empty()) {
            const auto moves = improving_moves(g, p);
            std::optional<Expect> take;
            for (const auto& m : moves) {
                auto it = std::find_if(remaining.begin(), remaining.end(), [&](const Expect& e) {
                    return e.player == m.player && e.strategy == m.strategy;
                });
                if (it != remaining.end()) {
                    if (!take) take = *it;
                    continue;
                }
                // The only extra move the construction allows: Halt once the state player sits on q_h.
                if (m.player == T && m.strategy == halt && p[L.state] == spec.halt) continue;
                std::string expected;
                for (const auto& e : remaining) expected += (expected.empty() ? "" : ", ") + c.roles[e.player] + " -> " +
                                                            g.strategy_name(e.player, e.strategy);
                return fail(label, expected, "unexpected move " + describe_move(c, m.player, p[m.player], m.strategy));
            }
            if (!take) {
                std::string expected;
                for (const auto& e : remaining) expected += (expected.empty() ? "" : ", ") + c.roles[e.player] + " -> " +
                                                            g.strategy_name(e.player, e.strategy);
                return fail(label, expected, moves.empty() ? "no improving move" : "expected mover cannot move");
            }
            r.trace.push_back("(" + std::to_string(label) + ") " + describe_move(c, take->player, p[take->player], take->strategy));
            p[take->player] = take->strategy;
            remaining.erase(std::find_if(remaining.begin(), remaining.end(),
                                         [&](const Expect& e) { return e.player == take->player; }));
        }
    }
    r.end_profile = p;
    r.end_config = decode_tm(c, p);
    if (!round_start_tm(c, p)) return fail(10, "round-start profile", "controls, clock or transition off their start strategies");
    if (*r.end_config != next)
        return fail(10, to_string(spec, next), to_string(spec, *r.end_config));
    r.matches = true;
    return r;
}

}  // namespace sinkeq
