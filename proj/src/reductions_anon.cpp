// Anonymous-game gadget: unary counters for head and state, a control pair
// that sequences one machine step through nine phases.

#include <algorithm>
#include <map>

#include "reductions_internal.hpp"
#include "sinkeq/anonymous.hpp"
#include "sinkeq/dynamics.hpp"

namespace sinkeq {
namespace detail {
namespace {

// Strategy indices of the common strategy set.
enum S : StrategyId {
    Cell0, Cell1, CellB, Change,
    Pos1, Pos0,
    St1, St0,
    Tape0, Tape1, TapeB,
    Sym0, Sym1, SymB,
    Ns0, Ns1, NsB,
    Np1, Np0,
    Nst1, Nst0,
    Init, TapeChange, EvalTape, NewSym, NewSym2, NewPos, NewPos2, NewState, NewState2, Halt,
    XInit, XTapeChange, XEvalTape, XNewSym, XNewSym2, XNewPos, XNewPos2, XNewState, XNewState2,
    kStrategyCount
};

const std::vector<std::string> kStrategyNames = {
    "cell0", "cell1", "cellb", "change", "pos1", "pos0", "st1", "st0", "tape0", "tape1", "tapeb",
    "sym0", "sym1", "symb", "ns0", "ns1", "nsb", "np1", "np0", "nst1", "nst0",
    "init", "tape-change", "eval-tape", "new-sym", "new-sym2", "new-pos", "new-pos2", "new-state", "new-state2", "halt",
    "Xinit", "Xtape-change", "Xeval-tape", "Xnew-sym", "Xnew-sym2", "Xnew-pos", "Xnew-pos2", "Xnew-state", "Xnew-state2"};

StrategyId cell_s(std::uint32_t s) { return Cell0 + s; }
StrategyId tape_s(std::uint32_t s) { return Tape0 + s; }
StrategyId sym_s(std::uint32_t s) { return Sym0 + s; }
StrategyId ns_s(std::uint32_t s) { return Ns0 + s; }

/// Player layout of the anonymous compile.
struct AnonLayout {
    std::uint32_t tp = 0;  // t'
    std::uint32_t m = 0;   // |Q| - 1
    PlayerId first_cell = 0, first_pos = 0, first_state = 0, first_tape = 0, symbol = 0, new_sym = 0,
             first_np = 0, first_nst = 0, control1 = 0, control2 = 0;

    explicit AnonLayout(const TMSpec& spec) : tp(spec.tape_bound), m(static_cast<std::uint32_t>(spec.num_states() - 1)) {
        first_pos = first_cell + tp + 1;
        first_state = first_pos + tp;
        first_tape = first_state + m;
        symbol = first_tape + tp + 1;
        new_sym = symbol + 1;
        first_np = new_sym + 1;
        first_nst = first_np + tp;
        control1 = first_nst + m;
        control2 = control1 + 1;
    }
    std::size_t players() const { return control2 + 1; }
};

/// Unary level of each machine state: q0 -> 0, q_h -> m, others in order.
std::vector<std::uint32_t> state_levels(const TMSpec& spec) {
    std::vector<std::uint32_t> level(spec.num_states(), 0);
    std::uint32_t next = 1;
    for (std::uint32_t q = 0; q < spec.num_states(); ++q) {
        if (q == spec.initial) level[q] = 0;
        else if (q == spec.halt) level[q] = static_cast<std::uint32_t>(spec.num_states() - 1);
        else level[q] = next++;
    }
    return level;
}

std::uint32_t state_of_level(const TMSpec& spec, std::uint32_t level) {
    const auto levels = state_levels(spec);
    for (std::uint32_t q = 0; q < levels.size(); ++q)
        if (levels[q] == level) return q;
    throw PreconditionError("no state has level " + std::to_string(level));
}

using namespace hist;

HistExpr at_least_one(StrategyId s) { return ge(count(s), lit(1)); }
HistExpr count_is(StrategyId s, Payoff v) { return eq(count(s), lit(v)); }

void check_anonymous_spec(const TMSpec& spec) {
    spec.validate();
    if (spec.accept) throw ConfigError("TM gadgets take M' directly; the machine must not have an accepting state");
    if (spec.num_states() < 2) throw ConfigError("anonymous gadget needs an initial state distinct from q_h");
}

}  // namespace

StrategyProfile encode_anon(const CompiledReduction& c, const TapeConfig& config) {
    const auto& spec = *c.machine;
    const AnonLayout L(spec);
    if (config.tape.size() != spec.tape_bound + 1 || config.head > spec.tape_bound || config.state >= spec.num_states())
        throw PreconditionError("configuration does not fit the machine");
    const auto level = state_levels(spec)[config.state];
    StrategyProfile p(std::vector<StrategyId>(L.players(), 0));
    std::array<std::uint32_t, kAlphabetSize> counts{};
    for (std::uint32_t i = 0; i <= L.tp; ++i) {
        const auto s = static_cast<std::uint32_t>(config.tape[i]);
        p[L.first_cell + i] = cell_s(s);
        ++counts[s];
    }
    for (std::uint32_t j = 0; j < L.tp; ++j) {
        p[L.first_pos + j] = j < config.head ? Pos1 : Pos0;
        p[L.first_np + j] = j < config.head ? Np1 : Np0;
    }
    for (std::uint32_t j = 0; j < L.m; ++j) {
        p[L.first_state + j] = j < level ? St1 : St0;
        p[L.first_nst + j] = j < level ? Nst1 : Nst0;
    }
    PlayerId t = L.first_tape;
    for (std::uint32_t s = 0; s < kAlphabetSize; ++s)
        for (std::uint32_t k = 0; k < counts[s]; ++k) p[t++] = tape_s(s);
    p[L.symbol] = SymB;
    p[L.new_sym] = NsB;
    p[L.control1] = Init;
    p[L.control2] = XNewState2;
    return p;
}

TapeConfig decode_anon(const CompiledReduction& c, const StrategyProfile& p) {
    const auto& spec = *c.machine;
    const AnonLayout L(spec);
    TapeConfig config;
    for (std::uint32_t i = 0; i <= L.tp; ++i) {
        const auto s = p[L.first_cell + i];
        if (s > CellB) throw PreconditionError("cell_" + std::to_string(i) + " is not on a symbol strategy");
        config.tape.push_back(static_cast<Symbol>(s - Cell0));
    }
    std::uint32_t head = 0, level = 0;
    for (std::uint32_t j = 0; j < L.tp; ++j) head += p[L.first_pos + j] == Pos1;
    for (std::uint32_t j = 0; j < L.m; ++j) level += p[L.first_state + j] == St1;
    config.head = head;
    config.state = state_of_level(spec, level);
    return config;
}

bool round_start_anon(const CompiledReduction& c, const StrategyProfile& p) {
    const AnonLayout L(*c.machine);
    if (p[L.control1] != Init || p[L.control2] != XNewState2) return false;
    for (std::uint32_t i = 0; i <= L.tp; ++i)
        if (p[L.first_cell + i] > CellB) return false;
    return true;
}

}  // namespace detail

using namespace detail;

const std::vector<std::string>& anonymous_control1_strategies() {
    static const std::vector<std::string> names = {"init",    "tape-change", "eval-tape", "new-sym",    "new-sym2",
                                                   "new-pos", "new-pos2",    "new-state", "new-state2", "halt"};
    return names;
}

CompiledReduction compile_tm_anonymous(const TMSpec& spec) {
    check_anonymous_spec(spec);
    const AnonLayout L(spec);
    const auto level = state_levels(spec);
    const auto tp = static_cast<Payoff>(L.tp);

    std::vector<AnonymousPlayer> players(L.players());
    auto allow = [&](PlayerId p, std::string name, std::vector<StrategyId> allowed) {
        std::sort(allowed.begin(), allowed.end());
        players[p].name = std::move(name);
        players[p].allowed = std::move(allowed);
    };
    auto rule = [&](PlayerId p, StrategyId s, HistExpr when) { players[p].rules.push_back({s, std::move(when)}); };

    // Transitions that stay on the tape, with their new head position.
    struct Step {
        std::uint32_t q, s, i, next, write, i2;
    };
    std::vector<Step> steps;
    for (std::uint32_t q = 0; q < spec.num_states(); ++q) {
        if (spec.is_final(q)) continue;
        for (std::uint32_t s = 0; s < kAlphabetSize; ++s) {
            const auto& tr = *spec.transition(q, static_cast<Symbol>(s));
            for (std::uint32_t i = 0; i <= L.tp; ++i) {
                const auto i2 = static_cast<std::int64_t>(i) + static_cast<int>(tr.move);
                if (i2 < 0 || i2 > tp) continue;
                steps.push_back({q, s, i, tr.next, static_cast<std::uint32_t>(tr.write), static_cast<std::uint32_t>(i2)});
            }
        }
    }
    // (q, sigma) pairs reading sigma in state q.
    auto reads = [&](std::uint32_t q, std::uint32_t s) {
        return all({count_is(sym_s(s), 1), count_is(St1, level[q])});
    };

    for (std::uint32_t i = 0; i <= L.tp; ++i) {
        const PlayerId p = L.first_cell + i;
        allow(p, "cell_" + std::to_string(i), {Cell0, Cell1, CellB, Change});
        rule(p, Change, all({at_least_one(TapeChange), count_is(Pos1, i)}));
        for (std::uint32_t s = 0; s < kAlphabetSize; ++s)
            rule(p, cell_s(s), all({at_least_one(NewSym2), at_least_one(ns_s(s)), count_is(Pos1, i)}));
    }
    for (std::uint32_t j = 0; j < L.tp; ++j) {
        const PlayerId p = L.first_pos + j;
        allow(p, "position_" + std::to_string(j + 1), {Pos1, Pos0});
        rule(p, Pos1, all({at_least_one(NewPos2), le(count(Pos1), count(Np1))}));
        rule(p, Pos0, all({at_least_one(NewPos2), ge(count(Pos1), count(Np1))}));
    }
    for (std::uint32_t j = 0; j < L.m; ++j) {
        const PlayerId p = L.first_state + j;
        allow(p, "state_" + std::to_string(j + 1), {St1, St0});
        rule(p, St1, all({at_least_one(NewState2), le(count(St1), count(Nst1))}));
        rule(p, St0, all({at_least_one(NewState2), ge(count(St1), count(Nst1))}));
    }
    for (std::uint32_t j = 0; j <= L.tp; ++j) {
        const PlayerId p = L.first_tape + j;
        allow(p, "tape_" + std::to_string(j + 1), {Tape0, Tape1, TapeB});
        for (std::uint32_t s = 0; s < kAlphabetSize; ++s)
            rule(p, tape_s(s), all({at_least_one(Init), ge(count(cell_s(s)), count(tape_s(s)))}));
    }
    allow(L.symbol, "symbol", {Sym0, Sym1, SymB});
    for (std::uint32_t s = 0; s < kAlphabetSize; ++s)
        rule(L.symbol, sym_s(s), all({at_least_one(EvalTape), lt(count(cell_s(s)), count(tape_s(s)))}));

    allow(L.new_sym, "new-sym", {Ns0, Ns1, NsB});
    for (std::uint32_t q = 0; q < spec.num_states(); ++q) {
        if (spec.is_final(q)) continue;
        for (std::uint32_t s = 0; s < kAlphabetSize; ++s) {
            const auto& tr = *spec.transition(q, static_cast<Symbol>(s));
            rule(L.new_sym, ns_s(static_cast<std::uint32_t>(tr.write)), all({at_least_one(NewSym), reads(q, s)}));
        }
    }
    for (std::uint32_t j = 0; j < L.tp; ++j) {
        const PlayerId p = L.first_np + j;
        allow(p, "new-pos_" + std::to_string(j + 1), {Np1, Np0});
        for (const auto& st : steps) {
            auto base = [&] {
                return std::vector<HistExpr>{at_least_one(NewPos), reads(st.q, st.s), count_is(Pos1, st.i)};
            };
            auto up = base();
            up.push_back(le(count(Np1), lit(st.i2)));
            rule(p, Np1, all(std::move(up)));
            auto down = base();
            down.push_back(ge(count(Np1), lit(st.i2)));
            rule(p, Np0, all(std::move(down)));
        }
    }
    for (std::uint32_t j = 0; j < L.m; ++j) {
        const PlayerId p = L.first_nst + j;
        allow(p, "new-state_" + std::to_string(j + 1), {Nst1, Nst0});
        for (std::uint32_t q = 0; q < spec.num_states(); ++q) {
            if (spec.is_final(q)) continue;
            for (std::uint32_t s = 0; s < kAlphabetSize; ++s) {
                const auto target = level[spec.transition(q, static_cast<Symbol>(s))->next];
                rule(p, Nst1, all({at_least_one(NewState), reads(q, s), le(count(Nst1), lit(target))}));
                rule(p, Nst0, all({at_least_one(NewState), reads(q, s), ge(count(Nst1), lit(target))}));
            }
        }
    }

    const PlayerId c1 = L.control1;
    allow(c1, "control1", {Init, TapeChange, EvalTape, NewSym, NewSym2, NewPos, NewPos2, NewState, NewState2, Halt});
    {
        std::vector<HistExpr> match{at_least_one(XInit)};
        for (std::uint32_t s = 0; s < kAlphabetSize; ++s) match.push_back(eq(count(cell_s(s)), count(tape_s(s))));
        rule(c1, TapeChange, all(std::move(match)));
    }
    rule(c1, EvalTape, all({at_least_one(XTapeChange), count_is(Change, 1)}));
    {
        std::vector<HistExpr> match{at_least_one(XEvalTape)};
        for (std::uint32_t s = 0; s < kAlphabetSize; ++s)
            match.push_back(eq(add(count(cell_s(s)), count(sym_s(s))), count(tape_s(s))));
        rule(c1, NewSym, all(std::move(match)));
    }
    for (std::uint32_t q = 0; q < spec.num_states(); ++q) {
        if (spec.is_final(q)) continue;
        for (std::uint32_t s = 0; s < kAlphabetSize; ++s) {
            const auto& tr = *spec.transition(q, static_cast<Symbol>(s));
            rule(c1, NewSym2,
                 all({at_least_one(XNewSym), reads(q, s), count_is(ns_s(static_cast<std::uint32_t>(tr.write)), 1)}));
            rule(c1, NewState2, all({at_least_one(XNewState), reads(q, s), count_is(Nst1, level[tr.next])}));
        }
    }
    rule(c1, NewPos, all({at_least_one(XNewSym2), count_is(Change, 0)}));
    for (const auto& st : steps)
        rule(c1, NewPos2, all({at_least_one(XNewPos), reads(st.q, st.s), count_is(Pos1, st.i), count_is(Np1, st.i2)}));
    rule(c1, NewState, all({at_least_one(XNewPos2), eq(count(Pos1), count(Np1))}));
    rule(c1, Init, all({at_least_one(XNewState2), eq(count(St1), count(Nst1))}));
    rule(c1, Halt, count_is(St1, L.m));

    const PlayerId c2 = L.control2;
    allow(c2, "control2", {XInit, XTapeChange, XEvalTape, XNewSym, XNewSym2, XNewPos, XNewPos2, XNewState, XNewState2});
    for (StrategyId s = Init; s <= NewState2; ++s) rule(c2, XInit + (s - Init), at_least_one(s));

    CompiledReduction c;
    c.kind = ReductionKind::Anonymous;
    c.game = std::make_shared<AnonymousGame>(kStrategyNames, std::move(players));
    c.machine = spec;
    for (PlayerId p = 0; p < c.game->num_players(); ++p) c.roles.push_back(c.game->player_name(p));
    c.initial = encode_anon(c, initial_config(spec));
    return c;
}

// ---------------------------------------------------------------- round check

RoundReport verify_round_anonymous(const CompiledReduction& c, const StrategyProfile& start) {
    if (c.kind != ReductionKind::Anonymous) throw UnsupportedOperation("verify-round anonymous needs an anonymous TM compile");
    const auto& spec = *c.machine;
    const Game& g = *c.game;
    const AnonLayout L(spec);
    g.check_profile(start);
    if (!round_start_anon(c, start)) throw PreconditionError("start is not a round-start profile");
    const auto levels = state_levels(spec);

    RoundReport r;
    StrategyProfile p = start;
    const auto cfg = decode_anon(c, start);
    r.start_config = cfg;

    auto fail = [&](std::size_t row, std::string expected, std::string actual) {
        r.matches = false;
        r.divergent_step = row;
        r.expected = std::move(expected);
        r.actual = std::move(actual);
        r.end_profile = p;
        return r;
    };
    auto count_of = [&](StrategyId s) {
        return static_cast<std::uint32_t>(std::count(p.choices.begin(), p.choices.end(), s));
    };
    auto describe = [&](const Move& m) {
        return c.roles[m.player] + ": " + g.strategy_name(m.player, p[m.player]) + " -> " + g.strategy_name(m.player, m.strategy);
    };
    auto halt_allowed = [&](const Move& m) { return m.player == L.control1 && m.strategy == Halt && count_of(St1) == L.m; };

    // Player classes underlined in the odd rows.
    auto range = [](PlayerId first, std::size_t n) {
        std::vector<PlayerId> v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = first + static_cast<PlayerId>(k);
        return v;
    };
    const std::map<std::size_t, std::pair<std::string, std::vector<PlayerId>>> workers = {
        {1, {"tape", range(L.first_tape, L.tp + 1)}},   {3, {"cell", range(L.first_cell, L.tp + 1)}},
        {5, {"symbol", {L.symbol}}},                    {7, {"new-sym", {L.new_sym}}},
        {9, {"cell", range(L.first_cell, L.tp + 1)}},   {11, {"new-pos", range(L.first_np, L.tp)}},
        {13, {"position", range(L.first_pos, L.tp)}},   {15, {"new-state", range(L.first_nst, L.m)}},
        {17, {"state", range(L.first_state, L.m)}},
    };

    // Odd row: the row's class and control2 move until neither can.
    auto run_odd = [&](std::size_t row) -> bool {
        const auto& [label, cls] = workers.at(row);
        for (std::size_t guard = 0; guard < 10'000; ++guard) {
            const auto moves = improving_moves(g, p);
            const Move* take = nullptr;
            for (const auto& m : moves) {
                const bool ok = m.player == L.control2 || std::find(cls.begin(), cls.end(), m.player) != cls.end();
                if (ok) {
                    if (!take) take = &m;
                    continue;
                }
                if (halt_allowed(m) || m.player == L.control1) continue;
                fail(row, label + " players or control2", "unexpected move " + describe(m));
                return false;
            }
            if (!take) return true;
            for (const auto& m : moves)
                if (m.player == L.control1 && !halt_allowed(m)) {
                    fail(row, label + " players or control2 still moving", "early control1 move " + describe(m));
                    return false;
                }
            r.trace.push_back("row " + std::to_string(row) + ": " + describe(*take));
            p[take->player] = take->strategy;
        }
        fail(row, "row settles", "no settlement within 10000 moves");
        return false;
    };
    // Even row: control1 alone moves to `target`.
    auto run_even = [&](std::size_t row, StrategyId target) -> bool {
        const auto moves = improving_moves(g, p);
        const Move* take = nullptr;
        for (const auto& m : moves) {
            if (m.player == L.control1 && m.strategy == target) take = &m;
            else if (!halt_allowed(m)) {
                fail(row, "control1 -> " + kStrategyNames[target], "unexpected move " + describe(m));
                return false;
            }
        }
        if (!take) {
            fail(row, "control1 -> " + kStrategyNames[target], moves.empty() ? "no improving move" : "control1 cannot reach it");
            return false;
        }
        r.trace.push_back("row " + std::to_string(row) + ": " + describe(*take));
        p[L.control1] = target;
        return true;
    };
    auto expect = [&](std::size_t row, bool ok, const std::string& what) {
        if (!ok) fail(row, what, "profile differs");
        return ok;
    };

    if (spec.is_final(cfg.state)) {
        if (!run_odd(1)) return r;
        const auto moves = improving_moves_of(g, p, L.control1);
        if (std::none_of(moves.begin(), moves.end(), [](const Move& m) { return m.strategy == Halt; }))
            return fail(2, "control1 -> halt", "halt not improving");
        r.trace.push_back("row 2: control1: " + g.strategy_name(L.control1, p[L.control1]) + " -> halt");
        p[L.control1] = Halt;
        if (!is_pure_ne(g, p)) return fail(2, "pure Nash equilibrium after halt", "profile still has improving moves");
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
    const auto read = static_cast<std::uint32_t>(cfg.tape[cfg.head]);
    const auto write = static_cast<std::uint32_t>(next.tape[cfg.head]);
    const PlayerId head_cell = L.first_cell + cfg.head;

    const std::vector<StrategyId> order = {TapeChange, EvalTape, NewSym, NewSym2, NewPos, NewPos2, NewState, NewState2, Init};
    for (std::size_t k = 0; k < order.size(); ++k) {
        const std::size_t odd = 2 * k + 1, even = odd + 1;
        if (!run_odd(odd)) return r;
        const StrategyId x = XInit + static_cast<StrategyId>(k);
        if (!expect(even, p[L.control2] == x, "control2 on " + kStrategyNames[x])) return r;
        bool ok = true;
        std::string what;
        switch (even) {
            case 2:
                for (std::uint32_t s = 0; s < kAlphabetSize; ++s) ok = ok && count_of(cell_s(s)) == count_of(tape_s(s));
                what = "tape counts equal cell counts";
                break;
            case 4: ok = p[head_cell] == Change; what = c.roles[head_cell] + " on change"; break;
            case 6: ok = p[L.symbol] == sym_s(read); what = "symbol on " + kStrategyNames[sym_s(read)]; break;
            case 8: ok = p[L.new_sym] == ns_s(write); what = "new-sym on " + kStrategyNames[ns_s(write)]; break;
            case 10: ok = p[head_cell] == cell_s(write); what = c.roles[head_cell] + " on " + kStrategyNames[cell_s(write)]; break;
            case 12: ok = count_of(Np1) == next.head; what = std::to_string(next.head) + " players on np1"; break;
            case 14: ok = count_of(Pos1) == next.head; what = std::to_string(next.head) + " players on pos1"; break;
            case 16:
                ok = count_of(Nst1) == levels[next.state];
                what = std::to_string(levels[next.state]) + " players on nst1";
                break;
            case 18:
                ok = count_of(St1) == levels[next.state];
                what = std::to_string(levels[next.state]) + " players on st1";
                break;
        }
        if (!expect(even, ok, what)) return r;
        if (!run_even(even, order[k])) return r;
    }
    r.end_profile = p;
    r.end_config = decode_anon(c, p);
    if (!expect(19, round_start_anon(c, p), "control1 on init, control2 on Xnew-state2")) return r;
    if (*r.end_config != next) return fail(19, to_string(spec, next), to_string(spec, *r.end_config));
    r.trace.push_back("row 19: round start at " + to_string(spec, next));
    r.matches = true;
    return r;
}

}  // namespace sinkeq
