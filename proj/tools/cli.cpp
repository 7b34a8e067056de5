#include "cli.hpp"

#include <chrono>
#include <sstream>

#include <CLI11.hpp>

#include "sinkeq/dynamics.hpp"
#include "sinkeq/io.hpp"
#include "sinkeq/reductions.hpp"
#include "sinkeq/report.hpp"
#include "sinkeq/valid_utility.hpp"

namespace sinkeq::cli {
namespace {

struct Globals {
    std::string semantics = "improvement";
    std::uint64_t cap = 0;  // 0: built-in defaults
    std::string format = "text";
};

std::uint64_t full_cap(const Globals& g) { return g.cap ? g.cap : default_full_cap(); }
std::uint64_t closure_cap(const Globals& g) { return g.cap ? g.cap : default_closure_cap(); }

/// "@initial" (from the sidecar) or indices separated by commas or spaces.
StrategyProfile resolve_profile(const std::string& text, const std::string& game_path, const Game& game) {
    StrategyProfile p;
    if (text == "@initial") {
        p = io::load_compiled(game_path).initial;
    } else {
        std::string cleaned = text;
        for (auto& ch : cleaned)
            if (ch == ',') ch = ' ';
        std::istringstream in(cleaned);
        long long v;
        while (in >> v) {
            if (v < 0) throw PreconditionError("profile index " + std::to_string(v) + " is negative");
            p.choices.push_back(static_cast<StrategyId>(v));
        }
        if (!in.eof()) throw PreconditionError("profile must be '@initial' or a list of strategy indices");
    }
    game.check_profile(p);
    return p;
}

io::Json profile_json(const StrategyProfile& p) { return p.choices; }

class Timer {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

AnalysisReport answer(std::string question, bool value) {
    AnalysisReport r;
    r.question = std::move(question);
    r.answer = value ? AnalysisReport::Answer::True : AnalysisReport::Answer::False;
    return r;
}

// ---------------------------------------------------------------- commands

AnalysisReport cmd_sinks(const Globals& g, const std::string& path) {
    auto game = io::load_game(path);
    const auto sem = parse_semantics(g.semantics);
    const auto cap = full_cap(g);
    Timer t;
    SearchStats st;
    std::vector<SinkEquilibrium> found;
    try {
        found = sinks(*game, sem, cap, &st);
    } catch (const CapExceeded& e) {
        return AnalysisReport::inconclusive("sinks", e.cap(), e.what());
    }
    auto r = answer("sinks", !found.empty());
    r.states = st.states;
    r.edges = st.edges;
    r.components = st.components;
    r.wall_ms = t.ms();
    io::Json list = io::Json::array();
    std::size_t non_singleton = 0;
    constexpr std::size_t kListed = 256;
    for (const auto& s : found) {
        non_singleton += !s.singleton();
        io::Json members = io::Json::array();
        for (std::size_t k = 0; k < s.members.size() && k < kListed; ++k) members.push_back(profile_json(s.members[k]));
        io::Json sj{{"size", s.members.size()}, {"singleton", s.singleton()}, {"members", std::move(members)}};
        if (s.members.size() > kListed) sj["truncated"] = true;
        list.push_back(std::move(sj));
    }
    r.details["semantics"] = g.semantics;
    r.details["count"] = found.size();
    r.details["non_singleton"] = non_singleton;
    r.details["sinks"] = std::move(list);
    return r;
}

AnalysisReport cmd_in_sink(const Globals& g, const std::string& path, const std::string& profile_text) {
    auto game = io::load_game(path);
    const auto profile = resolve_profile(profile_text, path, *game);
    const auto cap = closure_cap(g);
    Timer t;
    const auto res = in_a_sink(*game, profile, parse_semantics(g.semantics), cap);
    AnalysisReport r = res.answer ? answer("in-sink", *res.answer)
                                  : AnalysisReport::inconclusive("in-sink", cap, "forward closure exceeded the cap");
    r.states = res.explored;
    r.edges = res.edges;
    r.wall_ms = t.ms();
    r.details["semantics"] = g.semantics;
    r.details["profile"] = profile_json(profile);
    return r;
}

AnalysisReport cmd_has_pure(const Globals& g, const std::string& path) {
    auto game = io::load_game(path);
    const auto cap = full_cap(g);
    Timer t;
    std::uint64_t scanned = 0;
    std::optional<StrategyProfile> witness;
    try {
        witness = find_pure_ne(*game, cap, &scanned);
    } catch (const CapExceeded& e) {
        return AnalysisReport::inconclusive("has-pure", e.cap(), e.what());
    }
    auto r = answer("has-pure", witness.has_value());
    r.states = scanned;
    r.wall_ms = t.ms();
    if (witness) r.details["witness"] = profile_json(*witness);
    return r;
}

AnalysisReport cmd_has_non_singleton(const Globals& g, const std::string& path) {
    auto game = io::load_game(path);
    const auto cap = full_cap(g);
    const auto sem = parse_semantics(g.semantics);
    Timer t;
    SearchStats st;
    std::vector<SinkEquilibrium> found;
    try {
        found = sinks(*game, sem, cap, &st);
    } catch (const CapExceeded& e) {
        return AnalysisReport::inconclusive("has-non-singleton", e.cap(), e.what());
    }
    const auto it = std::find_if(found.begin(), found.end(), [](const auto& s) { return !s.singleton(); });
    auto r = answer("has-non-singleton", it != found.end());
    r.states = st.states;
    r.edges = st.edges;
    r.components = st.components;
    r.wall_ms = t.ms();
    r.details["semantics"] = g.semantics;
    if (it != found.end()) {
        r.details["sink_size"] = it->members.size();
        r.details["sink_first_member"] = profile_json(it->members.front());
    }
    return r;
}

struct SimulateArgs {
    std::string policy = "first";
    std::uint64_t seed = 0;
    std::size_t max_steps = 1000;
    std::string from;
    std::string order;
    bool stop_at_sink = false;
};

AnalysisReport cmd_simulate(const Globals& g, const std::string& path, const SimulateArgs& a) {
    auto game = io::load_game(path);
    StrategyProfile start;
    if (!a.from.empty()) start = resolve_profile(a.from, path, *game);
    else if (std::filesystem::exists(io::sidecar_path(path))) start = resolve_profile("@initial", path, *game);
    else start = StrategyProfile(std::vector<StrategyId>(game->num_players(), 0));

    WalkPolicy policy;
    if (a.policy == "first") policy = WalkPolicy::first();
    else if (a.policy == "random") policy = WalkPolicy::random(a.seed);
    else if (a.policy == "priority") {
        std::vector<PlayerId> order;
        std::string cleaned = a.order;
        for (auto& ch : cleaned)
            if (ch == ',') ch = ' ';
        std::istringstream in(cleaned);
        long long v;
        while (in >> v) {
            if (v < 0 || static_cast<std::uint64_t>(v) >= game->num_players())
                throw PreconditionError("priority player " + std::to_string(v) + " out of range");
            order.push_back(static_cast<PlayerId>(v));
        }
        if (order.empty()) throw PreconditionError("--policy priority needs --order");
        policy = WalkPolicy::priority(std::move(order));
    } else {
        throw PreconditionError("unknown policy '" + a.policy + "'");
    }
    WalkOptions opt;
    opt.semantics = parse_semantics(g.semantics);
    opt.max_steps = a.max_steps;
    opt.stop_at_sink = a.stop_at_sink;
    opt.closure_cap = closure_cap(g);
    Timer t;
    const auto res = simulate_walk(*game, start, policy, opt);
    AnalysisReport r;
    if (!res.sink_known) {
        r = AnalysisReport::inconclusive("simulate", opt.closure_cap, "closure cap prevented sink classification");
    } else {
        r = answer("simulate", res.outcome == WalkResult::Outcome::ReachedSinkState);
    }
    r.wall_ms = t.ms();
    r.states = res.path.size();
    r.details["outcome"] = res.outcome == WalkResult::Outcome::ReachedSinkState ? "ReachedSinkState" : "StillMoving";
    r.details["policy"] = a.policy;
    r.details["seed"] = a.seed;
    r.details["moves"] = res.moves.size();
    if (res.entered_sink_at) r.details["entered_sink_at"] = *res.entered_sink_at;
    r.details["final"] = profile_json(res.path.back());
    for (const auto& m : res.moves)
        r.trace.push_back(game->player_name(m.player) + ": " + game->strategy_name(m.player, m.from) + " -> " +
                          game->strategy_name(m.player, m.to));
    return r;
}

struct CompileArgs {
    std::string kind;
    std::string input;
    std::string output;
    Payoff penalty = kDefaultPenalty;
};

AnalysisReport cmd_compile(const CompileArgs& a) {
    const auto kind = parse_reduction_kind(a.kind);
    const auto text = io::read_file(a.input);
    Timer t;
    CompiledReduction c;
    if (kind == ReductionKind::SatMarket) {
        const bool json = a.input.size() >= 5 && a.input.substr(a.input.size() - 5) == ".json";
        c = compile_sat_market(json ? io::formula_from_json(io::Json::parse(text)) : io::parse_dimacs(text));
    } else {
        const auto spec = io::parse_tm(text);
        switch (kind) {
            case ReductionKind::Weighted: c = compile_tm_weighted(spec, a.penalty); break;
            case ReductionKind::PlayerSpecific: c = compile_tm_player_specific(spec, a.penalty); break;
            case ReductionKind::Market: c = compile_tm_market(spec, a.penalty); break;
            case ReductionKind::Anonymous: c = compile_tm_anonymous(spec); break;
            case ReductionKind::SatMarket: break;
        }
    }
    io::save_compiled(a.output, c);
    auto r = answer("compile", true);
    r.wall_ms = t.ms();
    r.details["kind"] = a.kind;
    r.details["players"] = c.game->num_players();
    r.details["M"] = c.M;
    r.details["N"] = c.N;
    r.details["game"] = a.output;
    r.details["symbols"] = io::sidecar_path(a.output).string();
    r.details["initial"] = profile_json(c.initial);
    return r;
}

AnalysisReport cmd_verify_round(const std::string& which, const std::string& path, const std::string& profile_text) {
    auto c = io::load_compiled(path);
    const auto start = resolve_profile(profile_text, path, *c.game);
    Timer t;
    RoundReport rr;
    if (which == "weighted") rr = verify_round_weighted(c, start);
    else if (which == "anonymous") rr = verify_round_anonymous(c, start);
    else throw PreconditionError("verify-round takes 'weighted' or 'anonymous'");
    auto r = answer("verify-round", rr.matches);
    r.wall_ms = t.ms();
    r.trace = rr.trace;
    r.details["variant"] = which;
    r.details["compiled_kind"] = std::string(to_string(c.kind));
    if (rr.start_config) r.details["start_config"] = to_string(*c.machine, *rr.start_config);
    if (rr.end_config) r.details["end_config"] = to_string(*c.machine, *rr.end_config);
    if (rr.divergent_step) {
        r.details["divergent_step"] = *rr.divergent_step;
        r.details["expected"] = rr.expected;
        r.details["actual"] = rr.actual;
    }
    r.details["end_profile"] = profile_json(rr.end_profile);
    return r;
}

AnalysisReport cmd_check_valid_utility(const Globals& g, const std::string& path) {
    auto game = io::load_game(path);
    auto vu = std::dynamic_pointer_cast<const ValidUtilityGame>(game);
    if (!vu) throw UnsupportedOperation("check-valid-utility needs a valid_utility instance");
    const auto cap = full_cap(g);
    Timer t;
    ValidUtilityReport rep;
    try {
        rep = check_valid_utility(*vu, cap);
    } catch (const CapExceeded& e) {
        return AnalysisReport::inconclusive("check-valid-utility", e.cap(), e.what());
    }
    auto r = answer("check-valid-utility", rep.all());
    r.wall_ms = t.ms();
    r.states = rep.profiles_checked;
    r.details["nondecreasing"] = rep.nondecreasing;
    r.details["submodular"] = rep.submodular;
    r.details["marginal_utility"] = rep.marginal_utility;
    r.details["sum_bounded"] = rep.sum_bounded;
    r.details["tuples_checked"] = rep.tuples_checked;
    io::Json ce = io::Json::object();
    for (const auto& [flag, text] : rep.counterexamples) ce[flag] = text;
    r.details["counterexamples"] = std::move(ce);
    return r;
}

struct DotArgs {
    std::string from;
    std::string output;
    bool names = false;
};

int cmd_export_dot(const Globals& g, const std::string& path, const DotArgs& a, std::ostream& out, std::ostream& err) {
    auto game = io::load_game(path);
    const auto sem = parse_semantics(g.semantics);
    ExplicitGraph graph;
    if (a.from.empty()) {
        try {
            graph = full_state_graph(*game, sem, full_cap(g));
        } catch (const CapExceeded& e) {
            err << "inconclusive: " << e.what() << "\n";
            return kInconclusive;
        }
    } else {
        graph = forward_closure(*game, resolve_profile(a.from, path, *game), sem, closure_cap(g));
    }
    DotOptions opt;
    opt.decode_names = a.names;
    const auto dot = export_dot(*game, graph, opt);
    if (a.output.empty()) out << dot;
    else io::write_file(a.output, dot);
    if (!graph.complete) {
        err << "inconclusive: closure stopped at cap " << closure_cap(g) << "\n";
        return kInconclusive;
    }
    return kAnswered;
}

int emit(const Globals& g, const AnalysisReport& r, std::ostream& out) {
    out << (g.format == "json" ? render_json(r) : render_text(r));
    return r.answer == AnalysisReport::Answer::Inconclusive ? kInconclusive : kAnswered;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sink equilibria of succinct games and the gadget compilers that simulate machines with them", "sinkeq"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--semantics", g.semantics, "Edge semantics")
        ->check(CLI::IsMember({"improvement", "best-response"}))
        ->capture_default_str();
    app.add_option("--cap", g.cap, "Enumeration cap for profiles or closure states (default: built-in or env)");
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();

    std::string game_path, profile_text;

    auto* sinks_cmd = app.add_subcommand("sinks", "List the sink equilibria of a game");
    sinks_cmd->add_option("game", game_path, "Game document")->required();

    auto* in_sink_cmd = app.add_subcommand("in-sink", "Does a profile lie in a sink equilibrium?");
    in_sink_cmd->add_option("game", game_path, "Game document")->required();
    in_sink_cmd->add_option("--profile", profile_text, "Indices or @initial")->required();

    auto* pure_cmd = app.add_subcommand("has-pure", "Does the game have a pure Nash equilibrium?");
    pure_cmd->add_option("game", game_path, "Game document")->required();

    auto* nonsingle_cmd = app.add_subcommand("has-non-singleton", "Does the game have a non-singleton sink?");
    nonsingle_cmd->add_option("game", game_path, "Game document")->required();

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Walk the state graph");
    sim_cmd->add_option("game", game_path, "Game document")->required();
    sim_cmd->add_option("--policy", sim.policy, "first, random or priority")
        ->check(CLI::IsMember({"first", "random", "priority"}))
        ->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "Seed for the random policy")->capture_default_str();
    sim_cmd->add_option("--max-steps", sim.max_steps, "Step limit")->capture_default_str();
    sim_cmd->add_option("--from", sim.from, "Start profile (default @initial when a symbol table exists, else all zero)");
    sim_cmd->add_option("--order", sim.order, "Player priority list for --policy priority");
    sim_cmd->add_flag("--stop-at-sink", sim.stop_at_sink, "Stop once the walk stands in a sink");

    CompileArgs comp;
    auto* compile_cmd = app.add_subcommand("compile", "Compile a machine or formula into a game");
    compile_cmd->add_option("kind", comp.kind, "Reduction")
        ->required()
        ->check(CLI::IsMember({"tm2wcg", "tm2psg", "tm2anon", "tm2market", "sat2market"}));
    compile_cmd->add_option("input", comp.input, "Machine JSON, or DIMACS / formula JSON for sat2market")->required();
    compile_cmd->add_option("-o,--output", comp.output, "Output game path; symbols go to <out>.sym.json")->required();
    compile_cmd->add_option("--penalty", comp.penalty, "Penalty M")->capture_default_str();

    std::string round_kind;
    std::string round_profile = "@initial";
    auto* round_cmd = app.add_subcommand("verify-round", "Check one simulated machine step");
    round_cmd->add_option("variant", round_kind, "weighted or anonymous")
        ->required()
        ->check(CLI::IsMember({"weighted", "anonymous"}));
    round_cmd->add_option("compiled", game_path, "Compiled game")->required();
    round_cmd->add_option("--profile", round_profile, "Round-start profile")->capture_default_str();

    auto* vu_cmd = app.add_subcommand("check-valid-utility", "Check the valid-utility properties");
    vu_cmd->add_option("instance", game_path, "valid_utility document")->required();

    DotArgs dot;
    auto* dot_cmd = app.add_subcommand("export-dot", "Write the state graph in DOT");
    dot_cmd->add_option("game", game_path, "Game document")->required();
    dot_cmd->add_option("--from", dot.from, "Export the forward closure of this profile");
    dot_cmd->add_option("-o,--output", dot.output, "Output file (default stdout)");
    dot_cmd->add_flag("--names", dot.names, "Label with player and strategy names");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kAnswered : kError;
    }

    try {
        if (sinks_cmd->parsed()) return emit(g, cmd_sinks(g, game_path), out);
        if (in_sink_cmd->parsed()) return emit(g, cmd_in_sink(g, game_path, profile_text), out);
        if (pure_cmd->parsed()) return emit(g, cmd_has_pure(g, game_path), out);
        if (nonsingle_cmd->parsed()) return emit(g, cmd_has_non_singleton(g, game_path), out);
        if (sim_cmd->parsed()) return emit(g, cmd_simulate(g, game_path, sim), out);
        if (compile_cmd->parsed()) return emit(g, cmd_compile(comp), out);
        if (round_cmd->parsed()) return emit(g, cmd_verify_round(round_kind, game_path, round_profile), out);
        if (vu_cmd->parsed()) return emit(g, cmd_check_valid_utility(g, game_path), out);
        if (dot_cmd->parsed()) return cmd_export_dot(g, game_path, dot, out, err);
    } catch (const CapExceeded& e) {
        err << "inconclusive: " << e.what() << "\n";
        return kInconclusive;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}

}  // namespace sinkeq::cli
