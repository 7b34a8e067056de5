#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sinkeq/game.hpp"

namespace sinkeq {

class CongestionGame;

enum class Semantics { Improvement, BestResponse };

std::string_view to_string(Semantics s);
Semantics parse_semantics(std::string_view text);

inline constexpr std::uint64_t kDefaultFullCap = std::uint64_t{1} << 26;
inline constexpr std::uint64_t kDefaultClosureCap = 10'000'000;

/// Defaults above, overridden by SINKEQ_CAP / SINKEQ_CLOSURE_CAP when set.
std::uint64_t default_full_cap();
std::uint64_t default_closure_cap();

struct Move {
    PlayerId player;
    StrategyId strategy;
    Payoff new_utility;
    friend bool operator==(const Move&, const Move&) = default;
};

/// Qualifying unilateral moves, ascending by player then strategy.
std::vector<Move> improving_moves(const Game& game, const StrategyProfile& profile,
                                  Semantics semantics = Semantics::Improvement);
/// Moves of one player only.
std::vector<Move> improving_moves_of(const Game& game, const StrategyProfile& profile, PlayerId player,
                                     Semantics semantics = Semantics::Improvement);

bool is_pure_ne(const Game& game, const StrategyProfile& profile);

/// alpha = num/den with 0 < alpha < 1.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

/// c_i(s_-i, s'_i) >= (1 - alpha) c_i(S) for every player and deviation.
bool is_alpha_ne(const Game& game, const StrategyProfile& profile, Rational alpha);

struct LabeledEdge {
    std::uint32_t target;
    PlayerId player;
    friend bool operator==(const LabeledEdge&, const LabeledEdge&) = default;
};

/// Explicit subgraph: vertices in discovery order, labeled adjacency.
struct ExplicitGraph {
    std::vector<StrategyProfile> states;
    std::vector<std::vector<LabeledEdge>> edges;
    std::unordered_map<StrategyProfile, std::uint32_t, ProfileHash> index;
    /// False when the cap stopped exploration; edges of unexpanded states are empty.
    bool complete = true;

    std::size_t size() const noexcept { return states.size(); }
    std::size_t edge_count() const noexcept;
    std::optional<std::uint32_t> find(const StrategyProfile& p) const;
};

/// BFS from `start`. Successors are visited in improving_moves order.
ExplicitGraph forward_closure(const Game& game, const StrategyProfile& start, Semantics semantics,
                              std::uint64_t cap);

/// Whole profile space, vertex v is the profile with codec index v.
ExplicitGraph full_state_graph(const Game& game, Semantics semantics, std::uint64_t cap);

/// Iterative Tarjan. Each component sorted ascending; components ordered by
/// their smallest vertex.
std::vector<std::vector<std::uint32_t>> sccs(const ExplicitGraph& graph);

/// Per-vertex flag: member of a component with no outgoing edge.
std::vector<bool> bottom_flags(const ExplicitGraph& graph, const std::vector<std::vector<std::uint32_t>>& components);

struct SinkEquilibrium {
    std::vector<StrategyProfile> members;
    bool singleton() const noexcept { return members.size() == 1; }
};

struct SearchStats {
    std::uint64_t states = 0;
    std::uint64_t edges = 0;
    std::uint64_t components = 0;
};

/// Bottom SCCs of the full state graph. Throws CapExceeded above `cap`.
std::vector<SinkEquilibrium> sinks(const Game& game, Semantics semantics, std::uint64_t cap,
                                   SearchStats* stats = nullptr);

struct InSinkResult {
    std::optional<bool> answer;  // nullopt: inconclusive, closure cap hit
    std::uint64_t explored = 0;
    std::uint64_t edges = 0;
    std::uint64_t cap = 0;
};

/// True iff every state reachable from `profile` can reach it back.
InSinkResult in_a_sink(const Game& game, const StrategyProfile& profile, Semantics semantics, std::uint64_t cap);
/// Same question on an already computed closure rooted anywhere.
bool in_a_sink_within(const ExplicitGraph& closure, std::uint32_t vertex);

/// Exhaustive scan with early exit; returns a witness when one exists.
std::optional<StrategyProfile> find_pure_ne(const Game& game, std::uint64_t cap, std::uint64_t* scanned = nullptr);
bool has_singleton_sink(const Game& game, std::uint64_t cap);
bool has_non_singleton_sink(const Game& game, Semantics semantics, std::uint64_t cap);

struct WalkPolicy {
    enum class Kind { FirstImprover, RandomImprover, PriorityList };
    Kind kind = Kind::FirstImprover;
    std::uint64_t seed = 0;
    std::vector<PlayerId> order;  // PriorityList only; unlisted players never move

    static WalkPolicy first() { return {}; }
    static WalkPolicy random(std::uint64_t seed) { return {Kind::RandomImprover, seed, {}}; }
    static WalkPolicy priority(std::vector<PlayerId> order) { return {Kind::PriorityList, 0, std::move(order)}; }
};

struct WalkStep {
    PlayerId player;
    StrategyId from;
    StrategyId to;
};

struct WalkResult {
    enum class Outcome { ReachedSinkState, StillMoving };
    Outcome outcome = Outcome::StillMoving;
    std::vector<StrategyProfile> path;  // path[0] = start
    std::vector<WalkStep> moves;
    /// Step index at which the walk first stood on a sink state, if known.
    std::optional<std::size_t> entered_sink_at;
    /// False when the closure cap prevented sink classification.
    bool sink_known = true;
};

struct WalkOptions {
    Semantics semantics = Semantics::Improvement;
    std::size_t max_steps = 1000;
    /// Stop as soon as the current profile lies in a sink.
    bool stop_at_sink = false;
    std::uint64_t closure_cap = kDefaultClosureCap;
};

/// Walk in the state graph. Random choices use mt19937_64 seeded by the
/// policy; otherwise the lowest qualifying strategy index moves.
WalkResult simulate_walk(const Game& game, const StrategyProfile& start, const WalkPolicy& policy,
                         const WalkOptions& options);

/// Sum over resources of d_e(1) + ... + d_e(n_e). Unweighted shared delays only.
Payoff rosenthal_potential(const CongestionGame& game, const StrategyProfile& profile);

struct DotOptions {
    bool decode_names = false;
    std::string graph_name = "state_graph";
};

/// Vertices labeled with their index in `graph` (and optionally decoded
/// strategy names); edges labeled with the mover; sink members doubled.
std::string export_dot(const Game& game, const ExplicitGraph& graph, const DotOptions& options = {});

struct IsomorphismResult {
    bool isomorphic = true;
    std::string mismatch;
};

/// Checks that `map` is a bijection from a's states onto b's states that
/// carries each labeled edge (u -p-> v) to (map u -player_map[p]-> map v)
/// and nothing else.
IsomorphismResult compare_closures(const ExplicitGraph& a, const ExplicitGraph& b,
                                   const std::function<StrategyProfile(const StrategyProfile&)>& map,
                                   const std::vector<PlayerId>& player_map);

/// View of `base` in which the listed players never move: their deviation
/// utilities are flat, so they contribute no edges.
class FrozenPlayersGame final : public Game {
public:
    FrozenPlayersGame(GamePtr base, std::vector<PlayerId> frozen);

    GameClass game_class() const noexcept override { return base_->game_class(); }
    std::size_t num_players() const noexcept override { return base_->num_players(); }
    std::size_t num_strategies(PlayerId player) const override { return base_->num_strategies(player); }
    Payoff utility(PlayerId player, const StrategyProfile& profile) const override;
    void deviation_utilities(PlayerId player, const StrategyProfile& profile, std::vector<Payoff>& out) const override;
    std::optional<Payoff> cost(PlayerId player, const StrategyProfile& profile) const override;
    std::string player_name(PlayerId player) const override { return base_->player_name(player); }
    std::string strategy_name(PlayerId player, StrategyId s) const override { return base_->strategy_name(player, s); }

private:
    GamePtr base_;
    std::vector<bool> frozen_;
};

}  // namespace sinkeq
