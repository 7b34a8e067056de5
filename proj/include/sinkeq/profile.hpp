#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sinkeq {

using PlayerId = std::uint32_t;
using StrategyId = std::uint32_t;
using Payoff = std::int64_t;

/// One strategy index per player. Vertex of the state graph.
struct StrategyProfile {
    std::vector<StrategyId> choices;

    StrategyProfile() = default;
    explicit StrategyProfile(std::vector<StrategyId> c) : choices(std::move(c)) {}

    std::size_t size() const noexcept { return choices.size(); }
    StrategyId operator[](std::size_t i) const { return choices[i]; }
    StrategyId& operator[](std::size_t i) { return choices[i]; }

    StrategyProfile with(PlayerId player, StrategyId strategy) const {
        StrategyProfile p = *this;
        p.choices[player] = strategy;
        return p;
    }

    friend bool operator==(const StrategyProfile&, const StrategyProfile&) = default;
    friend auto operator<=>(const StrategyProfile&, const StrategyProfile&) = default;
};

struct ProfileHash {
    std::size_t operator()(const StrategyProfile& p) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (StrategyId s : p.choices) {
            h ^= s + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

std::string to_string(const StrategyProfile& p);

/// Mixed-radix little-endian codec over per-player strategy counts.
/// Player 0 is the least significant digit.
class ProfileCodec {
public:
    explicit ProfileCodec(std::vector<std::uint32_t> radices);

    /// Number of profiles, or nullopt when it does not fit in 64 bits.
    std::optional<std::uint64_t> space_size() const noexcept { return size_; }
    std::uint64_t encode(const StrategyProfile& p) const;
    StrategyProfile decode(std::uint64_t index) const;
    void decode_into(std::uint64_t index, StrategyProfile& out) const;
    std::span<const std::uint32_t> radices() const noexcept { return radices_; }

private:
    std::vector<std::uint32_t> radices_;
    std::optional<std::uint64_t> size_;
};

}  // namespace sinkeq
