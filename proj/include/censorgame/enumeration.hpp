#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "censorgame/model.hpp"

namespace censorgame {

// Hard cap for exhaustive censor-action enumeration (2^20 ~ 10^6 subsets).
inline constexpr int kMaxCensorActionProtocols = 20;

/// All 2^n censor actions over the canonical mix order, each exactly once,
/// ordered by ascending bitmask.
inline std::vector<CensorAction> enumerate_censor_actions(const ProtocolMix& mix) {
    const int n = mix.size();
    if (n > kMaxCensorActionProtocols)
        throw ConfigError("censor action space: " + std::to_string(n) + " protocols exceed the " +
                          std::to_string(kMaxCensorActionProtocols) +
                          "-protocol cap (2^n subsets)");
    std::vector<CensorAction> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask)
        out.push_back(CensorAction{mask});
    return out;
}

/// True iff shares are non-increasing along the canonical (cover-descending)
/// order. Only canonical positions are compared, never raw cover values, so
/// equal-cover protocols (ordered by name) admit any order of equal shares.
inline bool is_cover_aligned(std::span<const int> shares, const ProtocolMix& mix) {
    assert(std::ssize(shares) == mix.size());
    for (std::size_t i = 1; i < shares.size(); ++i)
        if (shares[i - 1] < shares[i]) return false;
    return true;
}

namespace detail {

inline void emit_aligned(int slot, int slots, int remaining, int cap, std::vector<int>& prefix,
                         int quantum, std::vector<DistributorStrategy>& out) {
    if (slot == slots) {
        if (remaining == 0) {
            std::vector<int> shares(prefix.size());
            for (std::size_t i = 0; i < prefix.size(); ++i) shares[i] = prefix[i] * quantum;
            out.push_back(DistributorStrategy{std::move(shares)});
        }
        return;
    }
    const int slots_after = slots - slot - 1;
    int hi = remaining < cap ? remaining : cap;
    for (int v = hi; v >= 0; --v) {
        // descending v yields lexicographically descending output
        if (static_cast<long>(v) * (slots_after + 1) < remaining) break;  // cannot reach the sum
        prefix.push_back(v);
        emit_aligned(slot + 1, slots, remaining - v, v, prefix, quantum, out);
        prefix.pop_back();
    }
}

}  // namespace detail

/// Every cover-aligned distributor strategy: non-increasing lists of n
/// non-negative multiples of `quantum` summing to 100, ordered
/// lexicographically descending (most skewed first).
inline std::vector<DistributorStrategy> enumerate_distributor_strategies(const ProtocolMix& mix,
                                                                         int quantum) {
    if (quantum < 1 || 100 % quantum != 0)
        throw ConfigError("quantum must be a positive divisor of 100 (got " +
                          std::to_string(quantum) + ")");
    const int units = 100 / quantum;
    std::vector<DistributorStrategy> out;
    std::vector<int> prefix;
    prefix.reserve(static_cast<std::size_t>(mix.size()));
    detail::emit_aligned(0, mix.size(), units, units, prefix, quantum, out);
    return out;
}

/// Number of cover-aligned strategies, computed by the partition recurrence
/// p(m, k) = p(m, k-1) + p(m-k, k) over m = 100/quantum units and at most
/// k = protocol_count parts -- never by enumeration, so it can serve as an
/// independent check on the enumerator.
inline std::uint64_t count_distributor_strategies(int protocol_count, int quantum) {
    if (quantum < 1 || 100 % quantum != 0)
        throw ConfigError("quantum must be a positive divisor of 100 (got " +
                          std::to_string(quantum) + ")");
    if (protocol_count < 1)
        throw ConfigError("protocol count must be positive (got " +
                          std::to_string(protocol_count) + ")");
    const int m = 100 / quantum;
    // p[j] accumulates partitions of j into parts <= k as k grows
    std::vector<std::uint64_t> p(static_cast<std::size_t>(m) + 1, 0);
    p[0] = 1;
    for (int k = 1; k <= protocol_count; ++k)
        for (int j = k; j <= m; ++j)
            p[static_cast<std::size_t>(j)] += p[static_cast<std::size_t>(j - k)];
    return p[static_cast<std::size_t>(m)];
}

}  // namespace censorgame
