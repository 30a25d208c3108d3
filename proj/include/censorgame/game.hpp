#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "censorgame/enumeration.hpp"
#include "censorgame/model.hpp"
#include "censorgame/utility.hpp"

namespace censorgame {

/// A censor action together with its outcome against the queried strategy.
struct BestResponse {
    CensorAction action;
    Outcome outcome;
};

/// Aggregate t and f over the blocked set and evaluate the censor utility.
inline Outcome compute_outcome(const ProtocolMix& mix, const UtilityParams& params,
                               const DistributorStrategy& strategy, CensorAction action) {
    const int n = mix.size();
    assert(std::ssize(strategy.shares) == n);
    assert(n >= kMaxMixProtocols || (action.bits >> n) == 0);
    int t = 0;
    double f = 0.0;
    for (int i = 0; i < n; ++i) {
        if (action.blocks(i)) {
            t += strategy.shares[static_cast<std::size_t>(i)];
            f += mix.cover(i);
        }
    }
    return Outcome{t, f, eval_utility(params, static_cast<double>(t), f)};
}

namespace detail {

// Total preference order for the censor: maximal utility first, exact ties
// broken by smaller f, then fewer blocked protocols, then smaller bitmask.
// Utility is compared through censor_loss (smaller = better), which orders
// identically for c < 0 without exp rounding.
struct CensorChoice {
    double loss = 0.0;
    double false_positive = 0.0;
    int blocked_count = 0;
    std::uint64_t bits = 0;

    bool better_than(const CensorChoice& o) const {
        if (loss != o.loss) return loss < o.loss;
        if (false_positive != o.false_positive) return false_positive < o.false_positive;
        if (blocked_count != o.blocked_count) return blocked_count < o.blocked_count;
        return bits < o.bits;
    }
};

}  // namespace detail

/// The utility-maximizing censor action against a fixed strategy, found by
/// exhaustive search over all 2^n subsets. Fully deterministic under the
/// tie-break order above.
inline BestResponse censor_best_response(const ProtocolMix& mix, const UtilityParams& params,
                                         const DistributorStrategy& strategy) {
    const int n = mix.size();
    assert(std::ssize(strategy.shares) == n);
    if (n > kMaxCensorActionProtocols)
        throw ConfigError("censor action space: " + std::to_string(n) + " protocols exceed the " +
                          std::to_string(kMaxCensorActionProtocols) +
                          "-protocol cap (2^n subsets)");
    detail::CensorChoice best;
    bool have = false;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        int t = 0;
        double f = 0.0;
        for (int i = 0; i < n; ++i) {
            if ((mask >> i) & 1u) {
                t += strategy.shares[static_cast<std::size_t>(i)];
                f += mix.cover(i);
            }
        }
        detail::CensorChoice cand{censor_loss(params, static_cast<double>(t), f), f,
                                  std::popcount(mask), mask};
        if (!have || cand.better_than(best)) {
            best = cand;
            have = true;
        }
    }
    CensorAction action{best.bits};
    return BestResponse{action, compute_outcome(mix, params, strategy, action)};
}

/// O(n) best response: block protocol p exactly when cover[p] < share[p]/d.
/// For c < 0 this minimizes censor_loss term by term; protocols sitting
/// exactly on the threshold stay unblocked, matching the exhaustive search's
/// smaller-f tie-break. Serves as an independent cross-check of
/// censor_best_response.
inline BestResponse censor_best_response_separable(const ProtocolMix& mix,
                                                   const UtilityParams& params,
                                                   const DistributorStrategy& strategy) {
    const int n = mix.size();
    assert(std::ssize(strategy.shares) == n);
    std::uint64_t mask = 0;
    for (int i = 0; i < n; ++i)
        if (mix.cover(i) < strategy.shares[static_cast<std::size_t>(i)] / params.d())
            mask |= std::uint64_t{1} << i;
    CensorAction action{mask};
    return BestResponse{action, compute_outcome(mix, params, strategy, action)};
}

/// Protocols the censor is unwilling to block even to stop all distributor
/// traffic: every p where blocking p alone at full true positives is worse
/// than blocking nothing. Decided by the utility comparison itself; the
/// closed-form threshold cover > 100/d is equivalent and used as a test
/// oracle only.
inline std::vector<int> find_critical_protocols(const ProtocolMix& mix,
                                                const UtilityParams& params) {
    const double idle = eval_utility(params, 0.0, 0.0);
    std::vector<int> out;
    for (int i = 0; i < mix.size(); ++i)
        if (eval_utility(params, 100.0, mix.cover(i)) < idle) out.push_back(i);
    return out;
}

/// Solve the leader-follower game: over all admissible strategies, pick the
/// one whose censor best response leaves the most distributor traffic
/// unblocked. Ties are broken by smaller inflicted f, then lexicographically
/// greatest share vector.
///
/// `leader_score`, when given, replaces leak as the leader's objective; it
/// receives the best-response t and must be strictly decreasing in t, which
/// leaves the selected equilibrium unchanged (only the censor's preferences
/// shape the game).
inline Equilibrium find_equilibrium(const ProtocolMix& mix, const UtilityParams& params,
                                    const std::function<double(int)>& leader_score = {}) {
    const auto strategies = enumerate_distributor_strategies(mix, params.quantum());
    assert(!strategies.empty());

    bool have = false;
    double best_score = 0.0;
    double best_f = 0.0;
    std::size_t best_index = 0;
    BestResponse best_response_found{};
    for (std::size_t i = 0; i < strategies.size(); ++i) {
        BestResponse br = censor_best_response(mix, params, strategies[i]);
        const int leak = 100 - br.outcome.true_positive;
        const double score =
            leader_score ? leader_score(br.outcome.true_positive) : static_cast<double>(leak);
        // first-seen wins full ties: enumeration order is lexicographically
        // descending, which is exactly the final tie-break
        const bool better = !have || score > best_score ||
                            (score == best_score && br.outcome.false_positive < best_f);
        if (better) {
            have = true;
            best_score = score;
            best_f = br.outcome.false_positive;
            best_index = i;
            best_response_found = br;
        }
    }

    Equilibrium eq{strategies[best_index], best_response_found.action, best_response_found.outcome,
                   100 - best_response_found.outcome.true_positive};

    // Cross-check: with a critical protocol present, the search must land on
    // 100% over the highest-cover one, left unblocked.
    const auto critical = find_critical_protocols(mix, params);
    if (!critical.empty()) {
        const int top = critical.front();
        if (eq.strategy.shares[static_cast<std::size_t>(top)] != 100 || eq.response.blocks(top))
            throw std::logic_error("equilibrium search failed the critical-protocol cross-check");
    }
    return eq;
}

}  // namespace censorgame
