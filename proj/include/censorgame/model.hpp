#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "censorgame/format.hpp"

namespace censorgame {

/// Thrown for any configuration or input validation failure.
/// The CLI maps these to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A protocol the distributor can impersonate. `cover_share` is the percent
/// of total observed traffic carried by the protocol's legitimate users;
/// blocking the protocol turns that share into false positives.
struct Protocol {
    std::string name;
    double cover_share = 0.0;  // percent of total traffic, in [0, 100]

    bool operator==(const Protocol&) const = default;
};

// Mixes larger than this still load, but callers are warned: the censor
// strategy space is 2^n.
inline constexpr int kLargeMixWarningThreshold = 20;

// Representation limit: censor actions are stored as 64-bit blocked masks.
inline constexpr int kMaxMixProtocols = 64;

/// An immutable, canonically ordered list of protocols. Canonical order is
/// cover_share descending with ties broken by name ascending, so every
/// index-based structure in the library (strategies, actions, grids) refers
/// to one reproducible ordering.
class ProtocolMix {
public:
    explicit ProtocolMix(std::vector<Protocol> protocols)
        : protocols_(std::move(protocols)) {
        if (protocols_.empty())
            throw ConfigError("mix: at least one protocol is required");
        if (std::ssize(protocols_) > kMaxMixProtocols)
            throw ConfigError("mix: at most " + std::to_string(kMaxMixProtocols) +
                              " protocols are supported");
        for (const Protocol& p : protocols_) {
            if (p.name.empty())
                throw ConfigError("mix: empty protocol name");
            if (!(p.cover_share >= 0.0) || !(p.cover_share <= 100.0))
                throw ConfigError("mix: cover share of '" + p.name +
                                  "' out of range [0, 100]: " + format_double(p.cover_share));
        }
        std::sort(protocols_.begin(), protocols_.end(), [](const Protocol& a, const Protocol& b) {
            if (a.cover_share != b.cover_share) return a.cover_share > b.cover_share;
            return a.name < b.name;
        });
        for (std::size_t i = 1; i < protocols_.size(); ++i)
            if (protocols_[i].name == protocols_[i - 1].name)
                throw ConfigError("mix: duplicate protocol name '" + protocols_[i].name + "'");
        double sum = 0.0;
        for (const Protocol& p : protocols_) sum += p.cover_share;
        // small slack forgives accumulated representation error only
        if (sum > 100.0 + 1e-9)
            throw ConfigError("mix: cover shares sum to " + format_double(sum) +
                              ", exceeding 100");
    }

    int size() const { return static_cast<int>(protocols_.size()); }
    const Protocol& operator[](int i) const { return protocols_[static_cast<std::size_t>(i)]; }
    const std::vector<Protocol>& protocols() const { return protocols_; }
    const std::string& name(int i) const { return protocols_[static_cast<std::size_t>(i)].name; }
    double cover(int i) const { return protocols_[static_cast<std::size_t>(i)].cover_share; }

    double total_cover() const {
        double sum = 0.0;
        for (const Protocol& p : protocols_) sum += p.cover_share;
        return sum;
    }

    bool operator==(const ProtocolMix&) const = default;

private:
    std::vector<Protocol> protocols_;
};

/// Censor utility parameters: `c` scales how quickly dissatisfaction grows
/// (strictly negative), `d` trades false negatives against false positives
/// (strictly positive), `quantum` is the distributor share quantization step
/// in percent and must divide 100.
class UtilityParams {
public:
    UtilityParams(double c, double d, int quantum = 5) : c_(c), d_(d), quantum_(quantum) {
        if (!(c < 0.0) || !std::isfinite(c))
            throw ConfigError("c must be strictly negative (got " + format_double(c) + ")");
        if (!(d > 0.0) || !std::isfinite(d))
            throw ConfigError("d must be strictly positive (got " + format_double(d) + ")");
        if (quantum < 1 || 100 % quantum != 0)
            throw ConfigError("quantum must be a positive divisor of 100 (got " +
                              std::to_string(quantum) + ")");
    }

    double c() const { return c_; }
    double d() const { return d_; }
    int quantum() const { return quantum_; }

private:
    double c_;
    double d_;
    int quantum_;
};

/// A censor move: the set of protocols blocked entirely, as a bitmask over
/// canonical mix indices. Bit i set means protocol i is blocked.
struct CensorAction {
    std::uint64_t bits = 0;

    bool blocks(int i) const { return (bits >> i) & 1u; }
    int blocked_count() const { return std::popcount(bits); }

    std::vector<int> blocked_indices() const {
        std::vector<int> out;
        for (std::uint64_t b = bits; b != 0; b &= b - 1)
            out.push_back(std::countr_zero(b));
        return out;
    }

    /// "0101..." with character i giving the blocked flag of protocol i.
    std::string bitstring(int protocol_count) const {
        std::string s(static_cast<std::size_t>(protocol_count), '0');
        for (int i = 0; i < protocol_count; ++i)
            if (blocks(i)) s[static_cast<std::size_t>(i)] = '1';
        return s;
    }

    bool operator==(const CensorAction&) const = default;
};

/// A distributor move: integer traffic percentages aligned with the
/// canonical mix order. Valid strategies sum to 100, use multiples of the
/// quantum, and are non-increasing (cover-aligned).
struct DistributorStrategy {
    std::vector<int> shares;

    bool operator==(const DistributorStrategy&) const = default;
};

/// Validating constructor for externally supplied share vectors.
inline DistributorStrategy make_strategy(std::vector<int> shares, const ProtocolMix& mix,
                                         int quantum) {
    if (std::ssize(shares) != mix.size())
        throw ConfigError("strategy: expected " + std::to_string(mix.size()) +
                          " shares, got " + std::to_string(shares.size()));
    if (quantum < 1 || 100 % quantum != 0)
        throw ConfigError("quantum must be a positive divisor of 100 (got " +
                          std::to_string(quantum) + ")");
    int sum = 0;
    for (std::size_t i = 0; i < shares.size(); ++i) {
        int s = shares[i];
        if (s < 0)
            throw ConfigError("strategy: share " + std::to_string(i + 1) + " is negative");
        if (s % quantum != 0)
            throw ConfigError("strategy: share " + std::to_string(i + 1) + " (" +
                              std::to_string(s) + ") is not a multiple of quantum " +
                              std::to_string(quantum));
        if (i > 0 && shares[i - 1] < s)
            throw ConfigError("strategy: shares must be non-increasing in canonical order "
                              "(share " + std::to_string(i + 1) + " exceeds share " +
                              std::to_string(i) + ")");
        sum += s;
    }
    if (sum != 100)
        throw ConfigError("strategy: shares sum to " + std::to_string(sum) + ", expected 100");
    return DistributorStrategy{std::move(shares)};
}

/// The result of one (strategy, action) cell: t is the percent of
/// distributor traffic blocked, f the percent of total traffic blocked as
/// cover, and utility the censor's satisfaction in (-100, 100].
struct Outcome {
    int true_positive = 0;
    double false_positive = 0.0;
    double utility = 0.0;
};

/// A solved game: the distributor's committed strategy, the censor's best
/// response to it, the induced outcome, and the leak (percent of
/// distributor traffic passing unblocked, = 100 - t).
struct Equilibrium {
    DistributorStrategy strategy;
    CensorAction response;
    Outcome outcome;
    int leak = 0;
};

inline constexpr std::string_view kMixCsvHeader = "protocol,cover_share_percent";

namespace detail {

inline void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace detail

/// Parse the mix-CSV format: a `protocol,cover_share_percent` header line
/// followed by one `name,decimal` row per protocol. Errors carry the
/// offending line number.
inline ProtocolMix load_mix(std::istream& in) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        detail::strip_cr(line);
        lines.push_back(std::move(line));
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    if (lines.empty())
        throw ConfigError("mix line 1: missing header '" + std::string(kMixCsvHeader) + "'");
    if (lines.front() != kMixCsvHeader)
        throw ConfigError("mix line 1: header must be exactly '" + std::string(kMixCsvHeader) +
                          "'");
    if (lines.size() == 1)
        throw ConfigError("mix: no protocol rows");

    std::vector<Protocol> protocols;
    std::unordered_map<std::string, std::size_t> seen;  // name -> line number
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        const std::size_t lineno = i + 1;
        const auto where = "mix line " + std::to_string(lineno);
        auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw ConfigError(where + ": expected exactly one 'name,decimal' pair");
        std::string name = line.substr(0, comma);
        std::string value = line.substr(comma + 1);
        if (name.empty())
            throw ConfigError(where + ": empty protocol name");
        double share = 0.0;
        const char* first = value.data();
        const char* last = value.data() + value.size();
        auto [ptr, ec] = std::from_chars(first, last, share);
        if (ec != std::errc{} || ptr != last || !std::isfinite(share))
            throw ConfigError(where + ": malformed cover share '" + value + "'");
        if (share < 0.0 || share > 100.0)
            throw ConfigError(where + ": cover share " + value + " out of range [0, 100]");
        if (auto [it, inserted] = seen.emplace(name, lineno); !inserted)
            throw ConfigError(where + ": duplicate protocol name '" + name +
                              "' (first seen on line " + std::to_string(it->second) + ")");
        protocols.push_back(Protocol{std::move(name), share});
    }
    return ProtocolMix(std::move(protocols));
}

/// Emit a mix in mix-CSV form, in canonical order. load_mix(write_mix_csv(m))
/// reproduces m exactly.
inline void write_mix_csv(const ProtocolMix& mix, std::ostream& out) {
    out << kMixCsvHeader << '\n';
    for (const Protocol& p : mix.protocols())
        out << p.name << ',' << format_double(p.cover_share) << '\n';
}

/// Built-in demonstration mix: the top six protocols of a 2014 US traffic
/// survey. Available to the CLI as `--seed-mix paper`.
inline ProtocolMix seed_mix(std::string_view name) {
    if (name == "paper") {
        return ProtocolMix({{"YouTube", 13.25},
                            {"HTTP", 8.47},
                            {"BitTorrent", 5.03},
                            {"SSL", 2.63},
                            {"MPEG", 2.44},
                            {"AmazonVideo", 2.37}});
    }
    throw ConfigError("unknown seed mix '" + std::string(name) + "' (available: paper)");
}

}  // namespace censorgame
