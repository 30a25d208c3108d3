#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "censorgame/enumeration.hpp"
#include "censorgame/format.hpp"
#include "censorgame/game.hpp"
#include "censorgame/model.hpp"

namespace censorgame {

/// The full distributor x censor utility table. Rows are strategies in
/// lexicographically descending order (skewed at the top), columns are
/// censor actions ordered by false positives ascending (ties: fewer blocked
/// protocols, then smaller bitmask), so collateral damage grows left to
/// right.
struct UtilityGrid {
    ProtocolMix mix;
    UtilityParams params;
    std::vector<DistributorStrategy> rows;
    std::vector<CensorAction> cols;
    std::vector<double> col_false_positive;  // f per column
    std::vector<double> cells;               // row-major utilities
    std::vector<int> best_response_col;      // per row
    int equilibrium_row = 0;

    std::size_t row_count() const { return rows.size(); }
    std::size_t col_count() const { return cols.size(); }
    double cell(std::size_t r, std::size_t c) const { return cells[r * cols.size() + c]; }
};

/// Populate the grid. `threads` > 1 splits the row sweep across workers;
/// every worker writes a disjoint slice, so the result is identical for any
/// thread count. 0 selects the hardware concurrency.
inline UtilityGrid build_grid(const ProtocolMix& mix, const UtilityParams& params,
                              unsigned threads = 1) {
    UtilityGrid grid{mix,
                     params,
                     enumerate_distributor_strategies(mix, params.quantum()),
                     enumerate_censor_actions(mix),
                     {},
                     {},
                     {},
                     0};

    const int n = mix.size();
    grid.col_false_positive.resize(grid.cols.size());
    std::sort(grid.cols.begin(), grid.cols.end(), [&](CensorAction a, CensorAction b) {
        double fa = 0.0, fb = 0.0;
        for (int i = 0; i < n; ++i) {
            if (a.blocks(i)) fa += mix.cover(i);
            if (b.blocks(i)) fb += mix.cover(i);
        }
        if (fa != fb) return fa < fb;
        if (a.blocked_count() != b.blocked_count()) return a.blocked_count() < b.blocked_count();
        return a.bits < b.bits;
    });
    std::vector<std::size_t> col_of_mask(grid.cols.size());
    for (std::size_t c = 0; c < grid.cols.size(); ++c) {
        double f = 0.0;
        for (int i = 0; i < n; ++i)
            if (grid.cols[c].blocks(i)) f += mix.cover(i);
        grid.col_false_positive[c] = f;
        col_of_mask[grid.cols[c].bits] = c;
    }

    grid.cells.resize(grid.rows.size() * grid.cols.size());
    grid.best_response_col.resize(grid.rows.size());
    auto sweep_rows = [&](std::size_t r_begin, std::size_t r_end) {
        for (std::size_t r = r_begin; r < r_end; ++r) {
            for (std::size_t c = 0; c < grid.cols.size(); ++c)
                grid.cells[r * grid.cols.size() + c] =
                    compute_outcome(mix, params, grid.rows[r], grid.cols[c]).utility;
            grid.best_response_col[r] = static_cast<int>(
                col_of_mask[censor_best_response(mix, params, grid.rows[r]).action.bits]);
        }
    };

    unsigned worker_count = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (worker_count < 1) worker_count = 1;
    if (worker_count > grid.rows.size())
        worker_count = static_cast<unsigned>(grid.rows.size());
    if (worker_count <= 1) {
        sweep_rows(0, grid.rows.size());
    } else {
        std::vector<std::thread> workers;
        workers.reserve(worker_count);
        const std::size_t chunk = (grid.rows.size() + worker_count - 1) / worker_count;
        for (unsigned w = 0; w < worker_count; ++w) {
            const std::size_t r_begin = std::min(grid.rows.size(), w * chunk);
            const std::size_t r_end = std::min(grid.rows.size(), r_begin + chunk);
            workers.emplace_back(sweep_rows, r_begin, r_end);
        }
        for (std::thread& t : workers) t.join();
    }

    const Equilibrium eq = find_equilibrium(mix, params);
    auto it = std::find_if(grid.rows.begin(), grid.rows.end(),
                           [&](const DistributorStrategy& s) { return s == eq.strategy; });
    if (it == grid.rows.end())
        throw std::logic_error("equilibrium strategy missing from the enumerated rows");
    grid.equilibrium_row = static_cast<int>(it - grid.rows.begin());
    return grid;
}

namespace detail {

inline std::string strategy_label(const DistributorStrategy& s) {
    std::string out;
    for (std::size_t i = 0; i < s.shares.size(); ++i) {
        if (i > 0) out += '/';
        out += std::to_string(s.shares[i]);
    }
    return out;
}

}  // namespace detail

/// grid-CSV: column labels `A:<bitstring>` (bit i = protocol i blocked), row
/// labels `s1/s2/.../sn`, cells with exactly six fractional digits.
inline void write_grid_csv(const UtilityGrid& grid, std::ostream& out) {
    out << "distributor_strategy";
    for (const CensorAction& a : grid.cols) out << ",A:" << a.bitstring(grid.mix.size());
    out << '\n';
    for (std::size_t r = 0; r < grid.row_count(); ++r) {
        out << detail::strategy_label(grid.rows[r]);
        for (std::size_t c = 0; c < grid.col_count(); ++c)
            out << ',' << format_fixed(grid.cell(r, c), 6);
        out << '\n';
    }
}

/// Cell fill for a utility value: a linear ramp from blue (-100) through
/// white (0) to red (+100). Values are clamped first; the model cannot
/// produce anything outside the range, so clamping only guards float noise.
inline std::string heatmap_color(double utility) {
    const double u = std::clamp(utility, -100.0, 100.0);
    int r, g, b;
    if (u <= 0.0) {
        const int level = static_cast<int>(std::lround(255.0 * (u + 100.0) / 100.0));
        r = level;
        g = level;
        b = 255;
    } else {
        const int level = static_cast<int>(std::lround(255.0 * (1.0 - u / 100.0)));
        r = 255;
        g = level;
        b = level;
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

/// Standalone SVG 1.1 heatmap: one filled rect per cell, a black outline on
/// each row's best-response cell, and a red outline on the equilibrium cell
/// drawn last so it stays on top. Output is byte-identical across runs.
inline void render_heatmap_svg(const UtilityGrid& grid, int width, int height,
                               std::ostream& out) {
    if (width <= 0 || height <= 0)
        throw ConfigError("heatmap dimensions must be positive (got " + std::to_string(width) +
                          "x" + std::to_string(height) + ")");
    const double cell_w = static_cast<double>(width) / static_cast<double>(grid.col_count());
    const double cell_h = static_cast<double>(height) / static_cast<double>(grid.row_count());
    auto num = [](double v) { return format_fixed(v, 2); };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    for (std::size_t r = 0; r < grid.row_count(); ++r)
        for (std::size_t c = 0; c < grid.col_count(); ++c)
            out << "<rect x=\"" << num(c * cell_w) << "\" y=\"" << num(r * cell_h)
                << "\" width=\"" << num(cell_w) << "\" height=\"" << num(cell_h) << "\" fill=\""
                << heatmap_color(grid.cell(r, c)) << "\"/>\n";
    auto outline = [&](std::size_t r, std::size_t c, const char* color) {
        out << "<rect x=\"" << num(c * cell_w) << "\" y=\"" << num(r * cell_h) << "\" width=\""
            << num(cell_w) << "\" height=\"" << num(cell_h)
            << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
    };
    for (std::size_t r = 0; r < grid.row_count(); ++r)
        outline(r, static_cast<std::size_t>(grid.best_response_col[r]), "black");
    const auto eq_row = static_cast<std::size_t>(grid.equilibrium_row);
    outline(eq_row, static_cast<std::size_t>(grid.best_response_col[eq_row]), "red");
    out << "</svg>\n";
}

/// equilibrium-JSON with a fixed key order; censor_utility carries exactly
/// six fractional digits, all other numbers round-trip losslessly.
inline void write_equilibrium_report(const Equilibrium& eq, const ProtocolMix& mix,
                                     const UtilityParams& params, std::ostream& out) {
    const int n = mix.size();
    assert(std::ssize(eq.strategy.shares) == n);
    out << "{\n";
    out << "  \"params\": {\n";
    out << "    \"c\": " << format_double(params.c()) << ",\n";
    out << "    \"d\": " << format_double(params.d()) << ",\n";
    out << "    \"quantum\": " << params.quantum() << "\n";
    out << "  },\n";
    out << "  \"distributor_shares\": [\n";
    for (int i = 0; i < n; ++i)
        out << "    {\"protocol\": \"" << json_escape(mix.name(i)) << "\", \"share_percent\": "
            << eq.strategy.shares[static_cast<std::size_t>(i)] << (i + 1 < n ? "},\n" : "}\n");
    out << "  ],\n";
    out << "  \"censor_blocked\": [";
    bool first = true;
    for (int i = 0; i < n; ++i) {
        if (!eq.response.blocks(i)) continue;
        out << (first ? "" : ", ") << '"' << json_escape(mix.name(i)) << '"';
        first = false;
    }
    out << "],\n";
    out << "  \"true_positive_percent\": " << eq.outcome.true_positive << ",\n";
    out << "  \"false_positive_percent\": " << format_double(eq.outcome.false_positive) << ",\n";
    out << "  \"censor_utility\": " << format_fixed(eq.outcome.utility, 6) << ",\n";
    out << "  \"leak_percent\": " << eq.leak << "\n";
    out << "}\n";
}

}  // namespace censorgame
