#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "censorgame/enumeration.hpp"
#include "censorgame/game.hpp"
#include "censorgame/model.hpp"
#include "censorgame/report.hpp"
#include "censorgame/utility.hpp"

namespace censorgame::cli {

/// Output-stream or file failure. Mapped to exit status 1.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline ProtocolMix load_mix_file(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("--mix " + path + ": cannot open");
    ProtocolMix mix = [&] {
        try {
            return load_mix(in);
        } catch (const ConfigError& e) {
            throw ConfigError("--mix " + path + ": " + e.what());
        }
    }();
    if (mix.size() > kLargeMixWarningThreshold)
        err << "warning: mix has " << mix.size() << " protocols; the censor action space is 2^"
            << mix.size() << '\n';
    return mix;
}

// Artifacts are fully rendered before anything is written, so a failed
// validation never leaves a partial output file behind.
inline void write_output(const std::string& content, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << content;
        out.flush();
        if (!out) throw IoError("failed writing to standard output");
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError(path + ": cannot open for writing");
    file << content;
    file.flush();
    if (!file) throw IoError(path + ": write failed");
}

}  // namespace detail

/// Entry point behind the `censorgame` binary. Returns the process exit
/// status: 0 on success, 2 on configuration or validation errors, 1 on I/O
/// failure. Diagnostics go to `err`; single-artifact commands default to
/// `out`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"best-response and equilibrium solver for the censor vs. traffic-distributor "
                 "blocking game"};
    app.require_subcommand(0, 1);

    std::string seed_name;
    app.add_option("--seed-mix", seed_name,
                   "print a built-in mix as mix-CSV to standard output and exit "
                   "(available: paper)");

    struct CommonArgs {
        std::string mix_path;
        double c = 0.0;
        double d = 0.0;
        int quantum = 5;
        std::string out_path;
    };

    auto add_mix = [](CLI::App* sub, CommonArgs& a) {
        sub->add_option("--mix", a.mix_path, "protocol mix file (mix-CSV)")->required();
    };
    auto add_params = [](CLI::App* sub, CommonArgs& a) {
        sub->add_option("--c", a.c, "censor utility constant c (strictly negative)")->required();
        sub->add_option("--d", a.d, "censor utility constant d (strictly positive)")->required();
    };
    auto add_quantum = [](CLI::App* sub, CommonArgs& a) {
        sub->add_option("--quantum", a.quantum,
                        "distributor share quantization step in percent (divides 100)")
            ->capture_default_str();
    };
    auto add_out = [](CLI::App* sub, CommonArgs& a) {
        sub->add_option("--out", a.out_path, "output path (default: standard output)");
    };

    CommonArgs curve_args;
    CurveSpec curve_spec{{100.0, 50.0, 0.0}, 0.0, 35.0, 0.25};
    CLI::App* curve = app.add_subcommand("curve", "utility curves over a false-positive sweep "
                                                  "(curve-CSV)");
    add_params(curve, curve_args);
    add_out(curve, curve_args);
    curve->add_option("--t-values", curve_spec.t_values,
                      "true-positive percentages, one curve each")
        ->delimiter(',')
        ->capture_default_str();
    curve->add_option("--f-min", curve_spec.f_min, "sweep start")->capture_default_str();
    curve->add_option("--f-max", curve_spec.f_max, "sweep end (inclusive)")->capture_default_str();
    curve->add_option("--f-step", curve_spec.f_step, "sweep step")->capture_default_str();

    CommonArgs enum_args;
    bool count_only = false;
    CLI::App* enumerate = app.add_subcommand("enumerate", "list admissible distributor "
                                                          "strategies, one s1/s2/.../sn per line");
    add_mix(enumerate, enum_args);
    add_quantum(enumerate, enum_args);
    add_out(enumerate, enum_args);
    enumerate->add_flag("--count-only", count_only, "print only the strategy count");

    CommonArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "find the game equilibrium "
                                                  "(equilibrium-JSON)");
    add_mix(solve, solve_args);
    add_params(solve, solve_args);
    add_quantum(solve, solve_args);
    add_out(solve, solve_args);

    CommonArgs grid_args;
    std::string grid_csv_path;
    std::string grid_svg_path;
    int svg_width = 0;
    int svg_height = 0;
    unsigned grid_threads = 1;
    CLI::App* grid = app.add_subcommand("grid", "full strategy-x-action utility grid as grid-CSV "
                                                "and/or a heatmap SVG");
    add_mix(grid, grid_args);
    add_params(grid, grid_args);
    add_quantum(grid, grid_args);
    grid->add_option("--csv", grid_csv_path, "grid-CSV output path");
    grid->add_option("--svg", grid_svg_path, "heatmap SVG output path");
    grid->add_option("--width", svg_width, "SVG width in px (default: 15 per column)");
    grid->add_option("--height", svg_height, "SVG height in px (default: 3 per row)");
    grid->add_option("--threads", grid_threads, "worker threads for the grid sweep (0 = auto)")
        ->capture_default_str();

    CommonArgs critical_args;
    CLI::App* critical = app.add_subcommand("critical", "list protocols the censor is unwilling "
                                                        "to block, one name per line");
    add_mix(critical, critical_args);
    add_params(critical, critical_args);
    add_out(critical, critical_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (!seed_name.empty()) {
            if (app.get_subcommands().size() > 0)
                throw ConfigError("--seed-mix cannot be combined with a subcommand");
            std::ostringstream csv;
            write_mix_csv(seed_mix(seed_name), csv);
            detail::write_output(csv.str(), "", out);
            return 0;
        }

        if (*curve) {
            UtilityParams params(curve_args.c, curve_args.d);
            const auto points = utility_curve(params, curve_spec);
            std::ostringstream csv;
            write_curve_csv(points, csv);
            detail::write_output(csv.str(), curve_args.out_path, out);
            return 0;
        }

        if (*enumerate) {
            const ProtocolMix mix = detail::load_mix_file(enum_args.mix_path, err);
            if (enum_args.quantum < 1 || 100 % enum_args.quantum != 0)
                throw ConfigError("--quantum must be a positive divisor of 100 (got " +
                                  std::to_string(enum_args.quantum) + ")");
            std::ostringstream text;
            if (count_only) {
                text << count_distributor_strategies(mix.size(), enum_args.quantum) << '\n';
            } else {
                for (const DistributorStrategy& s :
                     enumerate_distributor_strategies(mix, enum_args.quantum))
                    text << censorgame::detail::strategy_label(s) << '\n';
            }
            detail::write_output(text.str(), enum_args.out_path, out);
            return 0;
        }

        if (*solve) {
            const ProtocolMix mix = detail::load_mix_file(solve_args.mix_path, err);
            UtilityParams params(solve_args.c, solve_args.d, solve_args.quantum);
            const Equilibrium eq = find_equilibrium(mix, params);
            std::ostringstream json;
            write_equilibrium_report(eq, mix, params, json);
            detail::write_output(json.str(), solve_args.out_path, out);
            return 0;
        }

        if (*grid) {
            if (grid_csv_path.empty() && grid_svg_path.empty())
                throw ConfigError("grid: at least one of --csv or --svg is required");
            const ProtocolMix mix = detail::load_mix_file(grid_args.mix_path, err);
            UtilityParams params(grid_args.c, grid_args.d, grid_args.quantum);
            const UtilityGrid table = build_grid(mix, params, grid_threads);
            std::string csv_text;
            std::string svg_text;
            if (!grid_csv_path.empty()) {
                std::ostringstream csv;
                write_grid_csv(table, csv);
                csv_text = csv.str();
            }
            if (!grid_svg_path.empty()) {
                const int width =
                    svg_width > 0 ? svg_width : 15 * static_cast<int>(table.col_count());
                const int height =
                    svg_height > 0 ? svg_height : 3 * static_cast<int>(table.row_count());
                std::ostringstream svg;
                render_heatmap_svg(table, width, height, svg);
                svg_text = svg.str();
            }
            if (!grid_csv_path.empty()) detail::write_output(csv_text, grid_csv_path, out);
            if (!grid_svg_path.empty()) detail::write_output(svg_text, grid_svg_path, out);
            return 0;
        }

        if (*critical) {
            const ProtocolMix mix = detail::load_mix_file(critical_args.mix_path, err);
            UtilityParams params(critical_args.c, critical_args.d);
            std::ostringstream names;
            for (int i : find_critical_protocols(mix, params)) names << mix.name(i) << '\n';
            detail::write_output(names.str(), critical_args.out_path, out);
            return 0;
        }

        err << "error: a subcommand is required\n\n" << app.help();
        return 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace censorgame::cli
