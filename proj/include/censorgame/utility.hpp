#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "censorgame/format.hpp"
#include "censorgame/model.hpp"

namespace censorgame {

/// The linear scalar (100 - t) / d + f. For c < 0, censor utility is a
/// strictly decreasing function of this value, so best-response comparisons
/// use it directly (smaller loss = happier censor) instead of comparing
/// exponentiated utilities. The orderings are identical in exact arithmetic
/// and the linear form is the numerically stable one.
inline double censor_loss(const UtilityParams& params, double t, double f) {
    return (100.0 - t) / params.d() + f;
}

/// Censor utility for a blocking outcome with true-positive percentage t and
/// false-positive percentage f:
///
///   U = 100 - 200 * (1 - exp(c * ((100 - t) / d + f)))
///
/// For c < 0 the value lies in (-100, 100], reaching 100 exactly when all
/// distributor traffic is blocked at zero collateral damage (t=100, f=0),
/// and approaching -100 as f grows without bound.
inline double eval_utility(const UtilityParams& params, double t, double f) {
    assert(t >= 0.0 && t <= 100.0);
    assert(f >= 0.0);
    return 100.0 - 200.0 * (1.0 - std::exp(params.c() * censor_loss(params, t, f)));
}

/// A sweep request for utility curves: one curve per t value, with f running
/// from f_min to f_max inclusive in f_step increments.
struct CurveSpec {
    std::vector<double> t_values;
    double f_min = 0.0;
    double f_max = 35.0;
    double f_step = 0.25;
};

inline void validate_curve_spec(const CurveSpec& spec) {
    if (spec.t_values.empty())
        throw ConfigError("t-values: at least one true-positive percentage is required");
    for (double t : spec.t_values)
        if (!(t >= 0.0) || !(t <= 100.0))
            throw ConfigError("t-values: " + format_double(t) + " out of range [0, 100]");
    if (!(spec.f_min >= 0.0))
        throw ConfigError("f-min must be non-negative (got " + format_double(spec.f_min) + ")");
    if (!(spec.f_min <= spec.f_max))
        throw ConfigError("f-min (" + format_double(spec.f_min) + ") exceeds f-max (" +
                          format_double(spec.f_max) + ")");
    if (!(spec.f_step > 0.0))
        throw ConfigError("f-step must be positive (got " + format_double(spec.f_step) + ")");
}

struct CurvePoint {
    double t = 0.0;
    double f = 0.0;
    double utility = 0.0;
};

/// One row per (t, f) pair, ordered by t as given, then f ascending.
/// f values are produced by index (f_min + k * f_step) rather than repeated
/// addition, and the endpoint is included whenever f_max - f_min is a whole
/// number of steps.
inline std::vector<CurvePoint> utility_curve(const UtilityParams& params, const CurveSpec& spec) {
    validate_curve_spec(spec);
    const long steps = static_cast<long>(std::floor((spec.f_max - spec.f_min) / spec.f_step + 1e-9));
    std::vector<CurvePoint> out;
    out.reserve(spec.t_values.size() * static_cast<std::size_t>(steps + 1));
    for (double t : spec.t_values) {
        for (long k = 0; k <= steps; ++k) {
            const double f = spec.f_min + static_cast<double>(k) * spec.f_step;
            out.push_back({t, f, eval_utility(params, t, f)});
        }
    }
    return out;
}

/// curve-CSV: header `t,f,utility`, utility with exactly six fractional digits.
inline void write_curve_csv(std::span<const CurvePoint> points, std::ostream& out) {
    out << "t,f,utility\n";
    for (const CurvePoint& p : points)
        out << format_double(p.t) << ',' << format_double(p.f) << ','
            << format_fixed(p.utility, 6) << '\n';
}

}  // namespace censorgame
