#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "anchorplan/errors.hpp"
#include "anchorplan/ssp.hpp"

namespace anchorplan {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;

/// One downward ray through the stratified medium.  Layer i (1-based)
/// spans depths [i-1, i] and is traversed at the grazing angle
/// grazing[i-1], whose cosine obeys the refraction invariant
/// cos(theta_i)/s_i == cos(theta_0)/s_0.
struct RayPath {
    double theta0 = 0.0;          // launch grazing angle at the surface, rad
    std::vector<double> grazing;  // per-layer grazing angle theta_{i-1}, rad
    std::vector<double> dh;       // per-layer horizontal advance, m
    std::vector<double> dl;       // per-layer slant segment, m
    double h = 0.0;               // total horizontal distance, m
    double length = 0.0;          // total path length, m
    double time = 0.0;            // total travel time, s
};

/// Totals of a ray without the per-layer breakdown.
struct RayTotals {
    double h = 0.0;
    double length = 0.0;
    double time = 0.0;
};

namespace detail {

inline void validate_target_depth(const SoundSpeedProfile& p, int depth,
                                  const char* where) {
    require_standardized(p, where);
    if (depth < 1 || depth > p.layer_count())
        throw ValidationError(std::string(where) +
                              ": target depth outside profile range");
}

inline void validate_theta0(double theta0) {
    if (!(theta0 > 0.0) || !(theta0 < kHalfPi))
        throw ValidationError("launch grazing angle must lie in (0, pi/2)");
}

/// Largest admissible cos(theta0) for a ray reaching `depth`: the ray
/// turns once cos(theta0) >= s_0 / max layer speed.
inline double max_cos_launch(const std::vector<double>& speeds, int depth) {
    const double s0 = speeds.front();
    double smax = s0;
    for (int i = 0; i < depth; ++i)
        smax = std::max(smax, speeds[static_cast<std::size_t>(i)]);
    return std::min(1.0, s0 / smax);
}

/// Closed-form totals and their derivatives with respect to c = cos(theta0).
/// Every term shares the layer denominator s_0^2 - s_{i-1}^2 c^2.
struct TotalsEval {
    double h = 0.0, length = 0.0, time = 0.0;
    double dh_dc = 0.0, dlength_dc = 0.0;
};

inline TotalsEval eval_totals(const std::vector<double>& speeds, int depth,
                              double c0) {
    const double s0 = speeds.front();
    const double s0sq = s0 * s0;
    const double c0sq = c0 * c0;
    TotalsEval out;
    for (int i = 1; i <= depth; ++i) {
        const double s = speeds[static_cast<std::size_t>(i - 1)];
        const double den = s0sq - s * s * c0sq;
        if (den <= 0.0)
            throw TurningRayError("ray turns at layer " + std::to_string(i));
        const double rd = 1.0 / std::sqrt(den);
        const double rd3 = rd * rd * rd;
        out.h += s * c0 * rd;
        out.length += s0 * rd;
        out.time += s0 * rd / s;
        out.dh_dc += s * s0sq * rd3;
        out.dlength_dc += s0 * s * s * c0 * rd3;
    }
    return out;
}

}  // namespace detail

/// Smallest launch grazing angle that still reaches `target_depth`
/// without turning; 0 when no traversed layer is faster than the surface.
inline double min_grazing_angle(const SoundSpeedProfile& profile,
                                int target_depth) {
    detail::validate_target_depth(profile, target_depth, "min_grazing_angle");
    return std::acos(detail::max_cos_launch(profile.speeds, target_depth));
}

/// Traces a ray layer by layer down to `target_depth`, recording the
/// grazing angle and the horizontal/slant advance of every layer.
inline RayPath trace_down(const SoundSpeedProfile& profile, double theta0,
                          int target_depth) {
    detail::validate_target_depth(profile, target_depth, "trace_down");
    detail::validate_theta0(theta0);

    const double s0 = profile.surface_speed();
    const double snell = std::cos(theta0) / s0;  // conserved along the ray

    RayPath ray;
    ray.theta0 = theta0;
    ray.grazing.resize(static_cast<std::size_t>(target_depth));
    ray.dh.resize(static_cast<std::size_t>(target_depth));
    ray.dl.resize(static_cast<std::size_t>(target_depth));
    for (int i = 1; i <= target_depth; ++i) {
        const double s = profile.layer_speed(i);
        const double c = s * snell;
        if (c >= 1.0)
            throw TurningRayError("ray turns at layer " + std::to_string(i));
        const double sn = std::sqrt((1.0 - c) * (1.0 + c));
        const std::size_t k = static_cast<std::size_t>(i - 1);
        ray.grazing[k] = std::atan2(sn, c);
        ray.dh[k] = c / sn;       // 1 m layer / tan(theta)
        ray.dl[k] = 1.0 / sn;     // 1 m layer / sin(theta)
        ray.h += ray.dh[k];
        ray.length += ray.dl[k];
        ray.time += ray.dl[k] / s;
    }
    return ray;
}

/// Totals via the closed per-layer sums.  Numerically independent of the
/// angle recursion in trace_down; the two agree to ~1e-12 relative.
inline RayTotals ray_totals(const SoundSpeedProfile& profile, double theta0,
                            int target_depth) {
    detail::validate_target_depth(profile, target_depth, "ray_totals");
    detail::validate_theta0(theta0);
    const auto e =
        detail::eval_totals(profile.speeds, target_depth, std::cos(theta0));
    return {e.h, e.length, e.time};
}

/// Elevation angle of the straight target line: atan2(depth, h).
inline double elevation_angle(double depth, double h) {
    if (!(depth > 0.0)) throw ValidationError("depth must be positive");
    if (!(h >= 0.0)) throw ValidationError("horizontal range must be >= 0");
    return std::atan2(depth, h);
}

/// Launch angle whose ray reaches `target_depth` at horizontal distance
/// h_target.  h is strictly decreasing in theta0, so bracketed bisection
/// on (theta_min, pi/2) converges to the unique root.
inline double solve_theta0(const SoundSpeedProfile& profile, int target_depth,
                           double h_target) {
    detail::validate_target_depth(profile, target_depth, "solve_theta0");
    if (!(h_target >= 0.0) || !std::isfinite(h_target))
        throw ValidationError("horizontal target must be finite and >= 0");

    constexpr double kAngleTol = 1e-10;  // rad
    constexpr double kRangeTol = 1e-6;   // m
    constexpr int kMaxIter = 200;

    const double theta_min = min_grazing_angle(profile, target_depth);
    double lo = theta_min + 1e-9;
    double hi = kHalfPi - 1e-12;
    auto range_at = [&](double theta) {
        return ray_totals(profile, theta, target_depth).h;
    };
    // Nudge the lower bracket off the turning limit until it is traceable.
    double h_lo = 0.0;
    for (double delta = 1e-9;; delta *= 10.0) {
        try {
            h_lo = range_at(lo);
            break;
        } catch (const TurningRayError&) {
            lo = theta_min + delta * 10.0;
            if (lo >= hi) throw;
        }
    }
    if (h_lo < h_target)
        throw UnreachableError("horizontal target beyond the turning limit");
    if (range_at(hi) >= h_target) return hi;  // (near-)vertical target

    for (int iter = 0; iter < kMaxIter; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double residual = range_at(mid) - h_target;
        if (std::fabs(residual) < kRangeTol) return mid;
        if (residual > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < kAngleTol) return 0.5 * (lo + hi);
    }
    throw NonConvergenceError("launch-angle bisection exhausted iterations");
}

/// cos^2(theta0) / cos^2(alpha) for the traced ray; equals 1 exactly in a
/// homogeneous medium and stays near 1 for realistic profiles.
inline double grazing_elevation_ratio(const SoundSpeedProfile& profile,
                                      int target_depth, double theta0) {
    const RayTotals t = ray_totals(profile, theta0, target_depth);
    const double alpha =
        elevation_angle(static_cast<double>(target_depth), t.h);
    const double c0 = std::cos(theta0);
    const double ca = std::cos(alpha);
    return (c0 * c0) / (ca * ca);
}

namespace detail {

/// Safeguarded Newton iteration for the strictly increasing monotone
/// maps c -> h(c) and c -> length(c).  Used by the localizer, which
/// inverts thousands of measurements per fix.
template <typename Value, typename Slope>
inline double invert_monotone_cos(const std::vector<double>& speeds,
                                  int depth, double target, Value value,
                                  Slope slope, double tol) {
    const double c_hi = max_cos_launch(speeds, depth) * (1.0 - 1e-12);
    double lo = 0.0, hi = c_hi;
    double c = 0.5 * (lo + hi);
    for (int iter = 0; iter < 80; ++iter) {
        const TotalsEval e = eval_totals(speeds, depth, c);
        const double f = value(e) - target;
        if (std::fabs(f) < tol) return c;
        if (f > 0.0)
            hi = c;
        else
            lo = c;
        double next = c - f / slope(e);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - c) < 1e-15) return next;
        c = next;
    }
    throw NonConvergenceError("monotone ray inversion exhausted iterations");
}

/// cos(theta0) whose ray has total path length `length` at `depth`.
inline double invert_path_length(const std::vector<double>& speeds, int depth,
                                 double length) {
    // A vertical ray has the minimum possible path length: the depth itself.
    if (length < static_cast<double>(depth))
        throw UninvertibleMeasurementError(
            "measured path length shorter than the plumb line");
    const double c_hi = max_cos_launch(speeds, depth) * (1.0 - 1e-12);
    if (eval_totals(speeds, depth, c_hi).length < length)
        throw UninvertibleMeasurementError(
            "measured path length beyond the turning limit");
    return invert_monotone_cos(
        speeds, depth, length, [](const TotalsEval& e) { return e.length; },
        [](const TotalsEval& e) { return e.dlength_dc; }, 1e-9);
}

/// cos(theta0) whose ray reaches `depth` at horizontal distance `h`.
inline double invert_horizontal(const std::vector<double>& speeds, int depth,
                                double h) {
    if (h <= 0.0) return 0.0;
    const double c_hi = max_cos_launch(speeds, depth) * (1.0 - 1e-12);
    if (eval_totals(speeds, depth, c_hi).h < h)
        throw UnreachableError("horizontal range beyond the turning limit");
    return invert_monotone_cos(
        speeds, depth, h, [](const TotalsEval& e) { return e.h; },
        [](const TotalsEval& e) { return e.dh_dc; }, 1e-9);
}

}  // namespace detail

}  // namespace anchorplan
