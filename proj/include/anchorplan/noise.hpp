#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "anchorplan/errors.hpp"
#include "anchorplan/raytrace.hpp"
#include "anchorplan/ssp.hpp"

namespace anchorplan {

/// Proportional path-noise model: each 1 m slant segment dl_i carries an
/// independent Gaussian error with standard deviation gamma * dl_i.
struct NoiseSpec {
    double gamma = 0.0;

    explicit NoiseSpec(double g) : gamma(g) {
        if (!(g >= 0.0) || !std::isfinite(g))
            throw ValidationError("noise coefficient must be finite and >= 0");
    }
};

/// Diagonal covariance of the per-node equivalent line-of-sight ranges.
struct MeasurementCovariance {
    std::vector<double> variances;  // m^2, one per reference node

    std::size_t size() const { return variances.size(); }
};

inline MeasurementCovariance covariance(std::vector<double> variances) {
    if (variances.empty())
        throw ValidationError("covariance needs at least one variance");
    for (double v : variances)
        if (!(v > 0.0) || !std::isfinite(v))
            throw ValidationError("variances must be finite and positive");
    return MeasurementCovariance{std::move(variances)};
}

namespace detail {

/// Per-layer variance kernel s_{i-1}^2 / (s_0^2 - s_{i-1}^2 cos^2(angle)),
/// shared by the exact projection (angle = launch grazing angle) and the
/// approximate form (angle = elevation angle).
inline std::vector<double> variance_kernel(const SoundSpeedProfile& p,
                                           double cos_angle, int depth) {
    const double s0 = p.surface_speed();
    const double s0sq = s0 * s0;
    const double csq = cos_angle * cos_angle;
    std::vector<double> terms(static_cast<std::size_t>(depth));
    for (int i = 1; i <= depth; ++i) {
        const double s = p.layer_speed(i);
        const double den = s0sq - s * s * csq;
        terms[static_cast<std::size_t>(i - 1)] = s * s / den;
    }
    return terms;
}

inline bool cos_in_valid_cone(const SoundSpeedProfile& p, double cos_angle,
                              int depth) {
    return cos_angle < max_cos_launch(p.speeds, depth) &&
           cos_angle >= 0.0;
}

/// Allocation-free sum of the variance kernel; the optimizer evaluates
/// this inside root-finding loops.
inline double kernel_sum(const SoundSpeedProfile& p, double cos_angle,
                         int depth) {
    const double s0 = p.surface_speed();
    const double s0sq = s0 * s0;
    const double csq = cos_angle * cos_angle;
    double sum = 0.0;
    for (int i = 1; i <= depth; ++i) {
        const double s = p.layer_speed(i);
        sum += s * s / (s0sq - s * s * csq);
    }
    return sum;
}

}  // namespace detail

/// Per-layer terms whose gamma^2-weighted sum is the approximate LOS
/// variance.  Defined only inside the cone cos(alpha) < s_0/max speed,
/// where every denominator is positive.
inline std::vector<double> layer_variance_terms(
    const SoundSpeedProfile& profile, double alpha, int target_depth) {
    detail::validate_target_depth(profile, target_depth,
                                  "layer_variance_terms");
    const double ca = std::cos(alpha);
    if (!detail::cos_in_valid_cone(profile, ca, target_depth))
        throw DomainError(
            "elevation angle outside the valid cone of the variance terms");
    return detail::variance_kernel(profile, ca, target_depth);
}

/// Exact equivalent line-of-sight range variance of a traced ray: the
/// per-layer path noise projected to the horizontal and rescaled onto
/// the straight target line.
inline double los_variance(const SoundSpeedProfile& profile, double gamma,
                           double theta0, int target_depth) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw ValidationError("noise coefficient must be finite and >= 0");
    const RayTotals t = ray_totals(profile, theta0, target_depth);
    const double alpha =
        elevation_angle(static_cast<double>(target_depth), t.h);
    const double c0 = std::cos(theta0);
    const double ca = std::cos(alpha);
    const double sum = detail::kernel_sum(profile, c0, target_depth);
    return (c0 * c0) / (ca * ca) * gamma * gamma * sum;
}

/// Approximate LOS variance with the elevation angle substituted for the
/// launch grazing angle (their cosine ratio is ~1).  This is the form
/// the deployment optimizer differentiates.
inline double los_variance_approx(const SoundSpeedProfile& profile,
                                  double gamma, double alpha,
                                  int target_depth) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw ValidationError("noise coefficient must be finite and >= 0");
    if (!(alpha > 0.0) || !(alpha < kHalfPi))
        throw ValidationError("elevation angle must lie in (0, pi/2)");
    detail::validate_target_depth(profile, target_depth,
                                  "los_variance_approx");
    const double ca = std::cos(alpha);
    if (!detail::cos_in_valid_cone(profile, ca, target_depth))
        throw ApproximationInvalidError(
            "elevation angle outside the cone where the approximation holds");
    return gamma * gamma * detail::kernel_sum(profile, ca, target_depth);
}

}  // namespace anchorplan
