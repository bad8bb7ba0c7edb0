#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "anchorplan/crlb.hpp"
#include "anchorplan/errors.hpp"
#include "anchorplan/geometry.hpp"
#include "anchorplan/noise.hpp"
#include "anchorplan/raytrace.hpp"
#include "anchorplan/rng.hpp"
#include "anchorplan/ssp.hpp"

namespace anchorplan {

/// The derivative of the common-elevation trace bound with respect to
/// the elevation angle factors as k * sin(2a) * F(a), with k > 0
/// collecting the node count and the squared noise coefficient.  This
/// returns F: strictly increasing on the valid cone, negative near its
/// low edge, positive near vertical, so its unique root is the optimal
/// elevation angle.  sin(2a) = 0 would require a vertical ring, which
/// collapses every node onto one point and is rejected by the geometry
/// layer; only the root of F matters.
inline double trace_gradient_factor(const SoundSpeedProfile& profile,
                                    double alpha, int target_depth) {
    detail::validate_target_depth(profile, target_depth,
                                  "trace_gradient_factor");
    if (!(alpha > 0.0) || !(alpha < kHalfPi))
        throw DomainError("elevation angle must lie in (0, pi/2)");
    const double ca = std::cos(alpha);
    if (!detail::cos_in_valid_cone(profile, ca, target_depth))
        throw DomainError(
            "elevation angle outside the valid cone of the variance terms");

    const double s0 = profile.surface_speed();
    const double s0sq = s0 * s0;
    const double csq = ca * ca;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 1; i <= target_depth; ++i) {
        const double s = profile.layer_speed(i);
        const double m = s * s / (s0sq - s * s * csq);
        sum += m;
        sum_sq += m * m;
    }
    const double sa = std::sin(alpha);
    const double ssq = sa * sa;
    return (4.0 * sum - 4.0 * csq * sum_sq) / (csq * csq) -
           (sum + ssq * sum_sq) / (ssq * ssq);
}

/// Unique optimal common elevation angle: the root of
/// trace_gradient_factor, found by bracketed bisection to 1e-8 rad.
inline double solve_optimal_alpha(const SoundSpeedProfile& profile,
                                  int target_depth) {
    detail::validate_target_depth(profile, target_depth,
                                  "solve_optimal_alpha");
    const double theta_min = min_grazing_angle(profile, target_depth);
    double lo = theta_min + 1e-7;
    double hi = kHalfPi - 1e-9;
    if (!(trace_gradient_factor(profile, lo, target_depth) < 0.0) ||
        !(trace_gradient_factor(profile, hi, target_depth) > 0.0))
        throw InvariantViolationError(
            "elevation-gradient bracket has no sign change");
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        if (trace_gradient_factor(profile, mid, target_depth) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Uniform ring of azimuths, 2*pi*(j-1)/J plus an arbitrary offset.
inline std::vector<double> azimuth_layout(int j_count, double beta0) {
    if (j_count < 3)
        throw ValidationError("a uniform ring needs at least 3 nodes");
    std::vector<double> betas(static_cast<std::size_t>(j_count));
    for (int j = 0; j < j_count; ++j) {
        double beta = 2.0 * kPi * j / j_count + beta0;
        beta = std::fmod(beta, 2.0 * kPi);
        if (beta < 0.0) beta += 2.0 * kPi;
        betas[static_cast<std::size_t>(j)] = beta;
    }
    return betas;
}

/// Concatenation of independent uniform fans; each subset needs at
/// least 3 nodes, and no mutual alignment between subsets is required.
inline std::vector<double> subset_layout(std::span<const int> subset_sizes,
                                         std::span<const double> beta0s) {
    if (subset_sizes.empty() || subset_sizes.size() != beta0s.size())
        throw ValidationError("subset sizes and offsets must match in length");
    std::vector<double> betas;
    for (std::size_t q = 0; q < subset_sizes.size(); ++q) {
        const auto fan = azimuth_layout(subset_sizes[q], beta0s[q]);
        betas.insert(betas.end(), fan.begin(), fan.end());
    }
    return betas;
}

/// Surface coordinates realizing a common elevation angle: every node
/// sits on the ring of radius depth/tan(alpha) around the anchor.
inline DeploymentGeometry geometry_from_alpha(const Vec3& anchor, double alpha,
                                              std::span<const double> betas) {
    if (!(anchor.z > 0.0))
        throw ValidationError("anchor depth must be positive");
    if (!(alpha > 0.0) || !(alpha < kHalfPi))
        throw ValidationError("elevation angle must lie in (0, pi/2)");
    const double radius = anchor.z / std::tan(alpha);
    std::vector<Vec3> refs;
    refs.reserve(betas.size());
    for (double beta : betas)
        refs.push_back(Vec3{anchor.x + radius * std::cos(beta),
                            anchor.y + radius * std::sin(beta), 0.0});
    return make_geometry(anchor, std::move(refs));
}

struct OptimalDeployment {
    double alpha_star = 0.0;        // rad
    double radius = 0.0;            // m
    std::vector<double> betas;      // rad
    double trace_at_optimum = 0.0;  // m^2, for the queried (J, gamma)
    double gradient_residual = 0.0; // trace_gradient_factor at alpha_star
};

inline OptimalDeployment optimal_deployment(const SoundSpeedProfile& profile,
                                            int target_depth, int j_count,
                                            double gamma, double beta0 = 0.0) {
    OptimalDeployment d;
    d.alpha_star = solve_optimal_alpha(profile, target_depth);
    d.radius = static_cast<double>(target_depth) / std::tan(d.alpha_star);
    d.betas = azimuth_layout(j_count, beta0);
    const double sigma2 =
        los_variance_approx(profile, gamma, d.alpha_star, target_depth);
    d.trace_at_optimum =
        sigma2 > 0.0 ? crlb_bound_same_noise(j_count, d.alpha_star, sigma2)
                     : 0.0;
    d.gradient_residual =
        trace_gradient_factor(profile, d.alpha_star, target_depth);
    return d;
}

/// Result of the heterogeneous-noise cross-check: minimizing the
/// per-node bound sum over independent elevation angles must drive all
/// of them to the common-noise optimum.
struct HeteroNoiseCheck {
    double alpha_star = 0.0;       // common-noise optimum, rad
    double max_spread = 0.0;       // worst max-min gap within one start, rad
    double max_deviation = 0.0;    // worst |alpha_j - alpha_star|, rad
    bool gradient_single_sign_change = false;
    int starts = 0;
    std::vector<double> final_alphas;  // converged angles of the last start
};

namespace detail {

/// One-node share of the heterogeneous bound with the approximate
/// variance substituted; strictly unimodal on the valid cone.
inline double single_node_bound(const SoundSpeedProfile& profile, double alpha,
                                int depth, double gamma) {
    const double sigma2 = gamma * gamma *
                          kernel_sum(profile, std::cos(alpha), depth);
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    return 4.0 * sigma2 / (c * c) + sigma2 / (s * s);
}

inline double golden_section_min(const SoundSpeedProfile& profile, int depth,
                                 double gamma, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = single_node_bound(profile, x1, depth, gamma);
    double f2 = single_node_bound(profile, x2, depth, gamma);
    while (b - a > 1e-10) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = single_node_bound(profile, x1, depth, gamma);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = single_node_bound(profile, x2, depth, gamma);
        }
    }
    return 0.5 * (a + b);
}

/// Descends from x0: expands a downhill bracket around the current
/// value, then golden-sections inside it.  Keeps the multi-start
/// verification honest by letting every start trace its own path to
/// the minimum instead of jumping straight to it.
inline double local_min_from(const SoundSpeedProfile& profile, int depth,
                             double gamma, double x0, double lo, double hi) {
    auto f = [&](double x) {
        return single_node_bound(profile, x, depth, gamma);
    };
    double step = 0.005;
    double fx = f(x0);
    double dir;
    if (x0 - step > lo && f(x0 - step) < fx)
        dir = -1.0;
    else if (x0 + step < hi && f(x0 + step) < fx)
        dir = 1.0;
    else {
        // Neither neighbor improves: the minimum is within one step.
        return golden_section_min(profile, depth, gamma,
                                  std::max(lo, x0 - step),
                                  std::min(hi, x0 + step));
    }
    double prev = x0;
    double curr = x0 + dir * step;
    double fcurr = f(curr);
    while (true) {
        step *= 2.0;
        double next = curr + dir * step;
        if (next <= lo) next = lo;
        if (next >= hi) next = hi;
        const double fnext = f(next);
        if (fnext >= fcurr || next == lo || next == hi) {
            const double a = std::min(prev, next);
            const double b = std::max(prev, next);
            return golden_section_min(profile, depth, gamma, a, b);
        }
        prev = curr;
        curr = next;
        fcurr = fnext;
    }
}

}  // namespace detail

/// Multi-start coordinate descent on the heterogeneous bound over
/// independent per-node elevation angles.  Also checks on a 0.1 degree
/// grid that the per-node gradient factor changes sign exactly once.
inline HeteroNoiseCheck verify_hetero_noise_optimum(
    const SoundSpeedProfile& profile, int target_depth, int j_count,
    double gamma, int starts = 20, std::uint64_t seed = 1) {
    if (j_count < 1) throw ValidationError("need at least one node");
    if (starts < 1) throw ValidationError("need at least one start");
    if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");

    HeteroNoiseCheck check;
    check.alpha_star = solve_optimal_alpha(profile, target_depth);
    check.starts = starts;

    const double theta_min = min_grazing_angle(profile, target_depth);
    const double lo = theta_min + 1e-6;
    const double hi = kHalfPi - 1e-6;

    for (int start = 0; start < starts; ++start) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(start)));
        std::vector<double> alphas(static_cast<std::size_t>(j_count));
        for (double& a : alphas)
            a = uniform_double(rng, lo + 0.05, hi - 0.05);
        // The objective is a sum of per-node terms, so one sweep of
        // exact 1-D minimizations already converges; the outer loop
        // guards against that assumption breaking.
        for (int sweep = 0; sweep < 50; ++sweep) {
            double moved = 0.0;
            for (double& a : alphas) {
                const double next = detail::local_min_from(
                    profile, target_depth, gamma, a, lo, hi);
                moved = std::max(moved, std::fabs(next - a));
                a = next;
            }
            if (moved < 1e-9) break;
        }
        double amin = alphas.front(), amax = alphas.front();
        for (double a : alphas) {
            amin = std::min(amin, a);
            amax = std::max(amax, a);
            check.max_deviation = std::max(check.max_deviation,
                                           std::fabs(a - check.alpha_star));
        }
        check.max_spread = std::max(check.max_spread, amax - amin);
        if (start == starts - 1) check.final_alphas = alphas;
    }

    int sign_changes = 0;
    double prev = trace_gradient_factor(profile, lo, target_depth);
    const double step = kPi / 1800.0;  // 0.1 degree
    for (double a = lo + step; a < hi; a += step) {
        const double value = trace_gradient_factor(profile, a, target_depth);
        if ((prev < 0.0) != (value < 0.0)) ++sign_changes;
        prev = value;
    }
    check.gradient_single_sign_change = (sign_changes == 1);
    return check;
}

}  // namespace anchorplan
