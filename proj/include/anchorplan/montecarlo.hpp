#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "anchorplan/errors.hpp"
#include "anchorplan/geometry.hpp"
#include "anchorplan/localizer.hpp"
#include "anchorplan/optimize.hpp"
#include "anchorplan/raytrace.hpp"
#include "anchorplan/rng.hpp"
#include "anchorplan/ssp.hpp"

namespace anchorplan {

struct TrialConfig {
    DeploymentGeometry geometry;
    double gamma = 0.01;
    int trials = 50;
    std::uint64_t seed = 0;
    LocalizerConfig localizer;
};

struct TrialStats {
    std::vector<double> errors;  // 3D error of each successful trial, m
    double mean = std::numeric_limits<double>::quiet_NaN();
    double stddev = std::numeric_limits<double>::quiet_NaN();
    double min = std::numeric_limits<double>::quiet_NaN();
    double max = std::numeric_limits<double>::quiet_NaN();
    int failures = 0;
};

struct SweepRow {
    double value = 0.0;  // swept quantity: elevation angle or node count
    TrialStats stats;
};

/// Noisy path-length measurements: the true ray to each node is traced
/// layer by layer and every slant segment picks up an independent
/// Gaussian error proportional to its length.
inline std::vector<double> synthesize_measurements(
    const SoundSpeedProfile& profile, const DeploymentGeometry& geometry,
    double gamma, std::mt19937_64& rng) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw ValidationError("noise coefficient must be finite and >= 0");
    const int depth = static_cast<int>(std::lround(geometry.anchor.z));
    detail::validate_target_depth(profile, depth, "synthesize_measurements");

    GaussianSampler gauss;
    std::vector<double> measured;
    measured.reserve(geometry.node_count());
    for (std::size_t j = 0; j < geometry.node_count(); ++j) {
        const double dx = geometry.refs[j].x - geometry.anchor.x;
        const double dy = geometry.refs[j].y - geometry.anchor.y;
        const double c =
            detail::invert_horizontal(profile.speeds, depth,
                                      std::hypot(dx, dy));
        const RayPath ray = trace_down(profile, std::acos(c), depth);
        double total = 0.0;
        for (double dl : ray.dl) total += dl + gamma * dl * gauss(rng);
        measured.push_back(total);
    }
    return measured;
}

namespace detail {

inline TrialStats finalize_stats(std::vector<std::optional<double>> results) {
    TrialStats stats;
    for (const auto& r : results) {
        if (r)
            stats.errors.push_back(*r);
        else
            ++stats.failures;
    }
    if (stats.errors.empty()) return stats;
    double sum = 0.0;
    stats.min = stats.errors.front();
    stats.max = stats.errors.front();
    for (double e : stats.errors) {
        sum += e;
        stats.min = std::min(stats.min, e);
        stats.max = std::max(stats.max, e);
    }
    stats.mean = sum / static_cast<double>(stats.errors.size());
    double ss = 0.0;
    for (double e : stats.errors) ss += (e - stats.mean) * (e - stats.mean);
    stats.stddev = stats.errors.size() > 1
                       ? std::sqrt(ss / static_cast<double>(
                                            stats.errors.size() - 1))
                       : 0.0;
    return stats;
}

/// Runs trials in parallel.  Trial k derives all of its randomness from
/// (seed, k), and results land in per-trial slots, so the outcome does
/// not depend on the thread count or scheduling.
template <typename GeometryFn>
inline TrialStats run_trials_generic(const SoundSpeedProfile& profile,
                                     int trials, std::uint64_t seed,
                                     double gamma,
                                     const LocalizerConfig& localizer,
                                     GeometryFn&& geometry_for_trial) {
    if (trials < 1) throw ValidationError("need at least one trial");
    std::vector<std::optional<double>> results(
        static_cast<std::size_t>(trials));

    auto run_range = [&](int begin, int stride) {
        for (int k = begin; k < trials; k += stride) {
            const std::uint64_t trial_seed =
                derive_seed(seed, static_cast<std::uint64_t>(k));
            try {
                std::mt19937_64 layout_rng(derive_seed(trial_seed, 1));
                const DeploymentGeometry geometry =
                    geometry_for_trial(k, layout_rng);
                std::mt19937_64 noise_rng(derive_seed(trial_seed, 0));
                const std::vector<double> measured = synthesize_measurements(
                    profile, geometry, gamma, noise_rng);
                const Fix fix =
                    locate(profile, geometry.refs, measured, localizer);
                results[static_cast<std::size_t>(k)] =
                    distance(fix.position, geometry.anchor);
            } catch (const Error&) {
                // Trial failed (degenerate draw, solver breakdown, ...).
            }
        }
    };

    const int workers = std::max(
        1, std::min({static_cast<int>(std::thread::hardware_concurrency()),
                     8, trials}));
    if (workers == 1) {
        run_range(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(run_range, w, workers);
        for (auto& t : pool) t.join();
    }
    return finalize_stats(std::move(results));
}

}  // namespace detail

/// Repeated localization of the configured geometry under fresh noise.
inline TrialStats run_trials(const SoundSpeedProfile& profile,
                             const TrialConfig& config) {
    return detail::run_trials_generic(
        profile, config.trials, config.seed, config.gamma, config.localizer,
        [&](int, std::mt19937_64&) -> const DeploymentGeometry& {
            return config.geometry;
        });
}

/// Localization error versus common elevation angle.  Each angle gets a
/// fresh ring built on the configured anchor with the configured node
/// count, and its own deterministic sub-seed.
inline std::vector<SweepRow> sweep_alpha(const SoundSpeedProfile& profile,
                                         const TrialConfig& config,
                                         std::span<const double> alphas) {
    std::vector<SweepRow> rows;
    rows.reserve(alphas.size());
    const int j_count = static_cast<int>(config.geometry.node_count());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const DeploymentGeometry geometry = geometry_from_alpha(
            config.geometry.anchor, alphas[i], azimuth_layout(j_count, 0.0));
        TrialStats stats = detail::run_trials_generic(
            profile, config.trials, derive_seed(config.seed, i),
            config.gamma, config.localizer,
            [&](int, std::mt19937_64&) -> const DeploymentGeometry& {
                return geometry;
            });
        rows.push_back(SweepRow{alphas[i], std::move(stats)});
    }
    return rows;
}

/// Localization error versus node count, on uniform rings at the
/// elevation angle of the configured geometry.
inline std::vector<SweepRow> sweep_node_count(const SoundSpeedProfile& profile,
                                              const TrialConfig& config,
                                              std::span<const int> j_counts) {
    const double alpha = config.geometry.alphas.front();
    std::vector<SweepRow> rows;
    rows.reserve(j_counts.size());
    for (std::size_t i = 0; i < j_counts.size(); ++i) {
        const DeploymentGeometry geometry = geometry_from_alpha(
            config.geometry.anchor, alpha,
            azimuth_layout(j_counts[i], 0.0));
        TrialStats stats = detail::run_trials_generic(
            profile, config.trials, derive_seed(config.seed, i),
            config.gamma, config.localizer,
            [&](int, std::mt19937_64&) -> const DeploymentGeometry& {
                return geometry;
            });
        rows.push_back(
            SweepRow{static_cast<double>(j_counts[i]), std::move(stats)});
    }
    return rows;
}

/// Localization error versus node count with azimuths redrawn uniformly
/// at random for every trial; elevation stays fixed.  Degenerate draws
/// count as failures.  The noise stream of trial k matches the one
/// run_trials would use, so comparisons against a uniform ring at the
/// same seed are paired.
inline std::vector<SweepRow> random_azimuth_trials(
    const SoundSpeedProfile& profile, const TrialConfig& config,
    std::span<const int> j_counts) {
    const double alpha = config.geometry.alphas.front();
    std::vector<SweepRow> rows;
    rows.reserve(j_counts.size());
    for (std::size_t i = 0; i < j_counts.size(); ++i) {
        const int j_count = j_counts[i];
        TrialStats stats = detail::run_trials_generic(
            profile, config.trials, derive_seed(config.seed, i),
            config.gamma, config.localizer,
            [&](int, std::mt19937_64& layout_rng) {
                std::vector<double> betas(static_cast<std::size_t>(j_count));
                for (double& b : betas)
                    b = uniform_double(layout_rng, 0.0, 2.0 * kPi);
                return geometry_from_alpha(config.geometry.anchor, alpha,
                                           betas);
            });
        rows.push_back(
            SweepRow{static_cast<double>(j_count), std::move(stats)});
    }
    return rows;
}

}  // namespace anchorplan
