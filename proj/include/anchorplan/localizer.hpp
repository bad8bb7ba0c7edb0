#pragma once

#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "anchorplan/errors.hpp"
#include "anchorplan/geometry.hpp"
#include "anchorplan/linalg.hpp"
#include "anchorplan/raytrace.hpp"
#include "anchorplan/ssp.hpp"

namespace anchorplan {

/// Depth fine-tuning search parameters.  The depth axis points down, so
/// the default initial direction -1 moves toward decreasing depth.
struct LocalizerConfig {
    double start_depth = 0.0;            // m, required
    double initial_step = 2.0;           // m
    double step_threshold = 0.2;         // m, search stops below this
    int initial_direction = -1;          // -1 shallower, +1 deeper
    int max_outer_iterations = 200;
    double horizontal_tolerance = 1e-4;  // m, multilateration step size
    int horizontal_max_iterations = 100;
};

struct Fix {
    Vec3 position;       // m; depth is the traced 1 m grid value
    double cost = std::numeric_limits<double>::infinity();  // s^2
    int iterations = 0;  // outer depth evaluations
    bool converged = false;
};

/// Sum of squared differences between simulated and measured travel
/// times, paired by index.
inline double time_cost(std::span<const double> simulated,
                        std::span<const double> measured) {
    if (simulated.size() != measured.size())
        throw ValidationError("time lists must match in length");
    double cost = 0.0;
    for (std::size_t j = 0; j < simulated.size(); ++j) {
        const double d = simulated[j] - measured[j];
        cost += d * d;
    }
    return cost;
}

struct HorizontalFix {
    double x = 0.0;
    double y = 0.0;
    double cost = 0.0;      // s^2, travel-time match at this depth
    int usable_nodes = 0;
};

namespace detail {

inline void validate_localizer_config(const LocalizerConfig& c) {
    if (!(c.start_depth > 0.0))
        throw ValidationError("start depth must be positive");
    if (!(c.initial_step > 0.0) || !(c.step_threshold > 0.0))
        throw ValidationError("depth steps must be positive");
    if (!(c.step_threshold < c.initial_step))
        throw ValidationError("step threshold must be below the initial step");
    if (c.initial_direction != 1 && c.initial_direction != -1)
        throw ValidationError("initial direction must be +1 or -1");
    if (c.max_outer_iterations < 1 || c.horizontal_max_iterations < 1)
        throw ValidationError("iteration limits must be positive");
    if (!(c.horizontal_tolerance > 0.0))
        throw ValidationError("horizontal tolerance must be positive");
}

}  // namespace detail

/// Fixes the horizontal position at one candidate depth.  Each measured
/// path length is inverted through the ray model into an equivalent
/// horizontal range (dropping nodes whose measurement no launch angle
/// can produce at this depth), the ranges are intersected by iterative
/// linearized least squares from the centroid of the usable nodes, and
/// the fix is scored by how well ray travel times simulated at it match
/// the travel times of the measured-length rays.
inline HorizontalFix horizontal_fix(const SoundSpeedProfile& profile,
                                    std::span<const Vec3> refs,
                                    std::span<const double> measured_lengths,
                                    int depth, double tolerance = 1e-4,
                                    int max_iterations = 100) {
    detail::validate_target_depth(profile, depth, "horizontal_fix");
    if (refs.size() != measured_lengths.size())
        throw ValidationError("nodes and measurements must match in length");
    if (refs.size() < 3)
        throw InsufficientNodesError("need at least 3 reference nodes");

    struct Usable {
        double qx, qy;        // node surface position
        double range;         // equivalent horizontal range at this depth
        double measured_time; // travel time of the measured-length ray
    };
    std::vector<Usable> usable;
    usable.reserve(refs.size());
    for (std::size_t j = 0; j < refs.size(); ++j) {
        try {
            const double c = detail::invert_path_length(
                profile.speeds, depth, measured_lengths[j]);
            const auto e = detail::eval_totals(profile.speeds, depth, c);
            usable.push_back(
                Usable{refs[j].x, refs[j].y, e.h, e.time});
        } catch (const UninvertibleMeasurementError&) {
            // Node dropped; depth may still be fixable from the rest.
        }
    }
    if (usable.size() < 3)
        throw InsufficientNodesError(
            "fewer than 3 usable measurements at this depth");

    double px = 0.0, py = 0.0;
    for (const Usable& u : usable) {
        px += u.qx;
        py += u.qy;
    }
    px /= static_cast<double>(usable.size());
    py /= static_cast<double>(usable.size());

    bool converged = false;
    for (int iter = 0; iter < max_iterations; ++iter) {
        double hxx = 0.0, hxy = 0.0, hyy = 0.0, bx = 0.0, by = 0.0;
        for (const Usable& u : usable) {
            const double dx = px - u.qx;
            const double dy = py - u.qy;
            const double dist = std::max(std::hypot(dx, dy), 1e-9);
            const double gx = dx / dist;
            const double gy = dy / dist;
            const double r = dist - u.range;
            hxx += gx * gx;
            hxy += gx * gy;
            hyy += gy * gy;
            bx -= gx * r;
            by -= gy * r;
        }
        const double det = hxx * hyy - hxy * hxy;
        if (std::fabs(det) < 1e-12 * std::max(hxx * hyy, 1.0))
            throw SingularGeometryError(
                "range circles do not determine a horizontal fix");
        const double sx = (hyy * bx - hxy * by) / det;
        const double sy = (hxx * by - hxy * bx) / det;
        px += sx;
        py += sy;
        if (std::hypot(sx, sy) < tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NonConvergenceError("horizontal solver exhausted iterations");

    std::vector<double> simulated, measured;
    simulated.reserve(usable.size());
    measured.reserve(usable.size());
    for (const Usable& u : usable) {
        const double range_at_fix = std::hypot(px - u.qx, py - u.qy);
        const double c =
            detail::invert_horizontal(profile.speeds, depth, range_at_fix);
        simulated.push_back(
            detail::eval_totals(profile.speeds, depth, c).time);
        measured.push_back(u.measured_time);
    }

    HorizontalFix fix;
    fix.x = px;
    fix.y = py;
    fix.cost = time_cost(simulated, measured);
    fix.usable_nodes = static_cast<int>(usable.size());
    return fix;
}

/// Full position fix: a depth line search wrapped around horizontal_fix.
/// The depth moves by the current step in the current direction; a move
/// that does not beat the incumbent best cost flips the direction and
/// halves the step, and the search stops once the step falls below the
/// threshold.  Candidate depths are traced on the 1 m profile grid.
inline Fix locate(const SoundSpeedProfile& profile, std::span<const Vec3> refs,
                  std::span<const double> measured_lengths,
                  const LocalizerConfig& config) {
    detail::validate_localizer_config(config);
    detail::require_standardized(profile, "locate");

    struct DepthResult {
        HorizontalFix fix;
    };
    // Continuous candidates that round to the same grid depth share one
    // evaluation.
    std::map<int, std::optional<DepthResult>> cache;
    std::exception_ptr last_error;
    int evaluations = 0;

    auto eval = [&](double depth) -> const std::optional<DepthResult>& {
        const int grid = static_cast<int>(std::lround(depth));
        auto it = cache.find(grid);
        if (it != cache.end()) return it->second;
        ++evaluations;
        std::optional<DepthResult> result;
        if (grid >= 1 && grid <= profile.layer_count()) {
            try {
                result = DepthResult{horizontal_fix(
                    profile, refs, measured_lengths, grid,
                    config.horizontal_tolerance,
                    config.horizontal_max_iterations)};
            } catch (const Error&) {
                last_error = std::current_exception();
            }
        }
        return cache.emplace(grid, std::move(result)).first->second;
    };

    // Find a usable starting depth, walking in the initial direction.
    double current = config.start_depth;
    int probes = 0;
    while (!eval(current)) {
        current += config.initial_direction * config.initial_step;
        if (++probes >= config.max_outer_iterations || current < 1.0 ||
            current > profile.max_depth()) {
            if (last_error) std::rethrow_exception(last_error);
            throw InsufficientNodesError("no usable depth found");
        }
    }

    double best_cost = eval(current)->fix.cost;
    int best_depth = static_cast<int>(std::lround(current));
    HorizontalFix best_fix = eval(current)->fix;

    double step = config.initial_step;
    double direction = config.initial_direction;
    int outer = 0;
    while (step >= config.step_threshold &&
           outer < config.max_outer_iterations) {
        ++outer;
        const double candidate = current + direction * step;
        const auto& result = eval(candidate);
        const double cost = result ? result->fix.cost
                                   : std::numeric_limits<double>::infinity();
        if (cost < best_cost) {
            current = candidate;
            best_cost = cost;
            best_depth = static_cast<int>(std::lround(candidate));
            best_fix = result->fix;
        } else {
            direction = -direction;
            step *= 0.5;
        }
    }

    Fix fix;
    fix.position = Vec3{best_fix.x, best_fix.y,
                        static_cast<double>(best_depth)};
    fix.cost = best_cost;
    fix.iterations = evaluations;
    fix.converged = step < config.step_threshold;
    return fix;
}

}  // namespace anchorplan
