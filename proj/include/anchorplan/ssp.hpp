#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "anchorplan/errors.hpp"

namespace anchorplan {

/// Sound speed versus depth.  Depth is measured in meters from the sea
/// surface, positive downward.  A standardized profile is resampled to
/// an exact 1 m grid starting at depth 0; the ray-tracing layer i spans
/// depths [i-1, i] and uses the speed at its top, speeds[i-1].
struct SoundSpeedProfile {
    std::vector<double> depths;  // m, strictly increasing
    std::vector<double> speeds;  // m/s, strictly positive
    bool standardized = false;

    /// Number of 1 m layers available below the surface (standardized).
    int layer_count() const { return static_cast<int>(speeds.size()) - 1; }

    double max_depth() const { return depths.back(); }

    double surface_speed() const { return speeds.front(); }

    /// Speed at the top of layer i (1-based), i.e. at depth i-1.
    double layer_speed(int layer) const {
        return speeds[static_cast<std::size_t>(layer - 1)];
    }

    /// Constant-speed profile on a 1 m grid down to `depth` meters.
    static SoundSpeedProfile uniform(double speed, int depth) {
        SoundSpeedProfile p;
        p.depths.resize(static_cast<std::size_t>(depth) + 1);
        p.speeds.assign(static_cast<std::size_t>(depth) + 1, speed);
        for (std::size_t i = 0; i < p.depths.size(); ++i)
            p.depths[i] = static_cast<double>(i);
        p.standardized = true;
        return p;
    }

    friend bool operator==(const SoundSpeedProfile& a,
                           const SoundSpeedProfile& b) {
        return a.depths == b.depths && a.speeds == b.speeds &&
               a.standardized == b.standardized;
    }
};

namespace detail {

inline void validate_profile(const SoundSpeedProfile& p) {
    if (p.depths.size() != p.speeds.size())
        throw ValidationError("profile depth/speed lists differ in length");
    if (p.depths.size() < 2)
        throw ValidationError("profile needs at least 2 samples");
    for (std::size_t i = 0; i < p.depths.size(); ++i) {
        if (!std::isfinite(p.depths[i]) || !std::isfinite(p.speeds[i]))
            throw ValidationError("non-finite profile sample");
        if (p.speeds[i] <= 0.0)
            throw ValidationError("non-positive sound speed");
        if (i > 0 && p.depths[i] <= p.depths[i - 1])
            throw ValidationError("profile depths not strictly increasing");
    }
    if (p.depths.front() < 0.0)
        throw ValidationError("negative depth in profile");
}

inline void require_standardized(const SoundSpeedProfile& p,
                                 const char* where) {
    if (!p.standardized)
        throw ValidationError(std::string(where) +
                              " requires a standardized profile");
}

}  // namespace detail

/// Parses a two-column "depth_m speed_mps" text stream.  '#' starts a
/// comment, blank lines are skipped, rows may come in any order.
inline SoundSpeedProfile load_profile(std::istream& in) {
    SoundSpeedProfile p;
    std::vector<std::pair<double, double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        double depth = 0.0, speed = 0.0;
        if (!(ls >> depth)) continue;  // blank or comment-only line
        std::string trailing;
        if (!(ls >> speed) || (ls >> trailing))
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected exactly two columns");
        if (!std::isfinite(depth) || !std::isfinite(speed))
            throw ParseError("line " + std::to_string(lineno) +
                             ": non-finite value");
        if (depth < 0.0)
            throw ParseError("line " + std::to_string(lineno) +
                             ": negative depth");
        if (speed <= 0.0)
            throw ParseError("line " + std::to_string(lineno) +
                             ": non-positive sound speed");
        rows.emplace_back(depth, speed);
    }
    if (rows.size() < 2) throw ParseError("profile needs at least 2 rows");
    std::sort(rows.begin(), rows.end());
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].first == rows[i - 1].first)
            throw ParseError("duplicate depth " +
                             std::to_string(rows[i].first));
    for (const auto& [d, s] : rows) {
        p.depths.push_back(d);
        p.speeds.push_back(s);
    }
    p.standardized = false;
    return p;
}

inline SoundSpeedProfile load_profile_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open profile file: " + path);
    return load_profile(in);
}

/// Resamples a raw profile onto the uniform grid {0, 1, ..., floor(max
/// depth)} by linear interpolation.  Raw samples on grid points are
/// preserved bit-for-bit, which also makes the operation idempotent.
/// A profile starting below the surface is extended flat to depth 0;
/// `extended_to_surface`, when given, reports that this happened.
inline SoundSpeedProfile standardize(const SoundSpeedProfile& raw,
                                     bool* extended_to_surface = nullptr) {
    detail::validate_profile(raw);
    if (raw.max_depth() < 1.0)
        throw ValidationError("profile must reach at least 1 m depth");
    if (extended_to_surface) *extended_to_surface = raw.depths.front() > 0.0;

    const int last = static_cast<int>(std::floor(raw.max_depth()));
    SoundSpeedProfile out;
    out.depths.resize(static_cast<std::size_t>(last) + 1);
    out.speeds.resize(static_cast<std::size_t>(last) + 1);
    std::size_t seg = 0;  // raw segment [seg, seg+1] under the cursor
    for (int z = 0; z <= last; ++z) {
        const double depth = static_cast<double>(z);
        out.depths[static_cast<std::size_t>(z)] = depth;
        double speed;
        if (depth <= raw.depths.front()) {
            speed = raw.speeds.front();
        } else {
            while (seg + 2 < raw.depths.size() && raw.depths[seg + 1] < depth)
                ++seg;
            if (depth == raw.depths[seg + 1]) {
                speed = raw.speeds[seg + 1];
            } else {
                const double d0 = raw.depths[seg], d1 = raw.depths[seg + 1];
                const double s0 = raw.speeds[seg], s1 = raw.speeds[seg + 1];
                speed = s0 + (depth - d0) * (s1 - s0) / (d1 - d0);
            }
        }
        out.speeds[static_cast<std::size_t>(z)] = speed;
    }
    out.standardized = true;
    return out;
}

/// Per-layer relative speed change g_i = s_i / s_{i-1} - 1 for the
/// standardized layers i = 1..I.
inline std::vector<double> gradients(const SoundSpeedProfile& p) {
    detail::require_standardized(p, "gradients");
    std::vector<double> g(p.speeds.size() - 1);
    for (std::size_t i = 1; i < p.speeds.size(); ++i)
        g[i - 1] = p.speeds[i] / p.speeds[i - 1] - 1.0;
    return g;
}

}  // namespace anchorplan
