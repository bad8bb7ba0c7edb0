#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "anchorplan/rng.hpp"
#include "anchorplan/ssp.hpp"

namespace support {

inline std::string data_path(const std::string& name) {
    return std::string(ANCHORPLAN_DATA_DIR) + "/" + name;
}

inline const anchorplan::SoundSpeedProfile& south_pacific() {
    static const anchorplan::SoundSpeedProfile profile = anchorplan::standardize(
        anchorplan::load_profile_file(data_path("ssp_south_pacific.txt")));
    return profile;
}

inline const anchorplan::SoundSpeedProfile& north_pacific() {
    static const anchorplan::SoundSpeedProfile profile = anchorplan::standardize(
        anchorplan::load_profile_file(data_path("ssp_north_pacific.txt")));
    return profile;
}

inline const anchorplan::SoundSpeedProfile& deep_trial() {
    static const anchorplan::SoundSpeedProfile profile = anchorplan::standardize(
        anchorplan::load_profile_file(data_path("ssp_deep_trial.txt")));
    return profile;
}

constexpr double kDegree = 3.14159265358979323846 / 180.0;

inline double deg(double radians) { return radians / kDegree; }
inline double rad(double degrees) { return degrees * kDegree; }

/// Independent closed-sum totals (the per-layer denominators written
/// out longhand), used as an oracle against both library routes.
struct ClosedSums {
    double h = 0.0;
    double length = 0.0;
};

inline ClosedSums closed_sums(const anchorplan::SoundSpeedProfile& p,
                              double theta0, int depth) {
    ClosedSums sums;
    const double s0 = p.speeds.front();
    const double c0 = std::cos(theta0);
    for (int i = 1; i <= depth; ++i) {
        const double s = p.speeds[static_cast<std::size_t>(i - 1)];
        const double root = std::sqrt(s0 * s0 - s * s * c0 * c0);
        sums.length += s0 / root;
        sums.h += s * c0 / root;
    }
    return sums;
}

/// Random raw profile with integer sample depths, for property tests.
inline anchorplan::SoundSpeedProfile random_raw_profile(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    anchorplan::SoundSpeedProfile p;
    const int samples =
        3 + static_cast<int>(anchorplan::uniform_double(rng) * 8);
    double depth = 0.0;
    for (int i = 0; i < samples; ++i) {
        p.depths.push_back(depth);
        p.speeds.push_back(anchorplan::uniform_double(rng, 1450.0, 1550.0));
        depth += 1.0 + std::floor(anchorplan::uniform_double(rng) * 200.0);
    }
    return p;
}

}  // namespace support
