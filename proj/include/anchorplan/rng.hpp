#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace anchorplan {

/// Counter-based sub-seed derivation (splitmix64 finalizer).  Trials and
/// worker threads seed their own generators from (master, index) pairs,
/// so results do not depend on execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) built from the top 53 bits of the generator
/// output.  Avoids std::uniform_real_distribution, whose exact stream is
/// implementation-defined.
inline double uniform_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_double(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_double(rng);
}

/// Standard normal sampler (Box-Muller with cached spare).  Fully
/// determined by the generator stream, unlike std::normal_distribution.
class GaussianSampler {
public:
    double operator()(std::mt19937_64& rng) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // 1 - u keeps the argument of log strictly positive.
        const double u1 = 1.0 - uniform_double(rng);
        const double u2 = uniform_double(rng);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(phi);
        has_spare_ = true;
        return r * std::cos(phi);
    }

private:
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace anchorplan
