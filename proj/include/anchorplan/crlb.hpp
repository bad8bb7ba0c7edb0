#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "anchorplan/errors.hpp"
#include "anchorplan/geometry.hpp"
#include "anchorplan/linalg.hpp"
#include "anchorplan/noise.hpp"

namespace anchorplan {

/// Fisher information of the J range measurements, kept together with
/// the whitened column norms and pairwise angle cosines that the
/// closed-form trace expansion uses.
struct Fim {
    SymMat3 matrix;       // 1/m^2
    double a_norm2 = 0.0;  // |a_hat|^2: weighted east-component energy
    double b_norm2 = 0.0;  // |b_hat|^2: weighted north-component energy
    double c_norm2 = 0.0;  // |c_hat|^2: weighted vertical-component energy
    double cos_ab = 0.0;   // angle cosine between a_hat and b_hat
    double cos_ac = 0.0;
    double cos_bc = 0.0;
};

/// Unit gradient of the straight-line range with respect to the target
/// position, expressed through the node's elevation and azimuth.
inline Vec3 jacobian_row(double alpha, double beta) {
    if (!std::isfinite(alpha) || !std::isfinite(beta))
        throw ValidationError("angles must be finite");
    const double ca = std::cos(alpha);
    return {ca * std::cos(beta), ca * std::sin(beta), std::sin(alpha)};
}

/// Condition threshold above which a layout is treated as degenerate.
inline constexpr double kSingularConditionNumber = 1e12;

inline Fim build_fim(std::span<const double> alphas,
                     std::span<const double> betas,
                     const MeasurementCovariance& cov) {
    const std::size_t j_count = alphas.size();
    if (j_count == 0 || betas.size() != j_count ||
        cov.variances.size() != j_count)
        throw ValidationError("angle and variance lists must match in length");

    Fim fim;
    double sab = 0.0, sac = 0.0, sbc = 0.0;
    for (std::size_t j = 0; j < j_count; ++j) {
        const Vec3 row = jacobian_row(alphas[j], betas[j]);
        const double w = 1.0 / cov.variances[j];
        fim.a_norm2 += w * row.x * row.x;
        fim.b_norm2 += w * row.y * row.y;
        fim.c_norm2 += w * row.z * row.z;
        sab += w * row.x * row.y;
        sac += w * row.x * row.z;
        sbc += w * row.y * row.z;
    }
    fim.matrix = SymMat3{fim.a_norm2, sab, sac, fim.b_norm2, sbc, fim.c_norm2};

    const auto eig = sym3_eigenvalues(fim.matrix);
    if (!(eig[0] > eig[2] / kSingularConditionNumber))
        throw SingularGeometryError(
            "layout yields a (near-)singular information matrix");

    const double ab_scale = std::sqrt(fim.a_norm2 * fim.b_norm2);
    const double ac_scale = std::sqrt(fim.a_norm2 * fim.c_norm2);
    const double bc_scale = std::sqrt(fim.b_norm2 * fim.c_norm2);
    fim.cos_ab = sab / ab_scale;
    fim.cos_ac = sac / ac_scale;
    fim.cos_bc = sbc / bc_scale;
    return fim;
}

inline Fim build_fim(const DeploymentGeometry& geometry,
                     const MeasurementCovariance& cov) {
    return build_fim(geometry.alphas, geometry.betas, cov);
}

namespace detail {

inline double fim_angle_volume(const Fim& f) {
    return 1.0 - f.cos_ab * f.cos_ab - f.cos_ac * f.cos_ac -
           f.cos_bc * f.cos_bc + 2.0 * f.cos_ab * f.cos_ac * f.cos_bc;
}

}  // namespace detail

/// Exact trace of the inverse information matrix.  Computed from the
/// 3x3 adjugate and cross-checked against the angle-cosine expansion;
/// a disagreement beyond the conditioning-scaled tolerance means a
/// defect, not bad input.
inline double crlb_trace_exact(const Fim& fim) {
    const double det = fim.matrix.det();
    if (!(det > 0.0))
        throw SingularGeometryError("information matrix is not invertible");
    const double trace_adj = fim.matrix.adjugate_trace() / det;

    const double lambda = detail::fim_angle_volume(fim);
    const double trace_angle =
        ((1.0 - fim.cos_bc * fim.cos_bc) / fim.a_norm2 +
         (1.0 - fim.cos_ac * fim.cos_ac) / fim.b_norm2 +
         (1.0 - fim.cos_ab * fim.cos_ab) / fim.c_norm2) /
        lambda;

    const double tol = std::max(1e-9, 64.0 * 2.220446049250313e-16 /
                                          std::fabs(lambda));
    if (std::fabs(trace_adj - trace_angle) >
        tol * std::max(std::fabs(trace_adj), std::fabs(trace_angle)))
        throw InvariantViolationError(
            "adjugate and angle-expansion traces disagree");
    return trace_adj;
}

/// Orthogonality lower bound 1/|a|^2 + 1/|b|^2 + 1/|c|^2; reached
/// exactly when the three whitened columns are mutually orthogonal.
inline double crlb_lower_bound(const Fim& fim) {
    return 1.0 / fim.a_norm2 + 1.0 / fim.b_norm2 + 1.0 / fim.c_norm2;
}

/// Closed-form bound for a ring of J nodes sharing one elevation angle
/// and one measurement variance.  Infinite at the endpoint angles, where
/// either the horizontal or the vertical component is unobservable.
inline double crlb_bound_same_noise(int j_count, double alpha,
                                    double sigma2) {
    if (j_count < 3) throw ValidationError("need at least 3 reference nodes");
    if (!(sigma2 > 0.0)) throw ValidationError("variance must be positive");
    if (!(alpha >= 0.0) || !(alpha <= kHalfPi))
        throw ValidationError("elevation angle must lie in [0, pi/2]");
    const double c = std::cos(alpha);
    const double s = std::sin(alpha);
    if (c == 0.0 || s == 0.0) return std::numeric_limits<double>::infinity();
    return (4.0 * sigma2 / (c * c)) / j_count + (sigma2 / (s * s)) / j_count;
}

/// Per-node bound sum for heterogeneous noise, implemented exactly as
/// the closed form states it.  In the homogeneous case it equals
/// J^2 times crlb_bound_same_noise; both forms are exposed on purpose.
inline double crlb_bound_hetero(std::span<const double> alphas,
                                std::span<const double> sigma2s) {
    if (alphas.empty() || alphas.size() != sigma2s.size())
        throw ValidationError("angle and variance lists must match in length");
    double total = 0.0;
    for (std::size_t j = 0; j < alphas.size(); ++j) {
        if (!(sigma2s[j] > 0.0))
            throw ValidationError("variance must be positive");
        if (!(alphas[j] > 0.0) || !(alphas[j] < kHalfPi))
            throw ValidationError("elevation angle must lie in (0, pi/2)");
        const double c = std::cos(alphas[j]);
        const double s = std::sin(alphas[j]);
        total += 4.0 * sigma2s[j] / (c * c) + sigma2s[j] / (s * s);
    }
    return total;
}

struct RefErrorBounds {
    double lower = 0.0;  // m^2
    double upper = 0.0;  // m^2
};

/// Bound interval when the surface nodes carry their own position error:
/// its slant projection adds to or cancels part of the ranging variance.
inline RefErrorBounds crlb_bounds_with_ref_error(int j_count, double alpha,
                                                 double sigma2_d,
                                                 double sigma2_r) {
    if (!(sigma2_d > 0.0))
        throw ValidationError("ranging variance must be positive");
    if (!(sigma2_r >= 0.0))
        throw ValidationError("reference variance must be >= 0");
    const double c = std::cos(alpha);
    const double projected = sigma2_r * c * c;
    if (sigma2_d - projected <= 0.0)
        throw NonPositiveVarianceError(
            "projected reference error cancels the ranging variance");
    return {crlb_bound_same_noise(j_count, alpha, sigma2_d - projected),
            crlb_bound_same_noise(j_count, alpha, sigma2_d + projected)};
}

/// The four weighted layout sums that must vanish for the closed-form
/// bound to be tight: cross products of the whitened columns plus the
/// east/north balance term.
inline std::array<double, 4> equality_residuals(
    std::span<const double> alphas, std::span<const double> betas,
    const MeasurementCovariance& cov) {
    if (alphas.size() != betas.size() ||
        alphas.size() != cov.variances.size())
        throw ValidationError("angle and variance lists must match in length");
    std::array<double, 4> r{0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < alphas.size(); ++j) {
        const double w = 1.0 / cov.variances[j];
        const double ca = std::cos(alphas[j]);
        const double sa = std::sin(alphas[j]);
        const double cb = std::cos(betas[j]);
        const double sb = std::sin(betas[j]);
        r[0] += w * ca * ca * cb * sb;
        r[1] += w * ca * cb * sa;
        r[2] += w * ca * sb * sa;
        r[3] += w * ca * ca * std::cos(2.0 * betas[j]);
    }
    return r;
}

inline std::array<double, 4> equality_residuals(
    const DeploymentGeometry& geometry, const MeasurementCovariance& cov) {
    return equality_residuals(geometry.alphas, geometry.betas, cov);
}

struct CrlbReport {
    double trace_exact = 0.0;                       // m^2
    double trace_bound = 0.0;                       // m^2
    std::array<double, 4> residuals{0, 0, 0, 0};    // tightness conditions
    double bound_gap = 0.0;                         // m^2, >= 0 up to rounding
};

inline CrlbReport crlb_report(const DeploymentGeometry& geometry,
                              const MeasurementCovariance& cov) {
    const Fim fim = build_fim(geometry, cov);
    CrlbReport report;
    report.trace_exact = crlb_trace_exact(fim);
    report.trace_bound = crlb_lower_bound(fim);
    report.residuals = equality_residuals(geometry, cov);
    report.bound_gap = report.trace_exact - report.trace_bound;
    return report;
}

}  // namespace anchorplan
