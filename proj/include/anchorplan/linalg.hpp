#pragma once

#include <array>
#include <cmath>

namespace anchorplan {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator-(const Vec3& a, const Vec3& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend Vec3 operator+(const Vec3& a, const Vec3& b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
};

inline double norm(const Vec3& v) {
    return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
}

inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Symmetric 3x3 matrix stored by unique entries.
struct SymMat3 {
    double xx = 0.0, xy = 0.0, xz = 0.0;
    double yy = 0.0, yz = 0.0;
    double zz = 0.0;

    double trace() const { return xx + yy + zz; }

    double det() const {
        return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) +
               xz * (xy * yz - yy * xz);
    }

    /// Sum of the diagonal cofactors, i.e. the trace of the adjugate.
    /// trace(inverse) = adjugate_trace() / det().
    double adjugate_trace() const {
        const double c_xx = yy * zz - yz * yz;
        const double c_yy = xx * zz - xz * xz;
        const double c_zz = xx * yy - xy * xy;
        return c_xx + c_yy + c_zz;
    }
};

/// Eigenvalues of a symmetric 3x3 matrix, ascending.  Trigonometric
/// solution of the characteristic cubic; exact for diagonal input.
inline std::array<double, 3> sym3_eigenvalues(const SymMat3& m) {
    const double p1 = m.xy * m.xy + m.xz * m.xz + m.yz * m.yz;
    if (p1 == 0.0) {
        std::array<double, 3> d{m.xx, m.yy, m.zz};
        if (d[0] > d[1]) std::swap(d[0], d[1]);
        if (d[1] > d[2]) std::swap(d[1], d[2]);
        if (d[0] > d[1]) std::swap(d[0], d[1]);
        return d;
    }
    const double q = m.trace() / 3.0;
    const double dxx = m.xx - q, dyy = m.yy - q, dzz = m.zz - q;
    const double p2 = dxx * dxx + dyy * dyy + dzz * dzz + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    SymMat3 b{dxx / p, m.xy / p, m.xz / p, dyy / p, m.yz / p, dzz / p};
    double r = b.det() / 2.0;
    r = std::fmin(1.0, std::fmax(-1.0, r));
    const double phi = std::acos(r) / 3.0;
    const double two_pi_3 = 2.0943951023931953;
    const double e_hi = q + 2.0 * p * std::cos(phi);
    const double e_lo = q + 2.0 * p * std::cos(phi + two_pi_3);
    return {e_lo, 3.0 * q - e_hi - e_lo, e_hi};
}

}  // namespace anchorplan
