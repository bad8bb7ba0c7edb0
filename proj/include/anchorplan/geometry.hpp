#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "anchorplan/errors.hpp"
#include "anchorplan/linalg.hpp"
#include "anchorplan/raytrace.hpp"

namespace anchorplan {

/// A seafloor anchor plus J surface reference nodes, with the per-node
/// elevation angle, azimuth and straight-line range derived once at
/// construction.  Coordinates are meters with z positive downward, so
/// the anchor has z > 0 and every reference node sits at z = 0.
struct DeploymentGeometry {
    Vec3 anchor;
    std::vector<Vec3> refs;
    std::vector<double> alphas;  // elevation angles, rad, in (0, pi/2)
    std::vector<double> betas;   // azimuth of each node around the anchor,
                                 // rad, in [0, 2*pi)
    std::vector<double> ranges;  // straight-line node-to-anchor distance, m

    std::size_t node_count() const { return refs.size(); }
};

inline DeploymentGeometry make_geometry(const Vec3& anchor,
                                        std::vector<Vec3> refs) {
    if (!(anchor.z > 0.0))
        throw ValidationError("anchor depth must be positive");
    if (refs.empty())
        throw ValidationError("geometry needs at least one reference node");

    DeploymentGeometry g;
    g.anchor = anchor;
    g.refs = std::move(refs);
    g.alphas.reserve(g.refs.size());
    g.betas.reserve(g.refs.size());
    g.ranges.reserve(g.refs.size());
    for (const Vec3& r : g.refs) {
        if (std::fabs(r.z) > 1e-9)
            throw ValidationError("reference nodes must sit at the surface");
        const double dx = r.x - anchor.x;
        const double dy = r.y - anchor.y;
        const double horizontal = std::hypot(dx, dy);
        if (horizontal <= 0.0)
            throw ValidationError(
                "reference node directly above the anchor is not allowed");
        g.alphas.push_back(elevation_angle(anchor.z, horizontal));
        double beta = std::atan2(dy, dx);
        if (beta < 0.0) beta += 2.0 * kPi;
        g.betas.push_back(beta);
        g.ranges.push_back(std::hypot(horizontal, anchor.z));
    }
    return g;
}

}  // namespace anchorplan
