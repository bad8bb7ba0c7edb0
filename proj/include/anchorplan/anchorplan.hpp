#pragma once

// Umbrella header: deployment planning and verification for TOA
// positioning of a seafloor anchor under a depth-dependent sound speed
// profile.

#include "anchorplan/crlb.hpp"
#include "anchorplan/errors.hpp"
#include "anchorplan/geometry.hpp"
#include "anchorplan/linalg.hpp"
#include "anchorplan/localizer.hpp"
#include "anchorplan/montecarlo.hpp"
#include "anchorplan/noise.hpp"
#include "anchorplan/optimize.hpp"
#include "anchorplan/raytrace.hpp"
#include "anchorplan/rng.hpp"
#include "anchorplan/ssp.hpp"
