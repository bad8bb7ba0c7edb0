#include "anchorplan/raytrace.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "anchorplan/rng.hpp"
#include "anchorplan/ssp.hpp"
#include "support.hpp"

using anchorplan::RayPath;
using anchorplan::RayTotals;
using anchorplan::SoundSpeedProfile;
using anchorplan::TurningRayError;
using anchorplan::UnreachableError;
using anchorplan::ValidationError;
using support::rad;

namespace {

SoundSpeedProfile gradient_profile() {
    // Surface 1480 m/s increasing linearly to 1540 m/s at 1000 m: rays
    // shallower than acos(1480/1540) = 16.04 deg turn before the bottom.
    std::istringstream in("0 1480\n1000 1540\n");
    return anchorplan::standardize(anchorplan::load_profile(in));
}

TEST(TraceDown, StraightRayInHomogeneousMedium) {
    const auto p = SoundSpeedProfile::uniform(1500.0, 2000);
    const RayPath ray = anchorplan::trace_down(p, rad(45.0), 1000);
    EXPECT_NEAR(ray.h, 1000.0, 1e-9);
    EXPECT_NEAR(ray.length, 1000.0 * std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(ray.time, 1000.0 * std::sqrt(2.0) / 1500.0, 1e-12);
    ASSERT_EQ(ray.dl.size(), 1000u);
}

TEST(TraceDown, IsoSpeedDegeneracy) {
    const auto p = SoundSpeedProfile::uniform(1520.0, 3000);
    for (double deg : {10.0, 30.0, 49.45, 70.0, 85.0}) {
        const RayPath ray = anchorplan::trace_down(p, rad(deg), 3000);
        EXPECT_NEAR(ray.length, 3000.0 / std::sin(rad(deg)),
                    1e-12 * ray.length);
        EXPECT_NEAR(ray.h, 3000.0 / std::tan(rad(deg)),
                    1e-12 * std::max(ray.h, 1.0));
    }
}

TEST(TraceDown, SnellInvariantHoldsPerLayer) {
    const auto& p = support::south_pacific();
    const RayPath ray = anchorplan::trace_down(p, rad(48.0), 2500);
    const double reference = std::cos(ray.theta0) / p.speeds.front();
    for (std::size_t k = 0; k < ray.grazing.size(); ++k) {
        const double ratio = std::cos(ray.grazing[k]) / p.speeds[k];
        EXPECT_NEAR(ratio, reference, 1e-12 * reference);
    }
}

TEST(TraceDown, SegmentGeometryPerLayer) {
    const auto& p = support::south_pacific();
    const RayPath ray = anchorplan::trace_down(p, rad(37.0), 2000);
    for (std::size_t k = 0; k < ray.dl.size(); ++k) {
        EXPECT_GE(ray.dl[k], 1.0);
        EXPECT_NEAR(ray.dl[k] * ray.dl[k], ray.dh[k] * ray.dh[k] + 1.0,
                    1e-9 * ray.dl[k] * ray.dl[k]);
        EXPECT_GT(ray.grazing[k], 0.0);
        EXPECT_LT(ray.grazing[k], anchorplan::kHalfPi);
    }
}

TEST(TraceDown, TurningRayDetected) {
    const auto p = gradient_profile();
    // Layers 1..1000 use the speed at their top, so the fastest layer
    // traversed on the way to 1000 m is the one starting at 999 m.
    const double fastest = 1480.0 + 999.0 * 60.0 / 1000.0;
    EXPECT_NEAR(support::deg(anchorplan::min_grazing_angle(p, 1000)),
                support::deg(std::acos(1480.0 / fastest)), 1e-9);
    EXPECT_THROW(anchorplan::trace_down(p, rad(16.0), 1000), TurningRayError);
    // The same launch angle is fine above the fast layer.
    EXPECT_NO_THROW(anchorplan::trace_down(p, rad(16.0), 900));
    EXPECT_NO_THROW(anchorplan::trace_down(p, rad(17.0), 1000));
}

TEST(TraceDown, MatchesClosedFormTotals) {
    const auto& p = support::south_pacific();
    const RayPath ray = anchorplan::trace_down(p, rad(48.0), 2500);
    const RayTotals totals = anchorplan::ray_totals(p, rad(48.0), 2500);
    EXPECT_NEAR(ray.h, totals.h, 1e-9 * totals.h);
    EXPECT_NEAR(ray.length, totals.length, 1e-9 * totals.length);
    EXPECT_NEAR(ray.time, totals.time, 1e-9 * totals.time);

    const auto oracle = support::closed_sums(p, rad(48.0), 2500);
    EXPECT_NEAR(ray.h, oracle.h, 1e-9 * oracle.h);
    EXPECT_NEAR(ray.length, oracle.length, 1e-9 * oracle.length);
}

TEST(TraceDown, TotalsDecreaseWithLaunchAngle) {
    for (const auto* profile :
         {&support::south_pacific(), &support::deep_trial()}) {
        double prev_h = 1e30, prev_l = 1e30;
        for (double deg = 5.0; deg <= 89.0; deg += 0.1) {
            const RayTotals t = anchorplan::ray_totals(*profile, rad(deg), 2500);
            EXPECT_LT(t.h, prev_h);
            EXPECT_LT(t.length, prev_l);
            prev_h = t.h;
            prev_l = t.length;
        }
    }
}

TEST(TraceDown, InputValidation) {
    const auto p = SoundSpeedProfile::uniform(1500.0, 100);
    EXPECT_THROW(anchorplan::trace_down(p, 0.0, 50), ValidationError);
    EXPECT_THROW(anchorplan::trace_down(p, anchorplan::kHalfPi, 50),
                 ValidationError);
    EXPECT_THROW(anchorplan::trace_down(p, rad(45.0), 0), ValidationError);
    EXPECT_THROW(anchorplan::trace_down(p, rad(45.0), 101), ValidationError);
    std::istringstream in("0 1500\n100 1500\n");
    const auto raw = anchorplan::load_profile(in);
    EXPECT_THROW(anchorplan::trace_down(raw, rad(45.0), 50), ValidationError);
}

TEST(SolveTheta0, StraightLineGeometry) {
    const auto p = SoundSpeedProfile::uniform(1500.0, 1500);
    const double theta = anchorplan::solve_theta0(p, 1000, 1000.0);
    EXPECT_NEAR(theta, rad(45.0), 1e-7);
}

TEST(SolveTheta0, DeepTrialSmallCircleAngle) {
    const auto p = SoundSpeedProfile::uniform(1500.0, 3070);
    const double theta = anchorplan::solve_theta0(p, 3070, 1600.0);
    // In a homogeneous medium the launch angle equals the elevation of
    // the straight line: atan(3070/1600) = 62.4727 degrees.
    EXPECT_NEAR(support::deg(theta), 62.4727, 1e-4);
    EXPECT_NEAR(theta, std::atan2(3070.0, 1600.0), 1e-7);
}

TEST(SolveTheta0, RoundTripsTraceDown) {
    const auto& p = support::south_pacific();
    std::mt19937_64 rng(7);
    for (int k = 0; k < 25; ++k) {
        const double theta = anchorplan::uniform_double(rng, rad(8.0), rad(88.0));
        const double h = anchorplan::ray_totals(p, theta, 2500).h;
        EXPECT_NEAR(anchorplan::solve_theta0(p, 2500, h), theta, 1e-7);
    }
}

TEST(SolveTheta0, ResidualWithinTolerance) {
    const auto& p = support::deep_trial();
    for (double h : {100.0, 1600.0, 5000.0, 12000.0}) {
        const double theta = anchorplan::solve_theta0(p, 3070, h);
        EXPECT_NEAR(anchorplan::trace_down(p, theta, 3070).h, h, 1e-6);
    }
}

TEST(SolveTheta0, VerticalAndUnreachableTargets) {
    const auto p = gradient_profile();
    const double vertical = anchorplan::solve_theta0(p, 1000, 0.0);
    EXPECT_GT(vertical, rad(89.999));
    EXPECT_THROW(anchorplan::solve_theta0(p, 1000, 1.0e5), UnreachableError);
}

TEST(ElevationAngle, HandValues) {
    EXPECT_NEAR(support::deg(anchorplan::elevation_angle(3070.0, 1600.0)),
                62.4727, 1e-4);
    EXPECT_NEAR(support::deg(anchorplan::elevation_angle(3070.0, 5000.0)),
                31.5499, 1e-4);
    EXPECT_DOUBLE_EQ(support::deg(anchorplan::elevation_angle(1234.0, 1234.0)),
                     45.0);
    EXPECT_DOUBLE_EQ(anchorplan::elevation_angle(10.0, 0.0),
                     anchorplan::kHalfPi);
    EXPECT_THROW(anchorplan::elevation_angle(0.0, 5.0), ValidationError);
    EXPECT_THROW(anchorplan::elevation_angle(5.0, -1.0), ValidationError);
}

TEST(GrazingElevationRatio, ExactlyOneInHomogeneousMedium) {
    const auto p = SoundSpeedProfile::uniform(1500.0, 2000);
    for (double deg : {15.0, 40.0, 65.0, 89.0})
        EXPECT_NEAR(anchorplan::grazing_elevation_ratio(p, 2000, rad(deg)),
                    1.0, 1e-9);
}

TEST(GrazingElevationRatio, NearOneAndSmoothOnRealProfile) {
    const auto& p = support::south_pacific();
    double max_dev = 0.0;
    double prev = anchorplan::grazing_elevation_ratio(p, 2500, rad(20.0));
    for (double deg = 20.1; deg <= 80.0; deg += 0.1) {
        const double ratio =
            anchorplan::grazing_elevation_ratio(p, 2500, rad(deg));
        EXPECT_LT(std::fabs(ratio - prev), 1e-3);
        max_dev = std::max(max_dev, std::fabs(ratio - 1.0));
        prev = ratio;
    }
    EXPECT_LT(max_dev, 0.05);
    EXPECT_GT(max_dev, 0.0);  // a stratified profile bends the rays
}

TEST(GrazingElevationRatio, PropagatesTurningRay) {
    EXPECT_THROW(
        anchorplan::grazing_elevation_ratio(gradient_profile(), 1000, rad(10.0)),
        TurningRayError);
}

}  // namespace
