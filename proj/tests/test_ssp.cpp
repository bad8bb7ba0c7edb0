#include "anchorplan/ssp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"

using anchorplan::ParseError;
using anchorplan::SoundSpeedProfile;
using anchorplan::ValidationError;

namespace {

SoundSpeedProfile parse(const std::string& text) {
    std::istringstream in(text);
    return anchorplan::load_profile(in);
}

TEST(SspLoad, TwoSampleIsoProfile) {
    const auto p = parse("0 1500\n2000 1500\n");
    ASSERT_EQ(p.depths.size(), 2u);
    EXPECT_EQ(p.depths[0], 0.0);
    EXPECT_EQ(p.depths[1], 2000.0);
    EXPECT_EQ(p.speeds[0], 1500.0);
    EXPECT_EQ(p.speeds[1], 1500.0);
    EXPECT_FALSE(p.standardized);
}

TEST(SspLoad, DuplicateDepthRejected) {
    EXPECT_THROW(parse("0 1500\n0 1510\n"), ParseError);
}

TEST(SspLoad, FourSampleDigitizedShape) {
    const auto p = parse("0 1519\n100 1505\n1000 1484\n3000 1530\n");
    ASSERT_EQ(p.depths.size(), 4u);
    for (std::size_t i = 1; i < p.depths.size(); ++i)
        EXPECT_LT(p.depths[i - 1], p.depths[i]);
    EXPECT_EQ(p.speeds[0], 1519.0);
    EXPECT_EQ(p.speeds[3], 1530.0);
}

TEST(SspLoad, RowsSortedAndCommentsSkipped) {
    const auto p = parse("# header\n1000 1484\n\n0 1519  # surface\n100 1505\n");
    ASSERT_EQ(p.depths.size(), 3u);
    EXPECT_EQ(p.depths[0], 0.0);
    EXPECT_EQ(p.depths[2], 1000.0);
    EXPECT_EQ(p.speeds[2], 1484.0);
}

TEST(SspLoad, MalformedRowsRejected) {
    EXPECT_THROW(parse("0 1500\n100\n"), ParseError);
    EXPECT_THROW(parse("0 1500\n100 1500 1500\n"), ParseError);
    EXPECT_THROW(parse("0 1500\nabc def\n"), ParseError);
}

TEST(SspLoad, NonPositiveSpeedRejected) {
    EXPECT_THROW(parse("0 1500\n100 0\n"), ParseError);
    EXPECT_THROW(parse("0 1500\n100 -3\n"), ParseError);
}

TEST(SspLoad, NegativeDepthRejected) {
    EXPECT_THROW(parse("-5 1500\n100 1500\n"), ParseError);
}

TEST(SspLoad, FewerThanTwoRowsRejected) {
    EXPECT_THROW(parse("0 1500\n"), ParseError);
    EXPECT_THROW(parse("# nothing\n"), ParseError);
}

TEST(SspLoad, MissingFileRejected) {
    EXPECT_THROW(anchorplan::load_profile_file("/nonexistent/ssp.txt"),
                 ParseError);
}

TEST(SspStandardize, AffineMidpoint) {
    const auto p = anchorplan::standardize(parse("0 1500\n2 1530\n"));
    ASSERT_EQ(p.speeds.size(), 3u);
    EXPECT_DOUBLE_EQ(p.speeds[0], 1500.0);
    EXPECT_DOUBLE_EQ(p.speeds[1], 1515.0);
    EXPECT_DOUBLE_EQ(p.speeds[2], 1530.0);
    EXPECT_TRUE(p.standardized);
}

TEST(SspStandardize, ConstantProfile) {
    const auto p = anchorplan::standardize(parse("0 1500\n3000 1500\n"));
    ASSERT_EQ(p.speeds.size(), 3001u);
    for (double s : p.speeds) EXPECT_EQ(s, 1500.0);
    for (std::size_t i = 0; i < p.depths.size(); ++i)
        EXPECT_EQ(p.depths[i], static_cast<double>(i));
}

TEST(SspStandardize, HandInterpolatedValue) {
    const auto p = anchorplan::standardize(parse("0 1519\n100 1505\n"));
    EXPECT_DOUBLE_EQ(p.speeds[50], 1512.0);
}

TEST(SspStandardize, Idempotent) {
    const auto once = anchorplan::standardize(parse(
        "0 1519\n100 1505\n1000 1484\n3000 1530\n"));
    const auto twice = anchorplan::standardize(once);
    EXPECT_TRUE(once == twice);
}

TEST(SspStandardize, PreservesRawSamplesOnGrid) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto raw = support::random_raw_profile(seed);
        const auto std_profile = anchorplan::standardize(raw);
        for (std::size_t k = 0; k < raw.depths.size(); ++k) {
            const auto z = static_cast<std::size_t>(raw.depths[k]);
            if (z >= std_profile.speeds.size()) continue;
            EXPECT_NEAR(std_profile.speeds[z], raw.speeds[k],
                        1e-12 * raw.speeds[k]);
        }
    }
}

TEST(SspStandardize, ExtendsFlatToSurfaceWithFlag) {
    bool extended = false;
    const auto p =
        anchorplan::standardize(parse("10 1490\n100 1500\n"), &extended);
    EXPECT_TRUE(extended);
    EXPECT_EQ(p.speeds[0], 1490.0);
    EXPECT_EQ(p.speeds[5], 1490.0);
    EXPECT_EQ(p.speeds[10], 1490.0);
    EXPECT_GT(p.speeds[50], 1490.0);

    extended = true;
    anchorplan::standardize(parse("0 1500\n100 1500\n"), &extended);
    EXPECT_FALSE(extended);
}

TEST(SspStandardize, TooShallowRejected) {
    EXPECT_THROW(anchorplan::standardize(parse("0 1500\n0.5 1501\n")),
                 ValidationError);
}

TEST(SspGradients, IsoProfileIsAllZero) {
    const auto g =
        anchorplan::gradients(SoundSpeedProfile::uniform(1500.0, 100));
    ASSERT_EQ(g.size(), 100u);
    for (double v : g) EXPECT_EQ(v, 0.0);
}

TEST(SspGradients, HandValue) {
    const auto p = anchorplan::standardize(parse("0 1500\n1 1515\n"));
    const auto g = anchorplan::gradients(p);
    ASSERT_EQ(g.size(), 1u);
    EXPECT_NEAR(g[0], 0.01, 1e-15);
}

TEST(SspGradients, RoundTripReconstructsProfile) {
    for (std::uint64_t seed = 21; seed <= 30; ++seed) {
        const auto p =
            anchorplan::standardize(support::random_raw_profile(seed));
        const auto g = anchorplan::gradients(p);
        double s = p.speeds.front();
        for (std::size_t i = 0; i < g.size(); ++i) {
            s *= 1.0 + g[i];
            EXPECT_NEAR(s, p.speeds[i + 1], 1e-12 * p.speeds[i + 1]);
        }
    }
}

TEST(SspGradients, RequiresStandardizedProfile) {
    EXPECT_THROW(anchorplan::gradients(parse("0 1500\n100 1510\n")),
                 ValidationError);
}

}  // namespace
