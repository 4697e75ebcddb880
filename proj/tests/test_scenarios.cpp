#include <gtest/gtest.h>

#include <cmath>

#include "rainsw/scenarios.hpp"

using namespace rainsw;

TEST(Build, Flume)
{
    const auto s = build("flume");
    EXPECT_DOUBLE_EQ(bed_elevation(s.topography, 0.0), 0.2);
    EXPECT_GT(s.sources.rain_at(60.0, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(s.sources.rain_at(60.0, 1.0), 50.0 / 3.6e6);
    EXPECT_EQ(s.sources.rain_at(125.0, 1.0), 0.0);
    EXPECT_EQ(s.sources.rain_at(60.0, 3.96), 0.0);
    EXPECT_EQ(s.length, 4.0);
    EXPECT_EQ(s.cells, 1000);
    EXPECT_EQ(s.final_time, 250.0);
    EXPECT_EQ(s.cfl, 0.95);
    EXPECT_EQ(s.boundary, (BoundaryPair{Boundary::wall, Boundary::outflow}));
    EXPECT_EQ(std::get<UniformInitial>(s.initial), (UniformInitial{0.0, 0.0}));
}

TEST(Build, UniformRainAlpha)
{
    const auto s = build("uniform_rain_alpha", {{"alpha", "1"}});
    EXPECT_TRUE(s.boundary.periodic());
    EXPECT_EQ(s.friction.alpha, 1.0);
    const Grid g(s.length, s.cells);
    for (double t : {0.0, 0.5, 0.999}) {
        const auto r = evaluate_sources(s.sources, t, g);
        for (std::size_t i = 0; i < r.net.size(); i += 111) {
            EXPECT_EQ(r.rain[i], 1.0);
            EXPECT_EQ(r.net[i], 1.0);
        }
    }
    EXPECT_EQ(s.length, 10.0);
    EXPECT_EQ(s.final_time, 1.0);
}

TEST(Build, CascadeTriple)
{
    const auto s = build("cascade_triple");
    const auto& z = s.topography;
    EXPECT_NEAR(bed_elevation(z, 0.0), 0.06, 1e-15);
    EXPECT_NEAR(bed_elevation(z, 4.0), (12.0 - 4.0) * 0.006 - 0.012, 1e-15);
    EXPECT_NEAR(bed_elevation(z, 8.0), (12.0 - 8.0) * 0.004, 1e-15);
    EXPECT_NEAR(bed_elevation(z, 12.0), 0.0, 1e-15);
    for (double x : {4.0, 8.0}) EXPECT_NEAR(bed_elevation(z, x - 1e-9), bed_elevation(z, x + 1e-9), 1e-10);
    EXPECT_NEAR(bed_elevation(z, 6.0), (12.0 - 6.0) * 0.005 - 0.004, 1e-15);
}

TEST(Build, Cascade)
{
    const auto s = build("cascade_single", {{"alpha", "5"}, {"rain_duration", "30"}});
    EXPECT_EQ(s.friction.alpha, 5.0);
    EXPECT_EQ(s.length, 12.0);
    EXPECT_EQ(s.final_time, 40.0);
    EXPECT_DOUBLE_EQ(s.sources.rain_at(29.0, 11.9), 0.001 / 3.6e6);
    EXPECT_EQ(s.sources.rain_at(30.0, 1.0), 0.0);
    EXPECT_EQ(s.snapshots, std::vector<double>{30.0});
}

TEST(Build, FlumeBedIsContinuous)
{
    const auto s = build("flume");
    for (double x = 0.1; x < 4.0; x += 0.1)
        EXPECT_NEAR(bed_elevation(s.topography, x - 1e-9), bed_elevation(s.topography, x + 1e-9), 2e-10);
}

TEST(Build, Errors)
{
    EXPECT_THROW(build("nope"), std::invalid_argument);
    EXPECT_THROW(build("flume", {{"cfl", "1.5"}}), std::invalid_argument);
    EXPECT_THROW(build("flume", {{"cfl", "abc"}}), std::invalid_argument);
    EXPECT_THROW(build("flume", {{"colour", "red"}}), std::invalid_argument);
    EXPECT_THROW(build("flume", {{"model", "other"}}), std::invalid_argument);
    EXPECT_THROW(build("flume", {{"rain", "-1"}}), std::invalid_argument);
}

TEST(Build, EveryNameValidates)
{
    for (const auto& n : scenario_names()) {
        EXPECT_TRUE(is_scenario_name(n));
        EXPECT_NO_THROW(build(n).validate()) << n;
    }
    EXPECT_FALSE(is_scenario_name("flumes"));
}
