#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rainsw/kinetic.hpp"

using namespace rainsw;

namespace {
constexpr double g = 9.81;
const double inf = std::numeric_limits<double>::infinity();
}

TEST(Chi, Values)
{
    EXPECT_EQ(chi(std::sqrt(2.0 * g), g), 0.0);
    EXPECT_NEAR(chi(0.0, g), 0.14372, 1e-5);
    EXPECT_DOUBLE_EQ(chi(0.0, g), std::sqrt(2.0 * g) / (std::numbers::pi * g));
    EXPECT_EQ(chi(10.0, g), 0.0);
}

TEST(Chi, EvenAndNonNegative)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> w(-6.0, 6.0);
    for (int k = 0; k < 1000; ++k) {
        const double x = w(rng);
        EXPECT_EQ(chi(x, g), chi(-x, g));
        EXPECT_GE(chi(x, g), 0.0);
    }
}

TEST(Chi, NormalisationAgainstQuadrature)
{
    EXPECT_NEAR(oracle::chi_moment(0, g), 1.0, 1e-8);
    EXPECT_NEAR(oracle::chi_moment(2, g), g / 2.0, 1e-8 * g);
    const KineticDensityParams unit{1.0, 0.0, g};
    EXPECT_NEAR(full_moment(unit, 0), 1.0, 1e-12);
    EXPECT_NEAR(full_moment(unit, 2), g / 2.0, 1e-12 * g);
}

TEST(Density, Values)
{
    EXPECT_EQ(density({0.0, 3.0, g}, 3.0), 0.0);
    EXPECT_NEAR(density({1.0, 0.0, g}, 0.0), 0.14372, 1e-5);
    EXPECT_DOUBLE_EQ(density({4.0, 1.0, g}, 1.0), 2.0 * chi(0.0, g));
    const KineticDensityParams p{2.0, 1.0, g};
    const double r = support_radius(p);
    EXPECT_EQ(density(p, 1.0 + r + 1e-9), 0.0);
    EXPECT_EQ(density(p, 1.0 - r - 1e-9), 0.0);
    EXPECT_GT(density(p, 1.0 + 0.99 * r), 0.0);
}

TEST(TruncatedMoment, UnitExamples)
{
    const KineticDensityParams p{1.0, 0.0, g};
    EXPECT_NEAR(truncated_moment(p, MomentRequest{0}), 1.0, 1e-14);
    EXPECT_NEAR(truncated_moment(p, MomentRequest{1}), 0.0, 1e-14);
    EXPECT_NEAR(truncated_moment(p, MomentRequest{2}), g / 2.0, 1e-13);
    EXPECT_NEAR(truncated_moment(p, 0, 0.0, inf), 0.5, 1e-15);
    const double expect = std::pow(2.0 * g, 1.5) / (3.0 * std::numbers::pi * g);
    EXPECT_NEAR(truncated_moment(p, 1, 0.0, inf), expect, 1e-14);
    EXPECT_NEAR(expect, 0.93995, 1e-5);
    EXPECT_NEAR(oracle::moment(1.0, 0.0, g, 1, 0.0, inf), expect, 1e-10);
}

TEST(TruncatedMoment, RejectsBadOrder)
{
    EXPECT_THROW(truncated_moment({1.0, 0.0, g}, 3, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(truncated_moment({1.0, 0.0, g}, -1, 0.0, 1.0), std::invalid_argument);
}

TEST(TruncatedMoment, MacroMicroIdentity)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> hd(0.1, 10.0), ud(-5.0, 5.0);
    for (int k = 0; k < 200; ++k) {
        const double h = hd(rng), u = ud(rng);
        const KineticDensityParams p{h, u, g};
        EXPECT_NEAR(full_moment(p, 0), h, 1e-12 * h);
        EXPECT_NEAR(full_moment(p, 1), h * u, 1e-12 * h * std::max(std::abs(u), std::sqrt(g * h)));
        const double m2 = h * u * u + 0.5 * g * h * h;
        EXPECT_NEAR(full_moment(p, 2), m2, 1e-12 * m2);
    }
}

TEST(TruncatedMoment, AgreesWithQuadrature)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> hd(0.1, 5.0), ud(-4.0, 4.0), xd(-12.0, 12.0);
    for (int k = 0; k < 60; ++k) {
        const double h = hd(rng), u = ud(rng);
        double a = xd(rng), b = xd(rng);
        if (a > b) std::swap(a, b);
        for (int m = 0; m <= 2; ++m) {
            const double ref = oracle::moment(h, u, g, m, a, b);
            EXPECT_NEAR(truncated_moment({h, u, g}, m, a, b), ref, 1e-9 * (1.0 + std::abs(ref)));
        }
    }
}

TEST(TruncatedMoment, Additivity)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> hd(0.1, 5.0), ud(-4.0, 4.0), xd(-12.0, 12.0);
    for (int k = 0; k < 200; ++k) {
        const KineticDensityParams p{hd(rng), ud(rng), g};
        double c[3] = {xd(rng), xd(rng), xd(rng)};
        std::sort(c, c + 3);
        for (int m = 0; m <= 2; ++m) {
            const double whole = truncated_moment(p, m, c[0], c[2]);
            const double parts = truncated_moment(p, m, c[0], c[1]) + truncated_moment(p, m, c[1], c[2]);
            const double scale = std::max({std::abs(whole), std::abs(truncated_moment(p, m, c[0], c[1])),
                                           std::abs(truncated_moment(p, m, c[1], c[2])), 1e-300});
            EXPECT_NEAR(whole, parts, 1e-12 * scale);
        }
    }
}

TEST(TruncatedMoment, GalileanShift)
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> hd(0.1, 5.0), ud(-4.0, 4.0), xd(-12.0, 12.0);
    for (int k = 0; k < 200; ++k) {
        const double h = hd(rng), u = ud(rng);
        double a = xd(rng), b = xd(rng);
        if (a > b) std::swap(a, b);
        EXPECT_NEAR(truncated_moment({h, u, g}, 0, a, b), truncated_moment({h, 0.0, g}, 0, a - u, b - u), 1e-12 * h);
    }
}

TEST(TruncatedMoment, DryIsZero)
{
    for (int m = 0; m <= 2; ++m) EXPECT_EQ(truncated_moment({0.0, 1.0, g}, m, -inf, inf), 0.0);
}

TEST(TransmittedMoment, ZeroJumpIsHalfLineMoment)
{
    const KineticDensityParams p{1.3, 0.7, g};
    for (int m = 0; m <= 2; ++m) {
        EXPECT_NEAR(transmitted_moment(p, m, 0.0, Side::positive), truncated_moment(p, m, 0.0, inf), 1e-13);
        EXPECT_NEAR(transmitted_moment(p, m, 0.0, Side::negative), truncated_moment(p, m, -inf, 0.0), 1e-13);
    }
}

TEST(TransmittedMoment, AgainstQuadrature)
{
    for (int m = 0; m <= 2; ++m) {
        const double ref = oracle::transfer(1.0, 0.0, g, m, g, -1);
        EXPECT_NEAR(transmitted_moment({1.0, 0.0, g}, m, g, Side::negative), ref, 1e-9 * (1.0 + std::abs(ref)));
    }
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> hd(0.1, 4.0), ud(-4.0, 4.0), ed(0.0, 60.0);
    for (int k = 0; k < 40; ++k) {
        const double h = hd(rng), u = ud(rng), e = ed(rng);
        for (int m = 0; m <= 2; ++m)
            for (Side s : {Side::negative, Side::positive}) {
                const double ref = oracle::transfer(h, u, g, m, e, s == Side::positive ? 1 : -1);
                EXPECT_NEAR(transmitted_moment({h, u, g}, m, e, s), ref, 1e-9 * (1.0 + std::abs(ref)));
            }
    }
}

TEST(TransmittedMoment, ClimbingAgainstQuadrature)
{
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> hd(0.1, 4.0), ud(-4.0, 4.0), ed(0.0, 60.0);
    for (int k = 0; k < 40; ++k) {
        const double h = hd(rng), u = ud(rng), e = ed(rng);
        for (int m = 0; m <= 2; ++m)
            for (Side s : {Side::negative, Side::positive}) {
                const double ref = oracle::transfer(h, u, g, m, -e, s == Side::positive ? 1 : -1);
                EXPECT_NEAR(climbing_moment({h, u, g}, m, e, s), ref, 1e-9 * (1.0 + std::abs(ref)));
            }
    }
}

TEST(TransmittedMoment, FullReflection)
{
    // Nothing in the support can climb past a rise above max |eta|^2.
    const KineticDensityParams p{1.0, 0.5, g};
    const double top = 0.5 + support_radius(p);
    for (int m = 0; m <= 2; ++m) {
        EXPECT_EQ(climbing_moment(p, m, top * top * 1.01, Side::positive), 0.0);
        EXPECT_EQ(climbing_moment(p, m, 1e6, Side::negative), 0.0);
    }
}

TEST(TransmittedMoment, RejectsNegativeJump)
{
    EXPECT_THROW(transmitted_moment({1.0, 0.0, g}, 1, -1.0, Side::positive), std::invalid_argument);
    EXPECT_THROW(climbing_moment({1.0, 0.0, g}, 1, -1.0, Side::positive), std::invalid_argument);
}
