#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "kgflow/current.hpp"
#include "oracles.hpp"

using namespace kgflow;

TEST(Current, NarrowPacketFollowsMomentumDirection)
{
    const auto s = make_gaussian_packet(1.0, 3.0, 0.05, 0.0);
    const FourVector j = current(s, {0.0, 0.0});
    EXPECT_GT(j.v0, 0.0);
    EXPECT_NEAR(j.v1 / j.v0, 3.0 / std::sqrt(10.0), 0.01 * 3.0 / std::sqrt(10.0));
}

TEST(Current, RestPacketHasNoFluxAtOrigin)
{
    const FourVector j = current(fixtures::rest_state(), {0.0, 0.0});
    EXPECT_NEAR(j.v1, 0.0, 1e-10);
    EXPECT_GT(j.v0, 0.0);
}

TEST(Current, SinglePacketsArePositiveOnAScan)
{
    for (double pc : {0.0, 1.0, -2.0}) {
        const auto s = make_gaussian_packet(1.0, pc, 0.15, 0.5);
        for (int i = 0; i <= 200; ++i) {
            const double x = -20.0 + 0.2 * i;
            EXPECT_GT(density(s, {0.0, x}), 0.0) << "p_center " << pc << " x " << x;
        }
    }
}

TEST(Current, DensityIsTheZerothComponent)
{
    const auto s = fixtures::s1_state();
    for (double x : {-3.0, 0.0, 2.5}) EXPECT_EQ(density(s, {0.3, x}), current(s, {0.3, x}).v0);
}

TEST(Current, ImaginaryResidueVanishes)
{
    const auto s = fixtures::s1_state();
    for (double x : {-6.0, -1.0, 0.0, 0.7, 4.0}) {
        const ComplexCurrent c = current_complex(s, {0.5, x});
        const double scale = std::hypot(std::abs(c.c0), std::abs(c.c1));
        EXPECT_LT(std::abs(c.c0.imag()), 1e-12 * scale);
        EXPECT_LT(std::abs(c.c1.imag()), 1e-12 * scale);
    }
}

TEST(Current, SpatialIntegralOfDensityIsOneOverMass)
{
    for (double m : {1.0, 2.0}) {
        const auto s = make_gaussian_packet(m, 0.5, 0.25, 0.0);
        const double integral = oracle::simpson([&](double x) { return density(s, {0.0, x}); }, -30.0, 30.0, 2400);
        EXPECT_NEAR(m * integral, 1.0, 1e-4) << "mass " << m;
    }
    const auto s1 = fixtures::s1_state();
    EXPECT_NEAR(oracle::simpson([&](double x) { return density(s1, {0.0, x}); }, -40.0, 40.0, 4000), 1.0, 1e-4);
}

// Witness frozen from the two-plane-wave oracle evaluated at the packet centre.
TEST(Current, S1DensityMinimumMatchesTwoWaveOracle)
{
    const double A = oracle::narrow_packet_peak(std::sqrt(10.0), 0.15) / std::sqrt(3.25);
    const double B = 1.5 * oracle::narrow_packet_peak(1.0, 0.15) / std::sqrt(3.25);
    const double expected = oracle::two_wave_min_density(std::sqrt(10.0), A, 1.0, B, 1.0);
    EXPECT_NEAR(expected, -0.009607, 5e-6);

    const auto found = scan_negative_density(fixtures::s1_state(), 0.0, -5.0, 5.0, 2001);
    ASSERT_FALSE(found.empty());
    double lowest = 0.0;
    for (const auto& iv : found) lowest = std::min(lowest, iv.min_j0);
    EXPECT_LT(lowest, 0.0);
    EXPECT_NEAR(lowest, expected, 0.15 * std::abs(expected));
}

TEST(ScanNegativeDensity, SinglePacketsGiveNothing)
{
    EXPECT_TRUE(scan_negative_density(fixtures::rest_state(), 0.0, -20.0, 20.0, 801).empty());
    const auto sc = fixtures::scenario("single_boosted");
    const auto boosted = sc.initial_state();
    for (double t : {sc.box.t_lo, 0.0, sc.box.t_hi})
        EXPECT_TRUE(scan_negative_density(boosted, t, sc.box.x_lo, sc.box.x_hi, 1601).empty()) << "t " << t;
}

// A lone packet is not positive everywhere: far from the peak the density dips
// below zero, at a level many orders under the peak.
TEST(ScanNegativeDensity, SinglePacketTailsDipFarFromThePeak)
{
    const auto s = make_gaussian_packet(1.0, 1.0, 0.25, 0.0);
    const double peak = density(s, {0.0, 0.0});
    EXPECT_TRUE(scan_negative_density(s, 0.0, -12.0, 12.0, 1201).empty());
    const auto far = scan_negative_density(s, 0.0, -30.0, 30.0, 3001);
    ASSERT_FALSE(far.empty());
    for (const auto& iv : far) {
        EXPECT_GT(std::min(std::abs(iv.x_lo), std::abs(iv.x_hi)), 12.0);
        EXPECT_GT(iv.min_j0, -1e-12 * peak);
    }
}

TEST(ScanNegativeDensity, IntervalsAreDisjointAndNegative)
{
    const auto found = scan_negative_density(fixtures::s1_state(), 0.0, -10.0, 10.0, 4001);
    ASSERT_GT(found.size(), 1u);
    for (std::size_t i = 0; i < found.size(); ++i) {
        EXPECT_LT(found[i].x_lo, found[i].x_hi);
        EXPECT_LT(found[i].min_j0, 0.0);
        if (i) {
            EXPECT_LE(found[i - 1].x_hi, found[i].x_lo);
        }
    }
}

TEST(ScanNegativeDensity, RejectsBadGrids)
{
    const auto s = fixtures::rest_state();
    EXPECT_THROW(scan_negative_density(s, 0.0, -1.0, 1.0, 1), ArgumentError);
    EXPECT_THROW(scan_negative_density(s, 0.0, 1.0, -1.0, 10), ArgumentError);
}

TEST(Continuity, NarrowPacketResidualIsTiny)
{
    const auto s = make_gaussian_packet(1.0, 1.0, 0.01, 0.0, GridSpec::around(1.0, 0.01));
    for (double x : {-1.0, 0.0, 1.0}) EXPECT_LT(std::abs(continuity_residual(s, {0.0, x}, 1e-3)), 1e-8);
}

TEST(Continuity, ResidualIsSecondOrderInTheStep)
{
    const auto s = fixtures::s1_state();
    const Event e{0.2, 0.9};
    const double r1 = std::abs(continuity_residual(s, e, 2e-3));
    const double r2 = std::abs(continuity_residual(s, e, 1e-3));
    EXPECT_NEAR(r1 / r2, 4.0, 0.2);
    EXPECT_THROW(continuity_residual(s, e, 0.0), ArgumentError);
}

TEST(Classify, Examples)
{
    EXPECT_EQ(classify({1.0, 0.0}), CausalClass::TimelikeForward);
    EXPECT_EQ(classify({-1.0, 0.0}), CausalClass::TimelikeBackward);
    EXPECT_EQ(classify({0.5, 1.0}), CausalClass::Spacelike);
    EXPECT_EQ(classify({1.0, 1.0}), CausalClass::Lightlike);
    EXPECT_EQ(classify({0.0, 0.0}), CausalClass::NullVector);
    EXPECT_EQ(classify({0.0, 1e-3}, 1e-2), CausalClass::NullVector);
    EXPECT_THROW(classify({1.0, 0.0}, -1.0), ArgumentError);
    EXPECT_EQ(to_string(CausalClass::TimelikeBackward), "timelike-backward");
}

TEST(Boost, ZeroVelocityIsIdentity)
{
    const FourVector v{1.3, -0.4};
    const FourVector b = boost(v, 0.0);
    EXPECT_EQ(b.v0, v.v0);
    EXPECT_EQ(b.v1, v.v1);
}

TEST(Boost, PreservesMinkowskiSquare)
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> comp(-3.0, 3.0), vel(-0.99, 0.99);
    for (int i = 0; i < 200; ++i) {
        const FourVector v{comp(rng), comp(rng)};
        const double u = i == 0 ? 0.9 : vel(rng);
        const double before = v.minkowski_square();
        const double after = boost(v, u).minkowski_square();
        EXPECT_LE(std::abs(after - before), 1e-12 * (v.v0 * v.v0 + v.v1 * v.v1)) << "velocity " << u;
    }
}

TEST(Boost, RestFrameOfForwardCurrent)
{
    const FourVector j{2.0, 1.2};
    const FourVector r = boost(j, j.v1 / j.v0);
    EXPECT_NEAR(r.v0, std::sqrt(j.minkowski_square()), 1e-10);
    EXPECT_NEAR(r.v1, 0.0, 1e-10);
    EXPECT_THROW(boost(j, 1.0), ArgumentError);
    EXPECT_THROW(boost(j, -1.5), ArgumentError);
}

TEST(RestDensity, Examples)
{
    EXPECT_DOUBLE_EQ(rest_density({2.0, 0.0}), 2.0);
    EXPECT_DOUBLE_EQ(rest_density({-2.0, 0.0}), 2.0);
    EXPECT_THROW(rest_density({0.5, 1.0}), DomainError);
    EXPECT_THROW(rest_density({1.0, 1.0}), DomainError);
}
