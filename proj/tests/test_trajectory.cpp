#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fixtures.hpp"
#include "kgflow/trajectory.hpp"

using namespace kgflow;

namespace {

const TraceBox s1_box{-4.0, 4.0, -20.0, 20.0};

FourVector constant_field(Event) { return {1.0, 0.0}; }

// Rotation about the origin: circles of circumference 2 pi r.
FourVector circular_field(Event e) { return {-e.x, e.t}; }

Event deepest_negative_point(const SpectralState& s)
{
    const auto found = scan_negative_density(s, 0.0, -5.0, 5.0, 2001);
    DensityInterval best = found.front();
    for (const auto& iv : found)
        if (iv.min_j0 < best.min_j0) best = iv;
    return {0.0, 0.5 * (best.x_lo + best.x_hi)};
}

double sum_of_fractions(const SegmentStats& st)
{
    return st.fraction_forward + st.fraction_backward + st.fraction_spacelike + st.fraction_lightlike;
}

} // namespace

TEST(Trace, ConstantFieldGivesAVerticalLine)
{
    const TraceBox box{0.0, 10.0, -1.0, 1.0};
    const Trajectory tr = trace(constant_field, {0.0, 0.25}, 0.1, 50, box);
    ASSERT_EQ(tr.events.size(), 51u);
    EXPECT_EQ(tr.stop, StopReason::MaxSteps);
    for (std::size_t i = 0; i < tr.events.size(); ++i) {
        EXPECT_DOUBLE_EQ(tr.events[i].x, 0.25);
        EXPECT_NEAR(tr.arc[i], tr.events[i].t, 1e-12);
    }
    const SegmentStats st = segment_stats(tr);
    EXPECT_DOUBLE_EQ(st.fraction_forward, 1.0);
    EXPECT_TRUE(tr.reversals.empty());
    EXPECT_FALSE(detect_closed(tr, 0.05).has_value());
}

TEST(Trace, StopsAtTheBoxEdge)
{
    const TraceBox box{0.0, 1.0, -1.0, 1.0};
    const Trajectory tr = trace(constant_field, {0.0, 0.0}, 0.3, 100, box);
    EXPECT_EQ(tr.stop, StopReason::BoxExit);
    EXPECT_EQ(tr.events.size(), 4u);
    for (const Event& e : tr.events) EXPECT_TRUE(box.contains(e));
    EXPECT_FALSE(detect_closed(tr, 0.05).has_value());
}

TEST(Trace, PlaneWaveLimitSlope)
{
    const double pc = 1.0;
    const auto s = make_gaussian_packet(1.0, pc, 0.02, 0.0);
    const TraceBox box{0.0, 5.0, -10.0, 10.0};
    const Trajectory tr = trace([&](Event e) { return current(s, e); }, {0.0, 0.0}, 0.05, 1000, box);
    EXPECT_EQ(tr.stop, StopReason::BoxExit);
    const Event a = tr.events.front(), b = tr.events.back();
    const double expected = pc / std::sqrt(pc * pc + 1.0);
    EXPECT_NEAR((b.x - a.x) / (b.t - a.t), expected, 0.01 * expected);
}

TEST(Trace, RungeKuttaIsFourthOrder)
{
    const auto sc = fixtures::scenario("single_boosted");
    const auto s = sc.initial_state();
    const auto field = [&](Event e) { return current(s, e); };
    std::vector<Event> finals;
    for (double h : {1.6, 0.8, 0.4, 0.2}) {
        const Trajectory tr = trace(field, {-4.0, 2.0}, h, static_cast<int>(std::lround(8.0 / h)), sc.box);
        ASSERT_EQ(tr.stop, StopReason::MaxSteps);
        finals.push_back(tr.events.back());
    }
    const auto shift = [&](std::size_t i) {
        return std::hypot(finals[i].t - finals[i + 1].t, finals[i].x - finals[i + 1].x);
    };
    EXPECT_NEAR(shift(0) / shift(1), 16.0, 4.0);
    EXPECT_NEAR(shift(1) / shift(2), 16.0, 4.0);
}

TEST(Trace, S1NegativeDensitySeedReversesInTime)
{
    const auto s = fixtures::s1_state();
    const auto field = [&](Event e) { return current(s, e); };
    const Event seed = deepest_negative_point(s);
    ASSERT_LT(field(seed).v0, 0.0);
    const Trajectory tr = trace(field, seed, 0.005, 4000, s1_box);
    ASSERT_GE(tr.reversals.size(), 1u);
    for (std::size_t r : tr.reversals) {
        const double a = field(tr.events[r]).v0, b = field(tr.events[r + 1]).v0;
        EXPECT_LT(a * b, 0.0) << "reversal at step " << r;
    }
    // Reversals are exactly the sign-changing steps.
    std::size_t sign_changes = 0;
    for (std::size_t i = 0; i + 1 < tr.events.size(); ++i)
        if (field(tr.events[i]).v0 * field(tr.events[i + 1]).v0 < 0.0) ++sign_changes;
    EXPECT_EQ(sign_changes, tr.reversals.size());
    EXPECT_GT(segment_stats(tr).fraction_spacelike, 0.0);
}

TEST(Trace, BackwardStepsHaveNegativeDensityAtBothEnds)
{
    const auto s = fixtures::s1_state();
    const auto field = [&](Event e) { return current(s, e); };
    const Trajectory tr = trace(field, {-3.0, -9.52}, 0.005, 3000, s1_box);
    const SegmentStats st = segment_stats(tr);
    EXPECT_GT(st.fraction_backward, 0.0);
    EXPECT_GT(st.fraction_spacelike, 0.0);
    EXPECT_NEAR(sum_of_fractions(st), 1.0, 1e-9);
    for (std::size_t i = 0; i < tr.classes.size(); ++i)
        if (tr.classes[i] == CausalClass::TimelikeBackward) {
            EXPECT_LT(field(tr.events[i]).v0, 0.0);
            EXPECT_LT(field(tr.events[i + 1]).v0, 0.0);
        }
}

TEST(Trace, TangentStaysContinuousThroughReversals)
{
    const auto s = fixtures::s1_state();
    const auto field = [&](Event e) { return current(s, e); };
    const Trajectory tr = trace(field, deepest_negative_point(s), 0.002, 5000, s1_box);
    ASSERT_GE(tr.reversals.size(), 1u);
    for (std::size_t i = 1; i + 1 < tr.events.size(); ++i) {
        const double at = tr.events[i].t - tr.events[i - 1].t, ax = tr.events[i].x - tr.events[i - 1].x;
        const double bt = tr.events[i + 1].t - tr.events[i].t, bx = tr.events[i + 1].x - tr.events[i].x;
        const double cosine = (at * bt + ax * bx) / (std::hypot(at, ax) * std::hypot(bt, bx));
        EXPECT_GT(cosine, std::cos(30.0 * std::numbers::pi / 180.0)) << "step " << i;
    }
}

TEST(Trace, StepsStayWithinTwiceTheStep)
{
    const auto s = fixtures::s1_state();
    const Trajectory tr = trace([&](Event e) { return current(s, e); }, {0.0, 1.0}, 0.01, 500, s1_box);
    for (std::size_t i = 1; i < tr.events.size(); ++i) {
        EXPECT_LE(std::hypot(tr.events[i].t - tr.events[i - 1].t, tr.events[i].x - tr.events[i - 1].x), 0.02);
        EXPECT_GT(tr.arc[i], tr.arc[i - 1]);
    }
}

TEST(Trace, Errors)
{
    const TraceBox box{0.0, 1.0, -1.0, 1.0};
    EXPECT_THROW(trace(constant_field, {2.0, 0.0}, 0.1, 10, box), ArgumentError);
    EXPECT_THROW(trace(constant_field, {0.5, 0.0}, 0.0, 10, box), ArgumentError);
    EXPECT_THROW(trace(constant_field, {0.5, 0.0}, 0.1, 0, box), ArgumentError);
    const auto zero = [](Event) { return FourVector{0.0, 0.0}; };
    EXPECT_THROW(trace(zero, {0.5, 0.0}, 0.1, 10, box, 1e-12), NodeError);
}

TEST(Trace, StopsAtANode)
{
    // Field vanishing on the line t = 1.
    const auto sink = [](Event e) { return FourVector{1.0 - e.t, 0.0}; };
    const TraceBox box{0.0, 2.0, -1.0, 1.0};
    const Trajectory tr = trace(sink, {0.0, 0.0}, 0.25, 100, box, 1e-3);
    EXPECT_EQ(tr.stop, StopReason::Node);
    EXPECT_LT(tr.events.back().t, 1.0);
}

TEST(SegmentStats, NeedsAStep)
{
    Trajectory tr;
    tr.events.push_back({0.0, 0.0});
    tr.arc.push_back(0.0);
    EXPECT_THROW(segment_stats(tr), ArgumentError);
}

TEST(DetectClosed, CircularFieldClosesAfterOneCircumference)
{
    const double r = 1.0, h = 0.01;
    const TraceBox box{-2.0, 2.0, -2.0, 2.0};
    const Trajectory tr = trace(circular_field, {r, 0.0}, h, 1500, box);
    const auto idx = detect_closed(tr, 0.02);
    ASSERT_TRUE(idx.has_value());
    const double expected = 2.0 * std::numbers::pi * r / h;
    EXPECT_NEAR(static_cast<double>(*idx), expected, 3.0);
}
