#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "otto/error.hpp"
#include "otto/protocol.hpp"

using namespace otto;

namespace {
CycleSchedule standard() {
    CycleSchedule s;
    s.tau_I = 5;
    s.tau_d = 5;
    s.tau_R = 5;
    s.delta_omega = 1;
    return s;
}
} // namespace

TEST(Protocol, PeriodAndCorners) {
    auto s = standard();
    EXPECT_DOUBLE_EQ(s.period(), 40.0);
    const auto b = stroke_boundaries(s);
    EXPECT_DOUBLE_EQ(b.t_A, 0.0);
    EXPECT_DOUBLE_EQ(b.t_B, 15.0);
    EXPECT_DOUBLE_EQ(b.t_C, 20.0);
    EXPECT_DOUBLE_EQ(b.t_D, 35.0);
    s.hold_after_expansion = s.half_period_hold();
    EXPECT_DOUBLE_EQ(s.half_period_hold(), std::numbers::pi);
    EXPECT_DOUBLE_EQ(s.period(), 40.0 + std::numbers::pi);
    EXPECT_DOUBLE_EQ(stroke_boundaries(s).t_C, 20.0 + std::numbers::pi);
}

TEST(Protocol, ControlValues) {
    const auto s = standard();
    auto c = controls_at(s, 0.0);
    EXPECT_DOUBLE_EQ(c.omega, 1.5);
    EXPECT_DOUBLE_EQ(c.lambda_h, 0.0);
    EXPECT_DOUBLE_EQ(c.lambda_h_dot, 0.2);
    c = controls_at(s, 2.5);
    EXPECT_DOUBLE_EQ(c.lambda_h, 0.5);
    c = controls_at(s, 7.0);
    EXPECT_DOUBLE_EQ(c.lambda_h, 1.0);
    EXPECT_DOUBLE_EQ(c.lambda_h_dot, 0.0);
    c = controls_at(s, 12.5);
    EXPECT_DOUBLE_EQ(c.lambda_h, 0.5);
    EXPECT_DOUBLE_EQ(c.lambda_h_dot, -0.2);
    c = controls_at(s, 17.5);
    EXPECT_DOUBLE_EQ(c.omega, 1.0);
    EXPECT_DOUBLE_EQ(c.omega_dot, -0.2);
    EXPECT_DOUBLE_EQ(c.lambda_h, 0.0);
    c = controls_at(s, 27.0);
    EXPECT_DOUBLE_EQ(c.omega, 0.5);
    EXPECT_DOUBLE_EQ(c.lambda_c, 1.0);
    c = controls_at(s, 37.5);
    EXPECT_DOUBLE_EQ(c.omega, 1.0);
    EXPECT_DOUBLE_EQ(c.omega_dot, 0.2);
    // periodic
    c = controls_at(s, 40.0 * 3 + 2.5);
    EXPECT_DOUBLE_EQ(c.lambda_h, 0.5);
    EXPECT_EQ(phase_at(s, 41.0), StrokePhase::HotRampUp);
    EXPECT_EQ(phase_at(s, 21.0), StrokePhase::ColdRampUp);
    EXPECT_DOUBLE_EQ(potential_at(s, 2.0, 27.0), 0.5 * 0.25 * 4.0);
}

TEST(Protocol, ContinuityAndDerivatives) {
    for (auto shape : {RampShape::Linear, RampShape::Smoothstep}) {
        auto s = standard();
        s.ramp_shape = shape;
        s.hold_after_expansion = 1.7;
        const auto segs = cycle_segments(s);
        ASSERT_EQ(segs.size(), 9u);
        for (std::size_t k = 0; k < segs.size(); ++k) {
            const auto& a = segs[k];
            const auto& b = segs[(k + 1) % segs.size()];
            const double end = a.start + a.duration;
            const auto ca = controls_in(s, a, end);
            const auto cb = controls_in(s, b, k + 1 == segs.size() ? 0.0 : end);
            EXPECT_NEAR(ca.omega, cb.omega, 1e-12);
            EXPECT_NEAR(ca.lambda_c, cb.lambda_c, 1e-12);
            EXPECT_NEAR(ca.lambda_h, cb.lambda_h, 1e-12);
            // derivatives by central differences inside the segment
            const double t = a.start + 0.37 * a.duration, e = 1e-6;
            const auto lo = controls_in(s, a, t - e), hi = controls_in(s, a, t + e), mid = controls_in(s, a, t);
            EXPECT_NEAR(mid.omega_dot, (hi.omega - lo.omega) / (2 * e), 1e-7);
            EXPECT_NEAR(mid.lambda_c_dot, (hi.lambda_c - lo.lambda_c) / (2 * e), 1e-7);
            EXPECT_NEAR(mid.lambda_h_dot, (hi.lambda_h - lo.lambda_h) / (2 * e), 1e-7);
            EXPECT_GE(mid.lambda_c, 0.0);
            EXPECT_LE(mid.lambda_h, 1.0);
            EXPECT_EQ(mid.lambda_c * mid.lambda_h, 0.0);
        }
        EXPECT_EQ(segs[4].phase, StrokePhase::HoldAfterExpansion);
        EXPECT_DOUBLE_EQ(controls_in(s, segs[4], segs[4].start + 0.5).omega, 0.5);
    }
}

TEST(Protocol, TimeGrid) {
    auto s = standard();
    s.hold_after_expansion = s.half_period_hold();
    const auto g = make_time_grid(s, 0.013);
    double t = 0.0;
    for (const auto& st : g.steps) {
        EXPECT_NEAR(st.t, t, 1e-9);
        t += st.h;
    }
    EXPECT_NEAR(t, s.period(), 1e-9);
    EXPECT_LE(g.max_step(), 0.013 + 1e-12);
    const auto b = stroke_boundaries(s);
    EXPECT_EQ(g.corner_steps[0], 0u);
    EXPECT_NEAR(g.steps[g.corner_steps[1]].t, b.t_B, 1e-9);
    EXPECT_NEAR(g.steps[g.corner_steps[2]].t, b.t_C, 1e-9);
    EXPECT_NEAR(g.steps[g.corner_steps[3]].t, b.t_D, 1e-9);
    EXPECT_EQ(make_time_grid(standard(), 0.005).size(), 8000u);
}

TEST(Protocol, Validation) {
    auto s = standard();
    s.delta_omega = 2.0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = standard();
    s.tau_I = 0;
    EXPECT_THROW(s.validate(), ConfigError);
    s = standard();
    s.kappa = -1;
    EXPECT_THROW(s.validate(), ConfigError);
    EXPECT_THROW(make_time_grid(standard(), 0.0), ConfigError);
    EXPECT_EQ(ramp_shape_from_string("smoothstep"), RampShape::Smoothstep);
    EXPECT_THROW(ramp_shape_from_string("cubic"), ConfigError);
}
