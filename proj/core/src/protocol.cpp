#include "otto/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "otto/error.hpp"

namespace otto {

std::string_view to_string(StrokePhase p) {
    switch (p) {
        case StrokePhase::HotRampUp: return "hot_ramp_up";
        case StrokePhase::HotHold: return "hot_hold";
        case StrokePhase::HotRampDown: return "hot_ramp_down";
        case StrokePhase::Expansion: return "expansion";
        case StrokePhase::HoldAfterExpansion: return "hold_after_expansion";
        case StrokePhase::ColdRampUp: return "cold_ramp_up";
        case StrokePhase::ColdHold: return "cold_hold";
        case StrokePhase::ColdRampDown: return "cold_ramp_down";
        case StrokePhase::Compression: return "compression";
    }
    return "?";
}

std::string_view to_string(RampShape s) { return s == RampShape::Linear ? "linear" : "smoothstep"; }

RampShape ramp_shape_from_string(std::string_view s) {
    if (s == "linear") return RampShape::Linear;
    if (s == "smoothstep") return RampShape::Smoothstep;
    throw ConfigError("unknown ramp shape '" + std::string(s) + "'");
}

double CycleSchedule::half_period_hold() const { return 0.5 * std::numbers::pi / omega_cold(); }

void CycleSchedule::validate() const {
    if (!(tau_I > 0.0)) throw ConfigError("schedule: tau_I must be > 0");
    if (!(tau_d > 0.0)) throw ConfigError("schedule: tau_d must be > 0");
    if (!(tau_R >= 0.0)) throw ConfigError("schedule: tau_R must be >= 0");
    if (!(delta_omega > 0.0 && delta_omega < 2.0 * omega0))
        throw ConfigError("schedule: delta_omega must lie in (0, 2 omega_0)");
    if (!(kappa >= 0.0)) throw ConfigError("schedule: kappa must be >= 0");
    if (!(hold_after_expansion >= 0.0)) throw ConfigError("schedule: hold must be >= 0");
}

StrokeBoundaries stroke_boundaries(const CycleSchedule& s) {
    StrokeBoundaries b;
    b.t_A = 0.0;
    b.t_B = 2.0 * s.tau_I + s.tau_R;
    b.t_C = b.t_B + s.tau_d + s.hold_after_expansion;
    b.t_D = b.t_C + 2.0 * s.tau_I + s.tau_R;
    b.period = b.t_D + s.tau_d;
    return b;
}

std::vector<Segment> cycle_segments(const CycleSchedule& s) {
    const std::array<std::pair<StrokePhase, double>, 9> parts{{
        {StrokePhase::HotRampUp, s.tau_I},
        {StrokePhase::HotHold, s.tau_R},
        {StrokePhase::HotRampDown, s.tau_I},
        {StrokePhase::Expansion, s.tau_d},
        {StrokePhase::HoldAfterExpansion, s.hold_after_expansion},
        {StrokePhase::ColdRampUp, s.tau_I},
        {StrokePhase::ColdHold, s.tau_R},
        {StrokePhase::ColdRampDown, s.tau_I},
        {StrokePhase::Compression, s.tau_d},
    }};
    std::vector<Segment> out;
    double t = 0.0;
    for (const auto& [phase, d] : parts) {
        if (d > 0.0) out.push_back({phase, t, d});
        t += d;
    }
    return out;
}

namespace {

// Ramp value and derivative with respect to the normalized coordinate x in [0,1].
std::pair<double, double> ramp(RampShape shape, double x) {
    x = std::clamp(x, 0.0, 1.0);
    if (shape == RampShape::Linear) return {x, 1.0};
    return {x * x * (3.0 - 2.0 * x), 6.0 * x * (1.0 - x)};
}

double reduce(const CycleSchedule& s, double t) {
    const double T = s.period();
    double r = std::fmod(t, T);
    if (r < 0.0) r += T;
    return r;
}

const Segment& find_segment(const std::vector<Segment>& segs, double t) {
    for (std::size_t i = segs.size(); i-- > 0;) {
        if (t >= segs[i].start) return segs[i];
    }
    return segs.front();
}

} // namespace

Controls controls_in(const CycleSchedule& s, const Segment& seg, double t) {
    Controls c;
    const double x = (t - seg.start) / seg.duration;
    const double wh = s.omega_hot();
    const double wc = s.omega_cold();
    switch (seg.phase) {
        case StrokePhase::HotRampUp: {
            auto [v, dv] = ramp(s.ramp_shape, x);
            c.omega = wh;
            c.lambda_h = v;
            c.lambda_h_dot = dv / seg.duration;
            break;
        }
        case StrokePhase::HotHold:
            c.omega = wh;
            c.lambda_h = 1.0;
            break;
        case StrokePhase::HotRampDown: {
            auto [v, dv] = ramp(s.ramp_shape, x);
            c.omega = wh;
            c.lambda_h = 1.0 - v;
            c.lambda_h_dot = -dv / seg.duration;
            break;
        }
        case StrokePhase::Expansion: {
            auto [v, dv] = ramp(s.ramp_shape, x);
            c.omega = wh - s.delta_omega * v;
            c.omega_dot = -s.delta_omega * dv / seg.duration;
            break;
        }
        case StrokePhase::HoldAfterExpansion:
            c.omega = wc;
            break;
        case StrokePhase::ColdRampUp: {
            auto [v, dv] = ramp(s.ramp_shape, x);
            c.omega = wc;
            c.lambda_c = v;
            c.lambda_c_dot = dv / seg.duration;
            break;
        }
        case StrokePhase::ColdHold:
            c.omega = wc;
            c.lambda_c = 1.0;
            break;
        case StrokePhase::ColdRampDown: {
            auto [v, dv] = ramp(s.ramp_shape, x);
            c.omega = wc;
            c.lambda_c = 1.0 - v;
            c.lambda_c_dot = -dv / seg.duration;
            break;
        }
        case StrokePhase::Compression: {
            auto [v, dv] = ramp(s.ramp_shape, x);
            c.omega = wc + s.delta_omega * v;
            c.omega_dot = s.delta_omega * dv / seg.duration;
            break;
        }
    }
    return c;
}

Controls controls_at(const CycleSchedule& s, double t) {
    const auto segs = cycle_segments(s);
    const double r = reduce(s, t);
    return controls_in(s, find_segment(segs, r), r);
}

StrokePhase phase_at(const CycleSchedule& s, double t) {
    const auto segs = cycle_segments(s);
    return find_segment(segs, reduce(s, t)).phase;
}

double potential_at(const CycleSchedule& s, double q, double t) {
    const double w = controls_at(s, t).omega;
    const double q2 = q * q;
    return 0.5 * w * w * q2 + 0.25 * s.kappa * q2 * q2;
}

double TimeGrid::max_step() const {
    double m = 0.0;
    for (const auto& st : steps) m = std::max(m, st.h);
    return m;
}

TimeGrid make_time_grid(const CycleSchedule& s, double dt) {
    s.validate();
    if (!(dt > 0.0)) throw ConfigError("time grid: dt must be > 0");
    TimeGrid g;
    g.segments = cycle_segments(s);
    g.period = s.period();
    for (std::size_t k = 0; k < g.segments.size(); ++k) {
        const auto& seg = g.segments[k];
        switch (seg.phase) {
            case StrokePhase::HotRampUp: g.corner_steps[0] = g.steps.size(); break;
            case StrokePhase::Expansion: g.corner_steps[1] = g.steps.size(); break;
            case StrokePhase::ColdRampUp: g.corner_steps[2] = g.steps.size(); break;
            case StrokePhase::Compression: g.corner_steps[3] = g.steps.size(); break;
            default: break;
        }
        const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(seg.duration / dt - 1e-9)));
        const double h = seg.duration / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
            g.steps.push_back({seg.start + static_cast<double>(i) * h, h, k});
    }
    return g;
}

} // namespace otto
