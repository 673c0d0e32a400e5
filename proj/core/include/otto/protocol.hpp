// protocol.hpp: four-stroke Otto cycle as piecewise control functions
//
// Cycle origin t = 0 is point A: start of the hot coupling ramp at
// omega_h = omega_0 + delta_omega/2.
//
//   A -> B   hot isochore    (ramp up tau_I, hold tau_R, ramp down tau_I)
//   B -> C   expansion       (omega_h -> omega_c over tau_d) [+ optional hold]
//   C -> D   cold isochore   at omega_c = omega_0 - delta_omega/2
//   D -> A   compression     (omega_c -> omega_h over tau_d)

#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace otto {

enum class RampShape { Linear, Smoothstep };

enum class StrokePhase {
    HotRampUp,
    HotHold,
    HotRampDown,
    Expansion,
    HoldAfterExpansion,
    ColdRampUp,
    ColdHold,
    ColdRampDown,
    Compression,
};

std::string_view to_string(StrokePhase p);
std::string_view to_string(RampShape s);
RampShape ramp_shape_from_string(std::string_view s);

struct CycleSchedule {
    double tau_I{5.0};
    double tau_d{5.0};
    double tau_R{5.0};
    double delta_omega{1.0};
    double kappa{0.0};
    double hold_after_expansion{0.0};
    RampShape ramp_shape{RampShape::Linear};

    static constexpr double omega0 = 1.0;

    double omega_hot() const { return omega0 + 0.5 * delta_omega; }
    double omega_cold() const { return omega0 - 0.5 * delta_omega; }
    double period() const { return 4.0 * tau_I + 2.0 * tau_d + 2.0 * tau_R + hold_after_expansion; }

    // Half a period of the second moments at the post-expansion frequency,
    // pi/(2 omega_c): the hold that reverses <qp+pq>.
    double half_period_hold() const;

    // Throws ConfigError on non-positive durations, delta_omega outside
    // (0, 2 omega_0) or negative kappa/hold.
    void validate() const;
};

struct Controls {
    double omega{1.0};
    double omega_dot{0.0};
    double lambda_c{0.0};
    double lambda_c_dot{0.0};
    double lambda_h{0.0};
    double lambda_h_dot{0.0};
};

struct StrokeBoundaries {
    double t_A{0.0};
    double t_B{0.0};
    double t_C{0.0};
    double t_D{0.0};
    double period{0.0};
};

struct Segment {
    StrokePhase phase;
    double start;
    double duration;
};

StrokeBoundaries stroke_boundaries(const CycleSchedule& s);

// Segments of one cycle in time order; zero-length segments are omitted.
std::vector<Segment> cycle_segments(const CycleSchedule& s);

// Controls at absolute time t >= 0 (reduced modulo the period).  At a segment
// boundary the value of the segment starting there is returned.
Controls controls_at(const CycleSchedule& s, double t);

// Controls evaluated with the formulas of one segment at cycle-relative time t.
// Used to take one-sided limits at ramp corners.
Controls controls_in(const CycleSchedule& s, const Segment& seg, double t);

StrokePhase phase_at(const CycleSchedule& s, double t);

// V(q,t) = omega(t)^2 q^2 / 2 + kappa q^4 / 4.
double potential_at(const CycleSchedule& s, double q, double t);

// One cycle discretized so that every segment boundary is a grid point.
// Each segment of length d is split into ceil(d/dt) equal steps.
struct TimeGrid {
    struct Step {
        double t;           // cycle-relative start time
        double h;           // step length
        std::size_t segment;
    };
    std::vector<Segment> segments;
    std::vector<Step> steps;
    double period{0.0};
    // Step indices at which the corners A, B, C, D begin (A = 0).
    std::array<std::size_t, 4> corner_steps{};

    std::size_t size() const { return steps.size(); }
    double max_step() const;
};

TimeGrid make_time_grid(const CycleSchedule& s, double dt);

} // namespace otto
