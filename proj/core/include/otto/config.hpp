// config.hpp: run configuration: INI-style sections of key = value pairs
//
// Sections: [run] [schedule] [cold] [hot] [grid] [relax] [sweep].
// '#' and ';' start comments.  Every physical quantity is in omega_0 units.
// See configs/*.ini and the README for the full schema.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "otto/grid_propagator.hpp"
#include "otto/protocol.hpp"
#include "otto/reservoir.hpp"

namespace otto {

enum class PropagatorKind { Gaussian, Grid };
enum class InitialState { ThermalCold, ThermalHot, Ground };
enum class RunMode { Engine, Relax };

std::string_view to_string(PropagatorKind p);
std::string_view to_string(InitialState s);
std::string_view to_string(RunMode m);
PropagatorKind propagator_from_string(std::string_view s);

// Single-bath relaxation at fixed frequency with lambda = 1 throughout.
struct RelaxSpec {
    Bath bath{Bath::Cold};
    double omega{1.0};
    double duration{200.0};
    double average_from{100.0};  // start of the time-averaging window
};

// One or two swept parameters.  Recognized names:
//   gamma (both baths), gamma_c, gamma_h, beta_c, beta_h, tau_I, tau_d, tau_R,
//   delta_omega, kappa, hold, period_scaled (tau_I = T/6, tau_d = tau_R = T/12).
struct SweepSpec {
    std::string parameter;
    std::vector<double> values;
    std::string parameter2;
    std::vector<double> values2;
    bool active() const { return !parameter.empty(); }
};

struct RunConfig {
    CycleSchedule schedule;
    ReservoirSpec cold{3.0, 0.05, 30.0, Bath::Cold};
    ReservoirSpec hot{0.25, 0.05, 30.0, Bath::Hot};
    PropagatorKind propagator{PropagatorKind::Gaussian};
    RunMode mode{RunMode::Engine};
    InitialState initial{InitialState::ThermalCold};
    std::size_t n_samples{500};
    std::size_t max_cycles{8};
    double dt{0.005};
    double pss_tol{1e-2};
    std::uint64_t seed{1};
    std::size_t threads{1};
    double sample_interval{0.5};   // spacing of stored moment samples
    double abort_limit{0.01};      // max fraction of aborted trajectories
    GridSpec grid;
    RelaxSpec relax;
    SweepSpec sweep;
    std::string out_dir{"out"};
    std::string name{"run"};

    // Throws ConfigError on any inconsistency (kappa != 0 with the Gaussian
    // propagator, n_samples < 2, dt not resolving omega_cut, ...).
    void validate() const;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Canonical key = value listing of every field, fixed order, %.17g numbers.
std::string canonical(const RunConfig& c);
// FNV-1a 64 of canonical(c), as 16 hex digits.
std::string config_hash(const RunConfig& c);

// Apply one named parameter value (sweep semantics) to a copy of c.
RunConfig with_parameter(const RunConfig& c, std::string_view name, double value);

} // namespace otto
