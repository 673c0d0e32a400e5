// ensemble.hpp: trajectory ensembles, sweeps and self-checks
//
// Every trajectory draws its two noise streams from seeds derived from
// (run seed, trajectory index, bath).  Workers pull trajectory indices from
// a shared counter and store results by index; all reductions run over the
// index order afterwards, so results do not depend on the thread count.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "otto/analysis.hpp"
#include "otto/config.hpp"
#include "otto/noise.hpp"
#include "otto/thermodynamics.hpp"

namespace otto {

// One stored ensemble sample: mean and standard error of the five moments.
struct MomentSample {
    double t{0.0};
    std::size_t cycle{0};  // 1-based; 0 in relax mode
    std::array<Estimate, 5> m{};  // q, p, q2, p2, qp

    Moments mean() const { return {m[0].mean, m[1].mean, m[2].mean, m[3].mean, m[4].mean}; }
};

struct RunResult {
    std::string config_hash;
    std::uint64_t seed{0};
    RunMode mode{RunMode::Engine};
    EngineReport report;            // engine mode
    PssResult pss;                  // engine mode
    std::vector<MomentSample> series;
    std::size_t completed{0};
    std::size_t aborted{0};
    std::vector<std::string> abort_reasons;
    double wall_seconds{0.0};
    double trajectory_seconds{0.0};  // mean per trajectory

    // relax mode: per-trajectory time averages over the window
    Estimate relax_q2, relax_p2, relax_heat_current;
};

// Progress callback: (finished trajectories, total).
using Progress = std::function<void(std::size_t, std::size_t)>;

// Throws ConfigError on invalid configs and RunError when more than
// abort_limit of the trajectories abort.  A run that does not reach the PSS
// within max_cycles returns normally with report.converged == false.
RunResult run(const RunConfig& cfg, const Progress& progress = {});

struct SweepPoint {
    double value{0.0};
    double value2{0.0};
    std::uint64_t seed{0};
    bool ok{false};
    std::string error;
    RunResult result;
};

struct SweepResult {
    std::string config_hash;
    std::vector<SweepPoint> points;  // row-major over (values, values2)
    std::optional<PhaseDiagram> phase_diagram;  // gamma x tau_I sweeps
};

// Points get seeds derive_seed(cfg.seed, point index, 0) unless
// common_noise is true, in which case every point reuses cfg.seed.
SweepResult sweep(const RunConfig& cfg, bool common_noise = false, const Progress& progress = {});

struct CrosscheckResult {
    std::size_t trajectories{0};
    std::array<double, 5> max_rel{};   // per moment, max over t and trajectories
    double max_rel_all{0.0};
    std::vector<std::array<double, 6>> trace;  // t, |dq|, |dp|, |dq2|, |dp2|, |dqp| for trajectory 0
};

// Both propagators on identical noise for the first cycle.  Relative errors
// are normalized per moment by its max |value| over the cycle.
CrosscheckResult crosscheck(const RunConfig& cfg, std::size_t trajectories = 2);

struct NoiseCheck {
    Bath bath{Bath::Cold};
    double lag{0.0};
    Estimate estimate;
    double oracle{0.0};
    double z() const { return estimate.se > 0.0 ? (estimate.mean - oracle) / estimate.se : 0.0; }
};

// C(tau) = (1/pi) int_0^inf S(w) cos(w tau) dw by adaptive quadrature.
double noise_correlation(const ReservoirSpec& spec, double tau);

// Autocorrelation of cfg.n_samples sampled paths per bath at the given lags
// against the quadrature, plus the cold/hot cross-correlation at lag 0
// (oracle 0).
std::vector<NoiseCheck> noise_selftest(const RunConfig& cfg, const std::vector<double>& lags,
                                       double horizon);

} // namespace otto
