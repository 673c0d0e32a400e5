// thermodynamics.hpp: per-cycle work/heat ledgers, engine figures, PSS detection
//
// Rates per trajectory (natural units; Q_a is heat released by reservoir a):
//   W_d    : w w' <q^2>
//   W_I,cl : sum g l'^2 <q^2>
//   W_I,qm : sum [ -l' xi <q> + g l l' <qp+pq>/2 ]
//   Q_a    : l xi <p> - g l^2 <p^2> + g l^2/beta - g l l' <qp+pq> + l' xi <q> - g l'^2 <q^2>
// The five rates add up to d/dt (<p^2>/2 + w^2 <q^2>/2) along every
// trajectory, so the cycle residual measures the energy mismatch between
// consecutive cycle starts.
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "otto/moments.hpp"
#include "otto/protocol.hpp"
#include "otto/reservoir.hpp"
#include "otto/statistics.hpp"

namespace otto {

struct LedgerRates {
    double W_d{0.0};
    double W_I_cl{0.0};
    double W_I_xi{0.0};  // -sum l' xi <q>
    double W_I_qp{0.0};  // sum g l l' <qp+pq>/2
    double Q_c{0.0};
    double Q_h{0.0};
};

LedgerRates ledger_rates(const Controls& c, const Moments& m, double xi_c, double xi_h,
                         const ReservoirSpec& cold, const ReservoirSpec& hot);

// Per-trajectory integrals over one cycle.
struct TrajectoryLedger {
    double W_d{0.0};
    double W_I_cl{0.0};
    double W_I_xi{0.0};
    double W_I_qp{0.0};
    double Q_c{0.0};
    double Q_h{0.0};

    double W_I_qm() const { return W_I_xi + W_I_qp; }
    double W_I() const { return W_I_cl + W_I_qm(); }
    double W() const { return W_d + W_I(); }
    double residual() const { return W() + Q_c + Q_h; }

    // Trapezoid over one step of length h from rates at both ends.
    void add_trapezoid(const LedgerRates& a, const LedgerRates& b, double h);
    TrajectoryLedger& operator+=(const TrajectoryLedger& o);
    TrajectoryLedger& operator*=(double s);
};

// Single-point accumulation: integrand at one point times dt.
void accumulate(TrajectoryLedger& ledger, double dt, const Controls& c, const Moments& m,
                double xi_c, double xi_h, const ReservoirSpec& cold, const ReservoirSpec& hot);

// Ensemble statistics of one cycle.
struct CycleLedger {
    std::size_t cycle{0};  // 1-based
    std::size_t samples{0};
    Estimate W_d, W_I_cl, W_I_qm, W_I_xi, W_I_qp, Q_c, Q_h;
    Estimate W_I, W;       // per-trajectory sums, so correlations are kept
    Estimate residual;
};

// Reduction in index order; the result does not depend on how the
// trajectories were scheduled.
CycleLedger summarize_cycle(std::size_t cycle, std::span<const TrajectoryLedger> per_trajectory);

Estimate first_law_residual(const CycleLedger& ledger);

enum class Phase { HeatEngine, Refrigerator, Dissipator, NotConverged };
std::string_view to_string(Phase p);

// Pure function of the signs of W = W_d + W_I, Q_h and Q_c.
Phase classify(double W, double Q_h, double Q_c);

struct EngineReport {
    Phase phase{Phase::NotConverged};
    bool converged{false};
    std::size_t pss_cycle{0};     // first PSS cycle, 1-based (0 if none)
    std::size_t pooled_cycles{0};
    double period{0.0};
    CycleLedger pooled;           // per-trajectory average over the pooled cycles
    Estimate eta;                 // -W/Q_h for a heat engine, 0 otherwise
    Estimate power;               // -W/T
    Estimate eta_ref;             // Q_c/W for a refrigerator, 0 otherwise
    Estimate power_without_WI;    // -W_d/T
    std::vector<CycleLedger> ledgers;
    // Ensemble <q^2> and <qp+pq>/2 at the corners A, B, C, D of the pooled cycles.
    std::array<Estimate, 4> corner_q2{};
    std::array<Estimate, 4> corner_qp{};
};

// per_trajectory[k] is trajectory k's ledger averaged over the PSS cycles.
// With converged == false the report is labelled NotConverged but still
// carries the pooled numbers.
EngineReport engine_figures(std::span<const TrajectoryLedger> per_trajectory, double period,
                            bool converged);

// Ensemble moment samples per cycle, with paired cycle-to-cycle differences.
class MomentHistory {
public:
    explicit MomentHistory(std::size_t samples_per_cycle = 0) : samples_(samples_per_cycle) {}

    std::size_t samples_per_cycle() const { return samples_; }
    std::size_t cycles() const { return level_.size(); }

    // traj[cycle][sample]; trajectories must be added in a fixed order.
    void add_trajectory(const std::vector<std::vector<Moments>>& traj);

    Estimate level(std::size_t cycle, std::size_t sample, std::size_t component) const;
    // m_{cycle+1} - m_cycle, paired per trajectory.
    Estimate delta(std::size_t cycle, std::size_t sample, std::size_t component) const;
    // Cycle-averaged paired difference m_{cycle+1} - m_cycle.
    Estimate drift(std::size_t cycle, std::size_t component) const;

private:
    using Stats5 = std::array<RunningStats, 5>;
    std::size_t samples_;
    std::vector<std::vector<Stats5>> level_;
    std::vector<std::vector<Stats5>> delta_;
    std::vector<Stats5> drift_;
};

struct PssResult {
    bool converged{false};
    std::size_t cycle{0};         // first PSS cycle, 1-based
    std::vector<double> metric;   // metric[k-1] compares cycles k and k+1
};

// First cycle k with max_t |m_{k+1}(t) - m_k(t)|' / |m_k(t)| < tol, where the
// prime soft-thresholds each component's paired difference by 3 standard
// errors (differences that are statistically zero count as zero).  A cycle
// is also rejected (metric raised to tol) if the cycle-averaged paired
// difference of any component is significant at 3 standard errors and
// exceeds tol/2 relative to that component's cycle-averaged magnitude.
// Needs >= 2 cycles; otherwise returns not converged.
PssResult detect_pss(const MomentHistory& history, double tol = 1e-2);

} // namespace otto
