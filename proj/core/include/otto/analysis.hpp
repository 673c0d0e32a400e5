// analysis.hpp: analytic estimates and post-processing of run outputs
#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "otto/grid_propagator.hpp"
#include "otto/protocol.hpp"
#include "otto/reservoir.hpp"
#include "otto/thermodynamics.hpp"

namespace otto {

// Ensemble <q^2> at the corners A, B, C, D.
struct VarianceQuadruple {
    double q2_A{0.0};
    double q2_B{0.0};
    double q2_C{0.0};
    double q2_D{0.0};
};

// R = (A + D) / (C + B).  Throws DomainError on a nonpositive denominator.
double ratio_R(const VarianceQuadruple& v);

// (2 gamma / delta_omega) (1 + R) / (1 - R); +infinity for R >= 1.
double minimal_tau_I(double gamma, double delta_omega, double R);

struct WorkEstimates {
    double W_d{0.0};
    double W_I{0.0};
};

// Small-compression estimates for linear ramps:
//   W_d ~ (delta_omega/2)(A + D - C - B),  W_I ~ (gamma/tau_I)(A + B + C + D).
WorkEstimates estimate_works(const VarianceQuadruple& v, const CycleSchedule& s, double gamma);

// Omega_alpha: the dimensionless phase integral over a coupling ramp pair,
//   int_0^{tau_I} dx { x/tau_I cos(2 w x) e^{-g x}
//                      - (1 - x/tau_I) cos(2 w (tau_I + tau_R + x)) e^{-g (tau_I + tau_R + x)} }
// with w the isochore frequency.  Composite Simpson with step <= `step`.
double omega_integral(Bath alpha, const CycleSchedule& s, double gamma, double step = 1e-2);

// W_I^(qp) ~ (gamma / 2 tau_I) (<qp+pq>_A Omega_h + <qp+pq>_C Omega_c).
// Inputs are the full <qp+pq>, i.e. twice Moments::qp.
double estimate_WI_qp(double qp_A, double qp_C, const CycleSchedule& s, double gamma);

struct EntropyResult {
    double value{0.0};
    bool physical{true};  // false if the state violates nu >= 1/2 (or has negative eigenvalues) beyond tolerance
    double nu{0.0};       // symplectic eigenvalue (Gaussian path only)
    double min_eigenvalue{0.0};
};

// Entropy of a single-mode Gaussian state from its central covariances.
EntropyResult gaussian_entropy(double var_q, double var_p, double cov_qp, double tol = 1e-6);
// Convenience: physical state from ensemble-averaged raw moments.
EntropyResult gaussian_entropy(const Moments& ensemble_mean, double tol = 1e-6);
// Entropy of a (typically ensemble-averaged) grid density via rho(x,x').
EntropyResult grid_entropy(const DensityGrid& g, double floor = 1e-10, double tol = 1e-6);

// Closed-form thermal entropy of a harmonic oscillator at omega*beta = x.
double thermal_entropy(double omega_beta);

struct Squeezing {
    double r{0.0};
    double phi{0.0};       // major-axis angle in the (q,p) plane, modulo pi
    bool degenerate{false};
};

// sigma = nu R(phi) diag(e^{2r}, e^{-2r}) R(phi)^T relative to the omega_0 = 1
// ground state; r = ln(l_max/l_min)/4.  Isotropic states give r = 0, phi = 0
// and the degeneracy flag.
Squeezing squeezing_parameters(double var_q, double var_p, double cov_qp, double eps = 1e-12);

// Continuous unwrapping of angles defined modulo `period` (nearest branch).
std::vector<double> unwrap(std::span<const double> angles, double period);

struct PhasePoint {
    double gamma{0.0};
    double tau_I{0.0};
    Phase phase{Phase::NotConverged};
    Estimate eta;
    Estimate W;
    double R{0.0};  // from the corner variances (NaN if unavailable)
};

struct BoundaryPoint {
    double gamma{0.0};
    double tau_I{0.0};        // NaN if no sign change along tau_I
    double R{0.0};            // interpolated at the crossing
    double tau_estimate{0.0}; // minimal_tau_I with that R
};

struct PhaseDiagram {
    std::vector<double> gammas;
    std::vector<double> taus;
    std::vector<std::vector<PhasePoint>> points;  // [gamma][tau]
    std::vector<BoundaryPoint> boundary;          // one per gamma
};

// reports[i][j] belongs to (gammas[i], taus[j]); taus ascending.  The
// boundary is the first sign change of W = W_d + W_I from >= 0 to < 0 along
// tau_I, linearly interpolated; crossings touching unconverged points are
// not interpolated.
PhaseDiagram assemble_phase_diagram(std::span<const double> gammas, std::span<const double> taus,
                                    const std::vector<std::vector<EngineReport>>& reports,
                                    double delta_omega);

} // namespace otto
