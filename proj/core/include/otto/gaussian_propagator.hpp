// gaussian_propagator.hpp: closed moment equations for the harmonic medium
//
//   d<q>/dt   = <p>
//   d<p>/dt   = -W2 <q> - G <p> + F
//   dsqq/dt   = 2 sqp
//   dsqp/dt   = spp - W2 sqq - G sqp
//   dspp/dt   = -2 W2 sqp - 2 G spp + D
//
// with W2, G, D, F from Drive.  Noise enters the means only; the central
// moments evolve deterministically.
#pragma once

#include "otto/moments.hpp"

namespace otto {

struct GaussianState {
    double mean_q{0.0};
    double mean_p{0.0};
    double var_q{0.5};
    double var_p{0.5};
    double cov_qp{0.0};
    double t{0.0};

    bool finite() const;
};

// Thermal state of a harmonic oscillator at frequency omega.
GaussianState thermal_gaussian(double omega, double beta);

Moments moments(const GaussianState& s);

// One classical RK4 step of length h; d0, dm, d1 are the drives at the start,
// midpoint and end of the step.
void step_gaussian(GaussianState& s, const Drive& d0, const Drive& dm, const Drive& d1, double h);

// Convenience overload: constant controls and
// noise over the step.  Throws UnsupportedError if kappa != 0.
void step_gaussian(GaussianState& s, const Controls& c, double xi_c, double xi_h, double h,
                   const ReservoirSpec& cold, const ReservoirSpec& hot, double kappa = 0.0);

} // namespace otto
