// moments.hpp: observable interface shared by both propagators
#pragma once

#include "otto/protocol.hpp"
#include "otto/reservoir.hpp"

namespace otto {

// Raw (non-central) moments of one trajectory.
struct Moments {
    double q{0.0};
    double p{0.0};
    double q2{0.0};
    double p2{0.0};
    double qp{0.0};  // <qp + pq>/2
};

// Coefficients of the trajectory dynamics at one instant, after folding the
// controls, reservoir parameters and noise values together:
//   omega2    = omega^2 + sum gamma lambda lambda'   (lambda lambda' acts as a q^2 shift)
//   friction  = sum gamma lambda^2
//   diffusion = sum 2 gamma lambda^2 / beta
//   force     = sum lambda xi
struct Drive {
    double omega2{1.0};
    double friction{0.0};
    double diffusion{0.0};
    double force{0.0};
};

Drive make_drive(const Controls& c, double xi_c, double xi_h, const ReservoirSpec& cold,
                 const ReservoirSpec& hot);

} // namespace otto
