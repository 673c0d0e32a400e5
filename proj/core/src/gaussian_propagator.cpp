#include "otto/gaussian_propagator.hpp"

#include <array>
#include <cmath>

#include "otto/error.hpp"

namespace otto {

Drive make_drive(const Controls& c, double xi_c, double xi_h, const ReservoirSpec& cold,
                 const ReservoirSpec& hot) {
    Drive d;
    const double gc = cold.gamma, gh = hot.gamma;
    d.omega2 = c.omega * c.omega + gc * c.lambda_c * c.lambda_c_dot + gh * c.lambda_h * c.lambda_h_dot;
    d.friction = gc * c.lambda_c * c.lambda_c + gh * c.lambda_h * c.lambda_h;
    d.diffusion = 2.0 * gc * c.lambda_c * c.lambda_c / cold.beta +
                  2.0 * gh * c.lambda_h * c.lambda_h / hot.beta;
    d.force = c.lambda_c * xi_c + c.lambda_h * xi_h;
    return d;
}

bool GaussianState::finite() const {
    return std::isfinite(mean_q) && std::isfinite(mean_p) && std::isfinite(var_q) &&
           std::isfinite(var_p) && std::isfinite(cov_qp);
}

GaussianState thermal_gaussian(double omega, double beta) {
    if (!(omega > 0.0) || !(beta > 0.0)) throw DomainError("thermal_gaussian: omega, beta must be > 0");
    const double c = 1.0 / std::tanh(0.5 * omega * beta);
    GaussianState s;
    s.var_q = 0.5 * c / omega;
    s.var_p = 0.5 * c * omega;
    return s;
}

Moments moments(const GaussianState& s) {
    return {s.mean_q, s.mean_p, s.var_q + s.mean_q * s.mean_q, s.var_p + s.mean_p * s.mean_p,
            s.cov_qp + s.mean_q * s.mean_p};
}

namespace {

using Vec = std::array<double, 5>;

Vec rhs(const Vec& x, const Drive& d) {
    return {x[1],
            -d.omega2 * x[0] - d.friction * x[1] + d.force,
            2.0 * x[4],
            -2.0 * d.omega2 * x[4] - 2.0 * d.friction * x[3] + d.diffusion,
            x[3] - d.omega2 * x[2] - d.friction * x[4]};
}

Vec axpy(const Vec& x, double a, const Vec& k) {
    Vec r;
    for (int i = 0; i < 5; ++i) r[i] = x[i] + a * k[i];
    return r;
}

} // namespace

void step_gaussian(GaussianState& s, const Drive& d0, const Drive& dm, const Drive& d1, double h) {
    const Vec x{s.mean_q, s.mean_p, s.var_q, s.var_p, s.cov_qp};
    const Vec k1 = rhs(x, d0);
    const Vec k2 = rhs(axpy(x, 0.5 * h, k1), dm);
    const Vec k3 = rhs(axpy(x, 0.5 * h, k2), dm);
    const Vec k4 = rhs(axpy(x, h, k3), d1);
    Vec y;
    for (int i = 0; i < 5; ++i) y[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    s.mean_q = y[0];
    s.mean_p = y[1];
    s.var_q = y[2];
    s.var_p = y[3];
    s.cov_qp = y[4];
    s.t += h;
}

void step_gaussian(GaussianState& s, const Controls& c, double xi_c, double xi_h, double h,
                   const ReservoirSpec& cold, const ReservoirSpec& hot, double kappa) {
    if (kappa != 0.0) throw UnsupportedError("moment propagator requires kappa = 0");
    const Drive d = make_drive(c, xi_c, xi_h, cold, hot);
    step_gaussian(s, d, d, d, h);
}

} // namespace otto
