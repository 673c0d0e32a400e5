#include "otto/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "otto/error.hpp"

namespace otto {

namespace {
constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();
constexpr double inf_v = std::numeric_limits<double>::infinity();
} // namespace

double ratio_R(const VarianceQuadruple& v) {
    const double den = v.q2_C + v.q2_B;
    if (!(den > 0.0)) throw DomainError("ratio_R: nonpositive denominator");
    return (v.q2_A + v.q2_D) / den;
}

double minimal_tau_I(double gamma, double delta_omega, double R) {
    if (!(delta_omega > 0.0)) throw DomainError("minimal_tau_I: delta_omega must be > 0");
    if (gamma == 0.0) return 0.0;
    if (R >= 1.0) return inf_v;
    return 2.0 * gamma / delta_omega * (1.0 + R) / (1.0 - R);
}

WorkEstimates estimate_works(const VarianceQuadruple& v, const CycleSchedule& s, double gamma) {
    WorkEstimates w;
    w.W_d = 0.5 * s.delta_omega * (v.q2_A + v.q2_D - v.q2_C - v.q2_B);
    w.W_I = gamma / s.tau_I * (v.q2_A + v.q2_B + v.q2_C + v.q2_D);
    return w;
}

double omega_integral(Bath alpha, const CycleSchedule& s, double gamma, double step) {
    const double w = alpha == Bath::Hot ? s.omega_hot() : s.omega_cold();
    const double tI = s.tau_I, tR = s.tau_R;
    if (tI <= 0.0) return 0.0;
    auto f = [&](double x) {
        const double on = x / tI * std::cos(2.0 * w * x) * std::exp(-gamma * x);
        const double y = tI + tR + x;
        const double off = (1.0 - x / tI) * std::cos(2.0 * w * y) * std::exp(-gamma * y);
        return on - off;
    };
    std::size_t n = static_cast<std::size_t>(std::ceil(tI / step));
    n = std::max<std::size_t>(n + (n % 2), 2);
    const double h = tI / static_cast<double>(n);
    double acc = f(0.0) + f(tI);
    for (std::size_t k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(static_cast<double>(k) * h);
    return acc * h / 3.0;
}

double estimate_WI_qp(double qp_A, double qp_C, const CycleSchedule& s, double gamma) {
    if (qp_A == 0.0 && qp_C == 0.0) return 0.0;
    return gamma / (2.0 * s.tau_I) *
           (qp_A * omega_integral(Bath::Hot, s, gamma) + qp_C * omega_integral(Bath::Cold, s, gamma));
}

namespace {

double entropy_of_nu(double nu) {
    if (nu <= 0.5) return 0.0;
    const double a = nu + 0.5, b = nu - 0.5;
    return a * std::log(a) - (b > 0.0 ? b * std::log(b) : 0.0);
}

} // namespace

double thermal_entropy(double x) {
    if (!(x > 0.0)) throw DomainError("thermal_entropy: omega*beta must be > 0");
    return x / std::expm1(x) - std::log1p(-std::exp(-x));
}

EntropyResult gaussian_entropy(double var_q, double var_p, double cov_qp, double tol) {
    EntropyResult r;
    const double det = var_q * var_p - cov_qp * cov_qp;
    r.nu = det > 0.0 ? std::sqrt(det) : 0.0;
    r.physical = r.nu >= 0.5 - tol;
    r.value = entropy_of_nu(r.nu);
    r.min_eigenvalue = nan_v;
    return r;
}

EntropyResult gaussian_entropy(const Moments& m, double tol) {
    return gaussian_entropy(m.q2 - m.q * m.q, m.p2 - m.p * m.p, m.qp - m.q * m.p, tol);
}

EntropyResult grid_entropy(const DensityGrid& g, double floor, double tol) {
    const Eigen::MatrixXcd X = position_matrix(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(X, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    EntropyResult r;
    r.min_eigenvalue = ev.minCoeff();
    r.physical = r.min_eigenvalue >= -tol;
    r.nu = nan_v;
    double s = 0.0;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        const double l = ev(k);
        if (l > floor) s -= l * std::log(l);
    }
    r.value = s;
    return r;
}

Squeezing squeezing_parameters(double var_q, double var_p, double cov_qp, double eps) {
    if (!(var_q > 0.0) || !(var_p > 0.0) || var_q * var_p - cov_qp * cov_qp <= 0.0)
        throw DomainError("squeezing: covariance not positive definite");
    const double tr = var_q + var_p;
    const double diff = var_q - var_p;
    const double disc = std::sqrt(diff * diff + 4.0 * cov_qp * cov_qp);
    const double lmax = 0.5 * (tr + disc), lmin = 0.5 * (tr - disc);
    Squeezing s;
    if (disc <= eps * tr) {
        s.degenerate = true;
        return s;
    }
    s.r = 0.25 * std::log(lmax / lmin);
    s.phi = 0.5 * std::atan2(2.0 * cov_qp, diff);
    if (s.phi < 0.0) s.phi += std::numbers::pi;
    return s;
}

std::vector<double> unwrap(std::span<const double> angles, double period) {
    std::vector<double> out(angles.begin(), angles.end());
    for (std::size_t k = 1; k < out.size(); ++k) {
        const double d = out[k] - out[k - 1];
        out[k] -= period * std::round(d / period);
    }
    return out;
}

PhaseDiagram assemble_phase_diagram(std::span<const double> gammas, std::span<const double> taus,
                                    const std::vector<std::vector<EngineReport>>& reports,
                                    double delta_omega) {
    if (reports.size() != gammas.size()) throw DomainError("phase diagram: gamma dimension mismatch");
    PhaseDiagram pd;
    pd.gammas.assign(gammas.begin(), gammas.end());
    pd.taus.assign(taus.begin(), taus.end());
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        if (reports[i].size() != taus.size()) throw DomainError("phase diagram: tau dimension mismatch");
        std::vector<PhasePoint> row;
        for (std::size_t j = 0; j < taus.size(); ++j) {
            const auto& rep = reports[i][j];
            PhasePoint p;
            p.gamma = gammas[i];
            p.tau_I = taus[j];
            p.phase = rep.converged ? rep.phase : Phase::NotConverged;
            p.eta = rep.phase == Phase::HeatEngine ? rep.eta : Estimate{};
            p.W = rep.pooled.W;
            VarianceQuadruple v{rep.corner_q2[0].mean, rep.corner_q2[1].mean, rep.corner_q2[2].mean,
                                rep.corner_q2[3].mean};
            p.R = (v.q2_B + v.q2_C) > 0.0 ? ratio_R(v) : nan_v;
            row.push_back(p);
        }
        BoundaryPoint b{gammas[i], nan_v, nan_v, nan_v};
        for (std::size_t j = 0; j + 1 < row.size(); ++j) {
            const auto& a = row[j];
            const auto& c = row[j + 1];
            if (a.phase == Phase::NotConverged || c.phase == Phase::NotConverged) continue;
            if (a.W.mean >= 0.0 && c.W.mean < 0.0) {
                const double f = a.W.mean / (a.W.mean - c.W.mean);
                b.tau_I = a.tau_I + f * (c.tau_I - a.tau_I);
                b.R = a.R + f * (c.R - a.R);
                b.tau_estimate = minimal_tau_I(gammas[i], delta_omega, b.R);
                break;
            }
        }
        pd.points.push_back(std::move(row));
        pd.boundary.push_back(b);
    }
    return pd;
}

} // namespace otto
