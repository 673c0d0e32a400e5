#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "otto/analysis.hpp"
#include "otto/error.hpp"

using namespace otto;

TEST(Analysis, RatioAndMinimalTau) {
    VarianceQuadruple v{1.0, 3.0, 4.0, 2.0};
    EXPECT_DOUBLE_EQ(ratio_R(v), 3.0 / 7.0);
    EXPECT_THROW(ratio_R(VarianceQuadruple{1, 0, 0, 1}), DomainError);
    EXPECT_DOUBLE_EQ(minimal_tau_I(0.3, 1.0, 0.5), 2 * 0.3 * 1.5 / 0.5);
    // hot-limit case R = beta_h omega_0 = 0.5 at delta_omega = 0.5: 12 gamma
    EXPECT_NEAR(minimal_tau_I(0.7, 0.5, 0.5), 12 * 0.7, 1e-12);
    EXPECT_EQ(minimal_tau_I(0.0, 1.0, 0.5), 0.0);
    EXPECT_TRUE(std::isinf(minimal_tau_I(0.1, 1.0, 1.2)));
}

TEST(Analysis, WorkEstimates) {
    CycleSchedule s;
    s.tau_I = 4;
    s.delta_omega = 0.5;
    VarianceQuadruple v{0.5, 1.5, 2.5, 0.7};
    const auto w = estimate_works(v, s, 0.2);
    EXPECT_NEAR(w.W_d, 0.25 * (0.5 + 0.7 - 2.5 - 1.5), 1e-15);
    EXPECT_NEAR(w.W_I, 0.05 * (0.5 + 1.5 + 2.5 + 0.7), 1e-15);
}

TEST(Analysis, OmegaIntegralClosedForm) {
    CycleSchedule s;
    s.tau_I = 5;
    s.tau_R = 5;
    s.delta_omega = 1;
    for (double g : {0.0, 0.1, 0.5}) {
        EXPECT_NEAR(omega_integral(Bath::Hot, s, g), oracle::omega_integral(1.5, 5, 5, g), 1e-8);
        EXPECT_NEAR(omega_integral(Bath::Cold, s, g), oracle::omega_integral(0.5, 5, 5, g), 1e-8);
    }
    const double qpA = 0.3, qpC = -0.2, g = 0.1;
    EXPECT_NEAR(estimate_WI_qp(qpA, qpC, s, g),
                g / 10.0 * (qpA * oracle::omega_integral(1.5, 5, 5, g) + qpC * oracle::omega_integral(0.5, 5, 5, g)),
                1e-8);
}

TEST(Analysis, GaussianEntropy) {
    for (double x : {0.3, 1.0, 3.0}) {
        const double w = 1.7, v = 0.5 / std::tanh(0.5 * x);
        const auto e = gaussian_entropy(v / w, v * w, 0.0);
        EXPECT_TRUE(e.physical);
        EXPECT_NEAR(e.nu, v, 1e-12);
        EXPECT_NEAR(e.value, oracle::thermal_entropy(x), 1e-10);
        EXPECT_NEAR(thermal_entropy(x), oracle::thermal_entropy(x), 1e-12);
    }
    EXPECT_NEAR(thermal_entropy(3.0), 0.2082563, 1e-7);
    // pure squeezed state
    const auto pure = gaussian_entropy(0.5 * std::exp(0.6), 0.5 * std::exp(-0.6), 0.0);
    EXPECT_NEAR(pure.value, 0.0, 1e-12);
    EXPECT_FALSE(gaussian_entropy(0.2, 0.2, 0.0).physical);
    // raw moments with displacement
    const auto m = gaussian_entropy(Moments{1.0, 2.0, 1.0 + 0.75, 4.0 + 0.75, 2.0});
    EXPECT_NEAR(m.nu, 0.75, 1e-12);
}

TEST(Analysis, Squeezing) {
    const double r = 0.3, phi = 0.4, nu = 0.7;
    const double a = nu * std::exp(2 * r), b = nu * std::exp(-2 * r);
    const double c = std::cos(phi), s = std::sin(phi);
    const double vq = a * c * c + b * s * s, vp = a * s * s + b * c * c, cov = (a - b) * c * s;
    const auto sq = squeezing_parameters(vq, vp, cov);
    EXPECT_NEAR(sq.r, r, 1e-12);
    EXPECT_NEAR(sq.phi, phi, 1e-12);
    EXPECT_FALSE(sq.degenerate);
    EXPECT_NEAR(squeezing_parameters(vq, vp, -cov).phi, std::numbers::pi - phi, 1e-12);
    EXPECT_TRUE(squeezing_parameters(0.5, 0.5, 0.0).degenerate);
    EXPECT_THROW(squeezing_parameters(1.0, 1.0, 2.0), DomainError);
}

TEST(Analysis, UnwrapFollowsWinding) {
    std::vector<double> wrapped, truth;
    for (int k = 0; k < 100; ++k) {
        const double t = 0.1 * k;
        truth.push_back(t);
        wrapped.push_back(std::fmod(t, std::numbers::pi));
    }
    const auto u = unwrap(wrapped, std::numbers::pi);
    for (std::size_t k = 0; k < u.size(); ++k) EXPECT_NEAR(u[k], truth[k], 1e-12);
    // two full turns of the major axis
    EXPECT_NEAR(u.back() - u.front(), 9.9, 1e-12);
}

TEST(Analysis, PhaseDiagramBoundary) {
    const std::vector<double> gammas{0.2, 0.6}, taus{2, 4, 8, 16};
    std::vector<std::vector<EngineReport>> reps(2);
    for (std::size_t i = 0; i < 2; ++i)
        for (double tau : taus) {
            EngineReport r;
            r.converged = true;
            const double cross = i == 0 ? 3.0 : 10.0;
            r.pooled.W = {0.01 * (cross - tau), 0.001};
            r.phase = r.pooled.W.mean < 0 ? Phase::HeatEngine : Phase::Dissipator;
            r.eta = {0.1, 0.01};
            r.corner_q2 = {Estimate{1.0, 0}, Estimate{2.0, 0}, Estimate{3.0, 0}, Estimate{tau / 8, 0}};
            reps[i].push_back(r);
        }
    const auto pd = assemble_phase_diagram(gammas, taus, reps, 0.5);
    ASSERT_EQ(pd.boundary.size(), 2u);
    EXPECT_NEAR(pd.boundary[0].tau_I, 3.0, 1e-12);
    EXPECT_NEAR(pd.boundary[1].tau_I, 10.0, 1e-12);
    const double R = (1.0 + 10.0 / 8) / 5.0;
    EXPECT_NEAR(pd.boundary[1].R, R, 1e-12);
    EXPECT_NEAR(pd.boundary[1].tau_estimate, minimal_tau_I(0.6, 0.5, R), 1e-12);
    EXPECT_EQ(pd.points[0][0].phase, Phase::Dissipator);
    EXPECT_EQ(pd.points[0][0].eta.mean, 0.0);
    EXPECT_EQ(pd.points[0][3].phase, Phase::HeatEngine);

    reps[1][2].converged = false;
    const auto pd2 = assemble_phase_diagram(gammas, taus, reps, 0.5);
    EXPECT_TRUE(std::isnan(pd2.boundary[1].tau_I));
}

TEST(Analysis, GridEntropyOfSqueezedState) {
    GridSpec spec;
    spec.n_r = spec.n_y = 64;
    spec.L_r = spec.L_y = 10;
    GaussianState s;
    s.var_q = 1.2;
    s.var_p = 0.5;
    s.cov_qp = 0.3;
    const auto g = gaussian_density(spec, s);
    EXPECT_NEAR(grid_entropy(g).value, gaussian_entropy(1.2, 0.5, 0.3).value, 1e-6);
}
