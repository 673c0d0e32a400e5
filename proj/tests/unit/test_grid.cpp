#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "otto/analysis.hpp"
#include "otto/error.hpp"
#include "otto/grid_propagator.hpp"

using namespace otto;

namespace {

GridSpec small_grid() {
    GridSpec g;
    g.n_r = g.n_y = 64;
    g.L_r = g.L_y = 10.0;
    return g;
}

GaussianState tilted() {
    GaussianState s;
    s.mean_q = 0.3;
    s.mean_p = -0.4;
    s.var_q = 0.8;
    s.var_p = 0.6;
    s.cov_qp = 0.1;
    return s;
}

void expect_moments_near(const Moments& a, const Moments& b, double tol) {
    EXPECT_NEAR(a.q, b.q, tol);
    EXPECT_NEAR(a.p, b.p, tol);
    EXPECT_NEAR(a.q2, b.q2, tol);
    EXPECT_NEAR(a.p2, b.p2, tol);
    EXPECT_NEAR(a.qp, b.qp, tol);
}

double third_moment(const DensityGrid& g) {
    const auto& s = g.spec();
    double acc = 0.0;
    for (std::size_t i = 0; i < s.n_r; ++i) acc += std::pow(s.r(i), 3) * g(i, s.y0_index()).real();
    return acc * s.dr();
}

} // namespace

TEST(Grid, GaussianRoundTrip) {
    const auto spec = small_grid();
    const auto g = gaussian_density(spec, tilted());
    EXPECT_NEAR(g.trace().real(), 1.0, 1e-12);
    EXPECT_NEAR(g.trace().imag(), 0.0, 1e-14);
    expect_moments_near(observables_grid(g), moments(tilted()), 1e-9);
    EXPECT_LT(g.hermiticity_defect(), 1e-15);
}

TEST(Grid, TraceAndHermiticityPreserved) {
    const auto spec = small_grid();
    GridPropagator prop(spec, 0.0);
    auto g = gaussian_density(spec, thermal_gaussian(1.5, 1.0));
    double tr = g.trace().real();
    for (int i = 0; i < 400; ++i) {
        Drive d{1.5 * 1.5, 0.1, 0.3, 0.5 * std::sin(0.1 * i)};
        prop.step(g, d, 0.01);
        EXPECT_NEAR(g.trace().real(), tr, 1e-12);
        EXPECT_EQ(g.hermiticity_defect(), 0.0);
        tr = g.trace().real();
    }
}

TEST(Grid, AgreesWithMomentEquationsUnitary) {
    const auto spec = small_grid();
    GridPropagator prop(spec, 0.0);
    auto g = gaussian_density(spec, tilted());
    auto s = tilted();
    Drive d{1.44, 0.0, 0.0, 0.0};
    for (int i = 0; i < 500; ++i) {
        prop.step(g, d, 0.01);
        step_gaussian(s, d, d, d, 0.01);
    }
    expect_moments_near(observables_grid(g), moments(s), 2e-5);
}

TEST(Grid, AgreesWithMomentEquationsDissipative) {
    const auto spec = small_grid();
    GridPropagator prop(spec, 0.0);
    auto g = gaussian_density(spec, thermal_gaussian(1.0, 2.0));
    auto s = thermal_gaussian(1.0, 2.0);
    for (int i = 0; i < 500; ++i) {
        Drive d{1.0 + 0.2 * std::sin(0.02 * i), 0.2, 0.5, 0.3 * std::cos(0.05 * i)};
        prop.step(g, d, 0.01);
        step_gaussian(s, d, d, d, 0.01);
    }
    expect_moments_near(observables_grid(g), moments(s), 5e-5);
}

TEST(Grid, AnharmonicEhrenfest) {
    const auto spec = small_grid();
    const double kappa = 0.3, W2 = 1.2, h = 1e-3;
    GridPropagator prop(spec, kappa);
    auto s = tilted();
    s.mean_q = 0.8;
    auto g = gaussian_density(spec, s);
    const auto m0 = observables_grid(g);
    const double f0 = -W2 * m0.q - kappa * third_moment(g);
    prop.step(g, Drive{W2, 0.0, 0.0, 0.0}, h);
    const auto m1 = observables_grid(g);
    const double f1 = -W2 * m1.q - kappa * third_moment(g);
    EXPECT_NEAR((m1.p - m0.p) / h, 0.5 * (f0 + f1), 1e-5);
    EXPECT_NEAR((m1.q - m0.q) / h, 0.5 * (m0.p + m1.p), 1e-5);
}

TEST(Grid, FockPopulationsOfThermalState) {
    const auto spec = small_grid();
    const double beta = 1.0;
    const auto g = gaussian_density(spec, thermal_gaussian(1.0, beta));
    const auto F = fock_matrix(g, 10, 1.0);
    for (std::size_t n = 0; n <= 10; ++n) {
        const double pn = -std::expm1(-beta) * std::exp(-beta * static_cast<double>(n));
        EXPECT_NEAR(F(n, n).real(), pn, 1e-9) << n;
        if (n > 0) EXPECT_NEAR(std::abs(F(n, n - 1)), 0.0, 1e-9);
    }
    EXPECT_NEAR(project_fock(g, 2, 2).real(), F(2, 2).real(), 1e-12);
    EXPECT_THROW(fock_matrix(g, 100, 1.0), DomainError);
}

TEST(Grid, EntropyMatchesThermalFormula) {
    auto spec = small_grid();
    const auto g = gaussian_density(spec, thermal_gaussian(1.0, 1.0));
    const auto e = grid_entropy(g);
    EXPECT_TRUE(e.physical);
    EXPECT_NEAR(e.value, oracle::thermal_entropy(1.0), 1e-6);
    const auto rho = position_matrix(g);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-9);
    EXPECT_LT((rho - rho.adjoint()).norm(), 1e-12);
}

TEST(Grid, OverflowDetected) {
    auto spec = small_grid();
    GridPropagator prop(spec, 0.0);
    auto g = gaussian_density(spec, thermal_gaussian(1.0, 0.02));
    EXPECT_THROW(prop.check(g), GridOverflowError);
    auto h = gaussian_density(spec, thermal_gaussian(1.0, 1.0));
    EXPECT_NO_THROW(prop.check(h));
}

TEST(Grid, SpecValidation) {
    GridSpec s;
    s.n_r = 100;
    EXPECT_THROW(s.validate(), ConfigError);
    s = GridSpec{};
    s.L_y = 0;
    EXPECT_THROW(s.validate(), ConfigError);
}
