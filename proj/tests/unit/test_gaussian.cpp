#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "otto/error.hpp"
#include "otto/gaussian_propagator.hpp"

using namespace otto;

TEST(Gaussian, ThermalState) {
    const auto s = thermal_gaussian(1.5, 3.0);
    EXPECT_NEAR(s.var_q, 0.5 / std::tanh(2.25) / 1.5, 1e-15);
    EXPECT_NEAR(s.var_p, 0.5 / std::tanh(2.25) * 1.5, 1e-15);
    EXPECT_EQ(s.cov_qp, 0.0);
}

TEST(Gaussian, UnitaryRotation) {
    GaussianState s;
    s.mean_q = 0.7;
    s.mean_p = -0.2;
    s.var_q = 0.9;
    s.var_p = 0.4;
    s.cov_qp = 0.1;
    const double w = 1.3, T = 3.0, h = 1e-3;
    Drive d{w * w, 0.0, 0.0, 0.0};
    auto x = s;
    for (int i = 0; i < 3000; ++i) step_gaussian(x, d, d, d, h);
    Eigen::Matrix2d M;
    M << std::cos(w * T), std::sin(w * T) / w, -w * std::sin(w * T), std::cos(w * T);
    Eigen::Vector2d m0(s.mean_q, s.mean_p);
    Eigen::Matrix2d S0;
    S0 << s.var_q, s.cov_qp, s.cov_qp, s.var_p;
    const Eigen::Vector2d m = M * m0;
    const Eigen::Matrix2d S = M * S0 * M.transpose();
    EXPECT_NEAR(x.mean_q, m(0), 1e-12);
    EXPECT_NEAR(x.mean_p, m(1), 1e-12);
    EXPECT_NEAR(x.var_q, S(0, 0), 1e-10);
    EXPECT_NEAR(x.var_p, S(1, 1), 1e-10);
    EXPECT_NEAR(x.cov_qp, S(0, 1), 1e-10);
}

TEST(Gaussian, DampedStationaryState) {
    const double W2 = 2.0, G = 0.3, D = 0.5, F = 0.4;
    Drive d{W2, G, D, F};
    GaussianState s;
    for (int i = 0; i < 40000; ++i) step_gaussian(s, d, d, d, 0.01);
    EXPECT_NEAR(s.mean_q, F / W2, 1e-10);
    EXPECT_NEAR(s.mean_p, 0.0, 1e-10);
    EXPECT_NEAR(s.var_p, D / (2 * G), 1e-10);
    EXPECT_NEAR(s.var_q, D / (2 * G * W2), 1e-10);
    EXPECT_NEAR(s.cov_qp, 0.0, 1e-10);
}

TEST(Gaussian, FourthOrderInTimeDependentDrive) {
    auto drive = [](double t) { return Drive{1.0 + 0.5 * std::sin(t), 0.1 + 0.05 * t, 0.2, std::cos(2 * t)}; };
    auto solve = [&](int n) {
        GaussianState s;
        s.mean_q = 1.0;
        const double h = 2.0 / n;
        for (int i = 0; i < n; ++i) {
            const double t = i * h;
            step_gaussian(s, drive(t), drive(t + h / 2), drive(t + h), h);
        }
        return s;
    };
    const auto ref = solve(6400);
    const auto a = solve(50), b = solve(100);
    const double ea = std::abs(a.mean_q - ref.mean_q) + std::abs(a.var_p - ref.var_p);
    const double eb = std::abs(b.mean_q - ref.mean_q) + std::abs(b.var_p - ref.var_p);
    EXPECT_GT(ea / eb, 13.0);
    EXPECT_LT(ea / eb, 19.0);
}

TEST(Gaussian, ControlsOverload) {
    ReservoirSpec cold{3.0, 0.1, 30.0, Bath::Cold}, hot{0.25, 0.1, 30.0, Bath::Hot};
    Controls c;
    c.omega = 1.2;
    c.lambda_h = 0.5;
    c.lambda_h_dot = 0.1;
    GaussianState a, b;
    step_gaussian(a, c, 0.3, -0.2, 0.01, cold, hot);
    const Drive d = make_drive(c, 0.3, -0.2, cold, hot);
    EXPECT_NEAR(d.omega2, 1.44 + 0.1 * 0.5 * 0.1, 1e-15);
    EXPECT_NEAR(d.friction, 0.1 * 0.25, 1e-15);
    EXPECT_NEAR(d.diffusion, 2 * 0.1 * 0.25 / 0.25, 1e-15);
    EXPECT_NEAR(d.force, -0.1, 1e-15);
    step_gaussian(b, d, d, d, 0.01);
    EXPECT_DOUBLE_EQ(a.var_q, b.var_q);
    EXPECT_THROW(step_gaussian(a, c, 0, 0, 0.01, cold, hot, 0.1), UnsupportedError);
}
