#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "otto/error.hpp"
#include "otto/thermodynamics.hpp"

using namespace otto;

namespace {

// dE/dt for E = <p^2>/2 + w^2 <q^2>/2 straight from the moment equations.
double energy_rate(const Controls& c, const Moments& m, double xc, double xh, const ReservoirSpec& cold,
                   const ReservoirSpec& hot) {
    const double W2 = c.omega * c.omega + cold.gamma * c.lambda_c * c.lambda_c_dot +
                      hot.gamma * c.lambda_h * c.lambda_h_dot;
    const double G = cold.gamma * c.lambda_c * c.lambda_c + hot.gamma * c.lambda_h * c.lambda_h;
    const double D = 2 * cold.gamma * c.lambda_c * c.lambda_c / cold.beta +
                     2 * hot.gamma * c.lambda_h * c.lambda_h / hot.beta;
    const double F = c.lambda_c * xc + c.lambda_h * xh;
    const double dq2 = 2 * m.qp;
    const double dp2 = -2 * W2 * m.qp - 2 * G * m.p2 + D + 2 * F * m.p;
    return 0.5 * dp2 + c.omega * c.omega_dot * m.q2 + 0.5 * c.omega * c.omega * dq2;
}

TrajectoryLedger ledger(double Wd, double Wcl, double Wxi, double Wqp, double Qc, double Qh) {
    TrajectoryLedger L;
    L.W_d = Wd;
    L.W_I_cl = Wcl;
    L.W_I_xi = Wxi;
    L.W_I_qp = Wqp;
    L.Q_c = Qc;
    L.Q_h = Qh;
    return L;
}

} // namespace

TEST(Ledger, RatesAddUpToEnergyChange) {
    ReservoirSpec cold{3.0, 0.2, 30.0, Bath::Cold}, hot{0.25, 0.1, 30.0, Bath::Hot};
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        Controls c{1.0 + 0.3 * u(rng), u(rng), 0.5 + 0.5 * u(rng), u(rng), 0.5 + 0.5 * u(rng), u(rng)};
        Moments m{u(rng), u(rng), 1.0 + u(rng), 1.2 + u(rng), 0.3 * u(rng)};
        const double xc = 2 * u(rng), xh = 2 * u(rng);
        const auto r = ledger_rates(c, m, xc, xh, cold, hot);
        const double sum = r.W_d + r.W_I_cl + r.W_I_xi + r.W_I_qp + r.Q_c + r.Q_h;
        EXPECT_NEAR(sum, energy_rate(c, m, xc, xh, cold, hot), 1e-12);
    }
}

TEST(Ledger, ComponentFormulas) {
    ReservoirSpec cold{3.0, 0.2, 30.0, Bath::Cold}, hot{0.25, 0.1, 30.0, Bath::Hot};
    Controls c{1.5, -0.2, 0.0, 0.0, 0.6, 0.2};
    Moments m{0.1, -0.3, 1.1, 2.0, 0.25};
    const auto r = ledger_rates(c, m, 0.0, 0.7, cold, hot);
    EXPECT_NEAR(r.W_d, 1.5 * -0.2 * 1.1, 1e-15);
    EXPECT_NEAR(r.W_I_cl, 0.1 * 0.04 * 1.1, 1e-15);
    EXPECT_NEAR(r.W_I_xi, -0.2 * 0.7 * 0.1, 1e-15);
    EXPECT_NEAR(r.W_I_qp, 0.1 * 0.6 * 0.2 * 0.25, 1e-15);
    EXPECT_EQ(r.Q_c, 0.0);
}

TEST(Ledger, TrapezoidAndSums) {
    TrajectoryLedger L;
    LedgerRates a{1, 2, 3, 4, 5, 6}, b{3, 2, 1, 0, -1, -2};
    L.add_trapezoid(a, b, 0.5);
    EXPECT_DOUBLE_EQ(L.W_d, 1.0);
    EXPECT_DOUBLE_EQ(L.Q_h, 1.0);
    EXPECT_DOUBLE_EQ(L.W_I_qm(), 2.0);
    EXPECT_DOUBLE_EQ(L.W(), 1.0 + 1.0 + 2.0);
    EXPECT_DOUBLE_EQ(L.residual(), 4.0 + 1.0 + 1.0);
    auto M = L;
    M += L;
    M *= 0.5;
    EXPECT_DOUBLE_EQ(M.W_d, L.W_d);
}

TEST(Ledger, Classification) {
    EXPECT_EQ(classify(-0.1, 0.5, -0.4), Phase::HeatEngine);
    EXPECT_EQ(classify(0.1, -0.5, 0.4), Phase::Refrigerator);
    EXPECT_EQ(classify(0.1, 0.5, -0.6), Phase::Dissipator);
    EXPECT_EQ(classify(-0.1, -0.5, 0.6), Phase::Dissipator);
    EXPECT_EQ(to_string(Phase::HeatEngine), "heat-engine");
}

TEST(Ledger, CycleStatistics) {
    std::vector<TrajectoryLedger> per;
    std::vector<double> W;
    for (int i = 0; i < 20; ++i) {
        const double x = 0.01 * i;
        per.push_back(ledger(-0.3 + x, 0.1, -0.02 + x * x, 0.001, -0.2 - x, 0.4 + 0.5 * x));
        W.push_back(per.back().W());
    }
    const auto c = summarize_cycle(3, per);
    EXPECT_EQ(c.cycle, 3u);
    EXPECT_EQ(c.samples, 20u);
    double mean = 0, var = 0;
    for (double w : W) mean += w / 20;
    for (double w : W) var += (w - mean) * (w - mean) / 19;
    EXPECT_NEAR(c.W.mean, mean, 1e-14);
    EXPECT_NEAR(c.W.se, std::sqrt(var / 20), 1e-14);
    EXPECT_NEAR(first_law_residual(c).mean, c.residual.mean, 1e-15);

    const auto rep = engine_figures(per, 40.0, true);
    EXPECT_EQ(rep.phase, Phase::HeatEngine);
    EXPECT_NEAR(rep.eta.mean, -c.W.mean / c.Q_h.mean, 1e-14);
    EXPECT_GT(rep.eta.se, 0.0);
    EXPECT_NEAR(rep.power.mean, -c.W.mean / 40.0, 1e-15);
    EXPECT_NEAR(rep.power_without_WI.mean, -c.W_d.mean / 40.0, 1e-15);
    EXPECT_EQ(engine_figures(per, 40.0, false).phase, Phase::NotConverged);
    EXPECT_THROW(engine_figures(per, 0.0, true), DomainError);
}

TEST(Pss, DetectsConvergenceCycle) {
    // Trajectory moments relax as exp(-k) towards a periodic pattern plus noise.
    MomentHistory h(4);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 0.01);
    for (int tr = 0; tr < 200; ++tr) {
        std::vector<std::vector<Moments>> traj;
        const double off = n(rng);
        for (int k = 0; k < 8; ++k) {
            std::vector<Moments> row;
            for (int s = 0; s < 4; ++s) {
                const double a = 2.0 + std::cos(s) + std::exp(-1.5 * k) + off;
                row.push_back({off, n(rng), a, a + 0.5, 0.1 * std::sin(s)});
            }
            traj.push_back(row);
        }
        h.add_trajectory(traj);
    }
    const auto r = detect_pss(h, 1e-2);
    ASSERT_TRUE(r.converged);
    ASSERT_EQ(r.metric.size(), 7u);
    // relative step ~0.6 exp(-1.5 k): 0.03 at k = 2, 0.007 at k = 3
    EXPECT_EQ(r.cycle, 4u);
    for (std::size_t k = 4; k < r.metric.size(); ++k) EXPECT_LT(r.metric[k], 1e-2);
}

TEST(Pss, DriftNeverConverges) {
    MomentHistory h(2);
    for (int tr = 0; tr < 50; ++tr) {
        std::vector<std::vector<Moments>> traj;
        for (int k = 0; k < 6; ++k) traj.push_back({{0, 0, 1.0 + 0.1 * k, 1, 0}, {0, 0, 2.0 + 0.1 * k, 1, 0}});
        h.add_trajectory(traj);
    }
    EXPECT_FALSE(detect_pss(h).converged);
    MomentHistory one(2);
    EXPECT_FALSE(detect_pss(one).converged);
}

TEST(Pss, CycleAveragedDriftBlocksAcceptance) {
    // 0.8% drift per cycle, invisible pointwise under 3 SE but resolved once
    // averaged over 64 sample times with independent noise.
    MomentHistory h(64);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 0.2);
    for (int tr = 0; tr < 400; ++tr) {
        std::vector<std::vector<Moments>> traj;
        for (int k = 0; k < 3; ++k) {
            std::vector<Moments> row;
            for (int s = 0; s < 64; ++s) {
                const double a = 1.0 + 0.008 * k + n(rng);
                row.push_back({0.0, 0.0, a, 1.0, 0.0});
            }
            traj.push_back(row);
        }
        h.add_trajectory(traj);
    }
    const auto d = h.drift(0, 2);
    EXPECT_GT(std::abs(d.mean), 3.0 * d.se);
    EXPECT_FALSE(detect_pss(h, 1e-2).converged);
}
