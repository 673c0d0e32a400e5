#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "otto/ensemble.hpp"
#include "otto/error.hpp"
#include "otto/output.hpp"

using namespace otto;
namespace fs = std::filesystem;

namespace {

RunConfig small_engine() {
    RunConfig c;
    c.schedule.tau_I = 2;
    c.schedule.tau_d = 2;
    c.schedule.tau_R = 2;
    c.cold = {3.0, 0.2, 30.0, Bath::Cold};
    c.hot = {0.25, 0.2, 30.0, Bath::Hot};
    c.n_samples = 12;
    c.max_cycles = 3;
    c.dt = 0.01;
    c.seed = 77;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST(Ensemble, DeterministicAcrossThreadCounts) {
    auto c = small_engine();
    const auto tmp = fs::temp_directory_path() / "otto_det";
    c.threads = 1;
    const auto a = run(c);
    c.threads = 3;
    const auto b = run(c);
    output::write_run(tmp / "a", a);
    output::write_run(tmp / "b", b);
    for (const char* f : {"ledger.csv", "moments.csv", "summary.csv", "corners.csv"}) {
        const auto x = slurp(tmp / "a" / f), y = slurp(tmp / "b" / f);
        EXPECT_FALSE(x.empty());
        EXPECT_EQ(x, y) << f;
    }
    EXPECT_EQ(slurp(tmp / "a" / "ledger.csv").rfind("# config_hash=" + a.config_hash, 0), 0u);
    EXPECT_EQ(a.report.ledgers.size(), 3u);
    EXPECT_EQ(a.completed, 12u);
    fs::remove_all(tmp);
}

TEST(Ensemble, RelaxMatchesStationaryOracle) {
    RunConfig c;
    c.mode = RunMode::Relax;
    c.relax = {Bath::Cold, 1.0, 80.0, 20.0};
    c.cold = {1.0, 0.5, 30.0, Bath::Cold};
    c.hot = {1.0, 0.0, 30.0, Bath::Hot};
    c.n_samples = 60;
    c.dt = 0.01;
    c.initial = InitialState::ThermalCold;
    const auto r = run(c);
    const auto [q2, p2] = oracle::stationary(0.5, 1.0, 30.0, 1.0);
    EXPECT_LT(std::abs(r.relax_q2.mean - q2), 4 * r.relax_q2.se + 2e-3) << r.relax_q2.mean << " " << q2;
    EXPECT_LT(std::abs(r.relax_p2.mean - p2), 4 * r.relax_p2.se + 2e-3) << r.relax_p2.mean << " " << p2;
    EXPECT_LT(std::abs(r.relax_heat_current.mean), 4 * r.relax_heat_current.se + 1e-3);
    EXPECT_FALSE(r.series.empty());
}

TEST(Ensemble, SweepRecordsFailures) {
    auto c = small_engine();
    c.max_cycles = 2;
    c.n_samples = 4;
    c.sweep.parameter = "gamma";
    c.sweep.values = {0.1, -1.0};
    const auto s = sweep(c);
    ASSERT_EQ(s.points.size(), 2u);
    EXPECT_TRUE(s.points[0].ok);
    EXPECT_FALSE(s.points[1].ok);
    EXPECT_FALSE(s.points[1].error.empty());
    EXPECT_FALSE(s.phase_diagram.has_value());
    EXPECT_NE(s.points[0].seed, c.seed);
    const auto common = sweep(c, true);
    EXPECT_EQ(common.points[0].seed, c.seed);
}

TEST(Ensemble, AbortLimit) {
    RunConfig c;
    c.propagator = PropagatorKind::Grid;
    c.mode = RunMode::Relax;
    c.relax = {Bath::Hot, 1.0, 0.5, 0.25};
    c.initial = InitialState::ThermalHot;
    c.hot = {0.25, 0.1, 30.0, Bath::Hot};
    c.grid.n_r = c.grid.n_y = 16;
    c.grid.L_r = c.grid.L_y = 3;
    c.n_samples = 4;
    c.dt = 0.05;
    EXPECT_THROW(run(c), RunError);
}

TEST(Ensemble, GaussianRejectsAnharmonicity) {
    auto c = small_engine();
    c.schedule.kappa = 0.1;
    EXPECT_THROW(run(c), ConfigError);
}
