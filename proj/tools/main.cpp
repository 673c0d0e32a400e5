// otto: command-line driver for engine runs, sweeps and self-checks.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

#include "otto/ensemble.hpp"
#include "otto/error.hpp"
#include "otto/output.hpp"

namespace fs = std::filesystem;
using namespace otto;

namespace {

constexpr int kOk = 0;
constexpr int kNotConverged = 2;
constexpr int kRunError = 3;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> threads;
    std::optional<std::string> out_dir;
    std::optional<std::string> propagator;
    bool quiet{false};
};

void add_common(CLI::App* sub, std::string& config, Overrides& o) {
    sub->add_option("config", config, "INI configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "run seed");
    sub->add_option("--samples", o.samples, "number of trajectories");
    sub->add_option("--threads", o.threads, "worker threads");
    sub->add_option("--out-dir", o.out_dir, "output directory");
    sub->add_option("--propagator", o.propagator, "gaussian or grid");
    sub->add_flag("-q,--quiet", o.quiet, "no progress output");
}

RunConfig load(const std::string& path, const Overrides& o) {
    RunConfig c = load_config(path);
    if (o.seed) c.seed = *o.seed;
    if (o.samples) c.n_samples = *o.samples;
    if (o.threads) c.threads = *o.threads;
    if (o.out_dir) c.out_dir = *o.out_dir;
    if (o.propagator) c.propagator = propagator_from_string(*o.propagator);
    c.validate();
    return c;
}

Progress progress_bar(bool quiet, const char* what) {
    if (quiet) return {};
    return [what](std::size_t done, std::size_t total) {
        if (done == total || done % std::max<std::size_t>(1, total / 50) == 0) {
            std::fprintf(stderr, "\r%s %zu/%zu", what, done, total);
            if (done == total) std::fputc('\n', stderr);
        }
    };
}

void plot_run(const fs::path& dir, const RunResult& r) {
    output::Series q2{"<q^2>", {}}, p2{"<p^2>", {}}, qp{"<qp+pq>/2", {}};
    for (const auto& s : r.series) {
        q2.xy.emplace_back(s.t, s.m[2].mean);
        p2.xy.emplace_back(s.t, s.m[3].mean);
        qp.xy.emplace_back(s.t, s.m[4].mean);
    }
    output::svg_lines(dir / "moments.svg", "second moments", "t", {q2, p2, qp});
}

void plot_sweep(const fs::path& dir, const SweepResult& s, const RunConfig& cfg) {
    if (cfg.sweep.parameter2.empty()) {
        output::Series eta{"eta", {}}, qh{"Q_h", {}}, w{"W", {}}, pw{"P", {}}, pw0{"P without W_I", {}};
        for (const auto& p : s.points) {
            if (!p.ok || p.result.mode != RunMode::Engine) continue;
            const auto& e = p.result.report;
            eta.xy.emplace_back(p.value, e.eta.mean);
            qh.xy.emplace_back(p.value, e.pooled.Q_h.mean);
            w.xy.emplace_back(p.value, e.pooled.W.mean);
            pw.xy.emplace_back(p.value, e.power.mean);
            pw0.xy.emplace_back(p.value, e.power_without_WI.mean);
        }
        output::svg_lines(dir / "sweep.svg", "sweep over " + cfg.sweep.parameter, cfg.sweep.parameter,
                          {eta, qh, w, pw, pw0});
    }
    if (s.phase_diagram) {
        const auto& pd = *s.phase_diagram;
        std::vector<std::vector<double>> v(pd.gammas.size());
        for (std::size_t i = 0; i < pd.gammas.size(); ++i)
            for (const auto& p : pd.points[i])
                v[i].push_back(p.phase == Phase::NotConverged ? NAN : p.eta.mean);
        output::svg_heatmap(dir / "phase_diagram.svg", "efficiency (gamma across, tau_I up)", pd.gammas, pd.taus, v);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic open-system quantum Otto engine simulator"};
    app.require_subcommand(1);

    std::string config;
    Overrides o;

    auto* run_cmd = app.add_subcommand("run", "ensemble run (engine or relax mode)");
    add_common(run_cmd, config, o);
    std::optional<std::size_t> dump_noise;
    run_cmd->add_option("--dump-noise", dump_noise, "write the noise path of trajectory N to noise_path.csv");

    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep from the [sweep] block");
    add_common(sweep_cmd, config, o);
    bool common_noise = false;
    sweep_cmd->add_flag("--common-noise", common_noise, "reuse the run seed at every point");

    auto* cross_cmd = app.add_subcommand("crosscheck", "grid vs moment propagator over one cycle");
    add_common(cross_cmd, config, o);
    std::size_t cross_traj = 2;
    cross_cmd->add_option("--trajectories", cross_traj, "shared-noise trajectories");

    auto* noise_cmd = app.add_subcommand("noise-selftest", "noise autocorrelation vs quadrature");
    add_common(noise_cmd, config, o);
    std::vector<double> lags{0.0, M_PI, 2.0 * M_PI};
    double horizon = 20.0;
    noise_cmd->add_option("--lags", lags, "lags to test");
    noise_cmd->add_option("--horizon", horizon, "path length");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load(config, o);
        const fs::path dir = cfg.out_dir;
        const std::string hash = config_hash(cfg);
        if (*run_cmd) {
            const RunResult r = run(cfg, progress_bar(o.quiet, "trajectories"));
            output::write_run(dir, r);
            plot_run(dir, r);
            if (dump_noise) {
                const double span = cfg.mode == RunMode::Engine
                                        ? static_cast<double>(cfg.max_cycles) * cfg.schedule.period()
                                        : cfg.relax.duration;
                output::write_noise_path(dir / "noise_path.csv",
                                         make_noise_path(cfg.cold, cfg.hot, span + 2.0 * cfg.dt, cfg.dt, cfg.seed,
                                                         *dump_noise));
            }
            if (!o.quiet) {
                std::cerr << "wrote " << dir.string() << " (" << r.wall_seconds << " s, " << r.aborted
                          << " aborted)\n";
                if (r.mode == RunMode::Engine)
                    std::cerr << "phase " << to_string(r.report.phase) << ", W = " << r.report.pooled.W.mean
                              << " +- " << r.report.pooled.W.se << ", eta = " << r.report.eta.mean << "\n";
            }
            return r.mode == RunMode::Engine && !r.report.converged ? kNotConverged : kOk;
        }
        if (*sweep_cmd) {
            const SweepResult s = sweep(cfg, common_noise, progress_bar(o.quiet, "points"));
            output::write_sweep(dir, s, cfg);
            plot_sweep(dir, s, cfg);
            bool all_conv = true, any_fail = false;
            for (const auto& p : s.points) {
                any_fail |= !p.ok;
                all_conv &= !p.ok || p.result.mode != RunMode::Engine || p.result.report.converged;
            }
            if (any_fail) return kRunError;
            return all_conv ? kOk : kNotConverged;
        }
        if (*cross_cmd) {
            const CrosscheckResult c = crosscheck(cfg, cross_traj);
            output::write_crosscheck(dir / "crosscheck.csv", c, hash, cfg.seed);
            std::cout << "max relative deviation " << c.max_rel_all << "\n";
            return kOk;
        }
        if (*noise_cmd) {
            const auto checks = noise_selftest(cfg, lags, horizon);
            output::write_noise_selftest(dir / "noise_selftest.csv", checks, hash, cfg.seed);
            for (std::size_t i = 0; i < checks.size(); ++i) {
                const auto& c = checks[i];
                const char* label = i + 1 == checks.size() ? "cross" : (c.bath == Bath::Cold ? "cold" : "hot");
                std::cout << label << " lag " << c.lag << ": " << c.estimate.mean
                          << " +- " << c.estimate.se << " vs " << c.oracle << " (z = " << c.z() << ")\n";
            }
            return kOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRunError;
    }
    return kOk;
}
