#include "otto/ensemble.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <numbers>
#include <thread>

#include "otto/error.hpp"
#include "otto/gaussian_propagator.hpp"
#include "otto/grid_propagator.hpp"

namespace otto {

namespace {

using clock_type = std::chrono::steady_clock;

struct NonFinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Stepper {
public:
    virtual ~Stepper() = default;
    virtual void step(const Drive& d0, const Drive& dm, const Drive& d1, double h) = 0;
    virtual Moments moments() const = 0;
};

class GaussStepper final : public Stepper {
public:
    explicit GaussStepper(const GaussianState& s) : s_(s) {}
    void step(const Drive& d0, const Drive& dm, const Drive& d1, double h) override {
        step_gaussian(s_, d0, dm, d1, h);
        if (!s_.finite()) throw NonFinite("non-finite moments");
    }
    Moments moments() const override { return otto::moments(s_); }

private:
    GaussianState s_;
};

class GridStepper final : public Stepper {
public:
    GridStepper(GridPropagator& p, const GaussianState& s) : p_(p), g_(gaussian_density(p.spec(), s)) {}
    void step(const Drive&, const Drive& dm, const Drive&, double h) override { p_.step(g_, dm, h); }
    Moments moments() const override { return observables_grid(g_); }

private:
    GridPropagator& p_;
    DensityGrid g_;
};

double horizon_of(const RunConfig& cfg) {
    const double span = cfg.mode == RunMode::Engine
                            ? static_cast<double>(cfg.max_cycles) * cfg.schedule.period()
                            : cfg.relax.duration;
    return span + 2.0 * cfg.dt;
}

// Per-worker state: samplers (FFT plans) and the grid propagator.
struct Workspace {
    NoiseSampler cold;
    NoiseSampler hot;
    std::unique_ptr<GridPropagator> grid;

    explicit Workspace(const RunConfig& cfg)
        : cold(cfg.cold, horizon_of(cfg), cfg.dt), hot(cfg.hot, horizon_of(cfg), cfg.dt) {
        if (cfg.propagator == PropagatorKind::Grid)
            grid = std::make_unique<GridPropagator>(cfg.grid, cfg.schedule.kappa);
    }

    NoisePath path(std::uint64_t run_seed, std::uint64_t index) {
        NoisePath p;
        p.dt = cold.dt();
        p.seed = derive_seed(run_seed, index, std::uint64_t{0});
        p.values_c = cold.sample(derive_seed(run_seed, index, Bath::Cold));
        p.values_h = hot.sample(derive_seed(run_seed, index, Bath::Hot));
        return p;
    }
};

GaussianState initial_state(const RunConfig& cfg, double omega) {
    switch (cfg.initial) {
        case InitialState::ThermalCold: return thermal_gaussian(omega, cfg.cold.beta);
        case InitialState::ThermalHot: return thermal_gaussian(omega, cfg.hot.beta);
        case InitialState::Ground: {
            GaussianState s;
            s.var_q = 0.5 / omega;
            s.var_p = 0.5 * omega;
            return s;
        }
    }
    return {};
}

std::unique_ptr<Stepper> make_stepper(const RunConfig& cfg, Workspace& ws, PropagatorKind kind,
                                      double omega) {
    const auto s0 = initial_state(cfg, omega);
    if (kind == PropagatorKind::Gaussian) {
        if (cfg.schedule.kappa != 0.0) throw UnsupportedError("moment propagator requires kappa = 0");
        return std::make_unique<GaussStepper>(s0);
    }
    return std::make_unique<GridStepper>(*ws.grid, s0);
}

bool finite(const Moments& m) {
    return std::isfinite(m.q) && std::isfinite(m.p) && std::isfinite(m.q2) && std::isfinite(m.p2) &&
           std::isfinite(m.qp);
}

struct TrajectoryOutput {
    bool aborted{false};
    std::string reason;
    std::vector<TrajectoryLedger> ledgers;
    std::vector<std::vector<Moments>> samples;
    std::vector<std::array<Moments, 4>> corners;
    double q2_avg{0.0}, p2_avg{0.0}, heat_current{0.0};
    double seconds{0.0};
};

struct Plan {
    TimeGrid grid;
    std::vector<std::size_t> sample_steps;
};

Plan make_plan(const RunConfig& cfg) {
    Plan p;
    p.grid = make_time_grid(cfg.schedule, cfg.dt);
    double next = 0.0;
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
        if (p.grid.steps[i].t >= next - 1e-9) {
            p.sample_steps.push_back(i);
            while (next <= p.grid.steps[i].t + 1e-9) next += cfg.sample_interval;
        }
    }
    return p;
}

void engine_trajectory(const RunConfig& cfg, const Plan& plan, Workspace& ws, std::size_t index,
                       TrajectoryOutput& out) {
    const auto& s = cfg.schedule;
    const auto& tg = plan.grid;
    const NoisePath path = ws.path(cfg.seed, index);
    auto stepper = make_stepper(cfg, ws, cfg.propagator, s.omega_hot());
    Moments m = stepper->moments();
    for (std::size_t k = 0; k < cfg.max_cycles; ++k) {
        const double t0 = static_cast<double>(k) * tg.period;
        TrajectoryLedger L;
        std::vector<Moments> row;
        row.reserve(plan.sample_steps.size());
        std::array<Moments, 4> corners{};
        std::size_t si = 0;
        for (std::size_t i = 0; i < tg.size(); ++i) {
            const auto& st = tg.steps[i];
            if (si < plan.sample_steps.size() && plan.sample_steps[si] == i) {
                row.push_back(m);
                ++si;
            }
            for (std::size_t c = 0; c < 4; ++c)
                if (tg.corner_steps[c] == i) corners[c] = m;
            const auto& seg = tg.segments[st.segment];
            const Controls c0 = controls_in(s, seg, st.t);
            const Controls cm = controls_in(s, seg, st.t + 0.5 * st.h);
            const Controls c1 = controls_in(s, seg, st.t + st.h);
            const double ta = t0 + st.t + 0.5 * st.h;
            const double xc = path.at(Bath::Cold, ta);
            const double xh = path.at(Bath::Hot, ta);
            stepper->step(make_drive(c0, xc, xh, cfg.cold, cfg.hot), make_drive(cm, xc, xh, cfg.cold, cfg.hot),
                          make_drive(c1, xc, xh, cfg.cold, cfg.hot), st.h);
            const Moments m1 = stepper->moments();
            if (!finite(m1)) throw NonFinite("non-finite moments");
            L.add_trapezoid(ledger_rates(c0, m, xc, xh, cfg.cold, cfg.hot),
                            ledger_rates(c1, m1, xc, xh, cfg.cold, cfg.hot), st.h);
            m = m1;
        }
        out.ledgers.push_back(L);
        out.samples.push_back(std::move(row));
        out.corners.push_back(corners);
    }
}

void relax_trajectory(const RunConfig& cfg, Workspace& ws, std::size_t index, TrajectoryOutput& out) {
    const auto& r = cfg.relax;
    const NoisePath path = ws.path(cfg.seed, index);
    auto stepper = make_stepper(cfg, ws, cfg.propagator, r.omega);
    Controls c;
    c.omega = r.omega;
    (r.bath == Bath::Cold ? c.lambda_c : c.lambda_h) = 1.0;
    const auto n = static_cast<std::size_t>(std::ceil(r.duration / cfg.dt - 1e-9));
    const double h = r.duration / static_cast<double>(n);
    Moments m = stepper->moments();
    std::vector<Moments> row;
    double next = 0.0;
    double q2 = 0.0, p2 = 0.0;
    std::size_t count = 0;
    TrajectoryLedger L;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * h;
        if (t >= next - 1e-9) {
            row.push_back(m);
            while (next <= t + 1e-9) next += cfg.sample_interval;
        }
        const double xc = path.at(Bath::Cold, t + 0.5 * h);
        const double xh = path.at(Bath::Hot, t + 0.5 * h);
        const Drive d = make_drive(c, xc, xh, cfg.cold, cfg.hot);
        stepper->step(d, d, d, h);
        const Moments m1 = stepper->moments();
        if (!finite(m1)) throw NonFinite("non-finite moments");
        if (t >= r.average_from - 1e-9) {
            q2 += m1.q2;
            p2 += m1.p2;
            ++count;
            L.add_trapezoid(ledger_rates(c, m, xc, xh, cfg.cold, cfg.hot),
                            ledger_rates(c, m1, xc, xh, cfg.cold, cfg.hot), h);
        }
        m = m1;
    }
    row.push_back(m);
    out.samples.push_back(std::move(row));
    out.q2_avg = q2 / static_cast<double>(count);
    out.p2_avg = p2 / static_cast<double>(count);
    const double window = r.duration - r.average_from;
    out.heat_current = (r.bath == Bath::Cold ? L.Q_c : L.Q_h) / window;
}

// Runs body(index, workspace) for every index; results are written by index.
template <class Body>
void parallel_for(std::size_t n, std::size_t threads, const RunConfig& cfg, Body body,
                  const Progress& progress) {
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::atomic<bool> stop{false};
    std::exception_ptr error;
    std::mutex mu;
    auto worker = [&] {
        try {
            Workspace ws(cfg);
            for (;;) {
                if (stop.load()) return;
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                body(i, ws);
                const std::size_t d = done.fetch_add(1) + 1;
                if (progress) {
                    std::lock_guard lock(mu);
                    progress(d, n);
                }
            }
        } catch (...) {
            std::lock_guard lock(mu);
            if (!error) error = std::current_exception();
            stop = true;
        }
    };
    const std::size_t nt = std::max<std::size_t>(1, std::min(threads, n));
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
}

std::array<double, 5> as_array(const Moments& m) { return {m.q, m.p, m.q2, m.p2, m.qp}; }

} // namespace

RunResult run(const RunConfig& cfg, const Progress& progress) {
    cfg.validate();
    const auto start = clock_type::now();
    RunResult res;
    res.config_hash = config_hash(cfg);
    res.seed = cfg.seed;
    res.mode = cfg.mode;

    const Plan plan = cfg.mode == RunMode::Engine ? make_plan(cfg) : Plan{};
    std::vector<TrajectoryOutput> outs(cfg.n_samples);
    parallel_for(
        cfg.n_samples, cfg.threads, cfg,
        [&](std::size_t i, Workspace& ws) {
            const auto t0 = clock_type::now();
            auto& o = outs[i];
            try {
                if (cfg.mode == RunMode::Engine) engine_trajectory(cfg, plan, ws, i, o);
                else relax_trajectory(cfg, ws, i, o);
            } catch (const GridOverflowError& e) {
                o = TrajectoryOutput{};
                o.aborted = true;
                o.reason = e.what();
            } catch (const NonFinite& e) {
                o = TrajectoryOutput{};
                o.aborted = true;
                o.reason = e.what();
            }
            o.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
        },
        progress);

    std::vector<std::size_t> valid;
    double secs = 0.0;
    for (std::size_t i = 0; i < outs.size(); ++i) {
        secs += outs[i].seconds;
        if (outs[i].aborted) {
            ++res.aborted;
            res.abort_reasons.push_back("trajectory " + std::to_string(i) + ": " + outs[i].reason);
        } else {
            valid.push_back(i);
        }
    }
    res.completed = valid.size();
    res.trajectory_seconds = secs / static_cast<double>(outs.size());
    if (static_cast<double>(res.aborted) > cfg.abort_limit * static_cast<double>(cfg.n_samples) ||
        valid.size() < 2)
        throw RunError(std::to_string(res.aborted) + " of " + std::to_string(cfg.n_samples) +
                       " trajectories aborted (first: " +
                       (res.abort_reasons.empty() ? std::string("?") : res.abort_reasons.front()) + ")");

    if (cfg.mode == RunMode::Relax) {
        const std::size_t ns = outs[valid.front()].samples.front().size();
        std::vector<std::array<RunningStats, 5>> stats(ns);
        RunningStats q2, p2, heat;
        for (std::size_t i : valid) {
            const auto& row = outs[i].samples.front();
            for (std::size_t s = 0; s < ns; ++s) {
                const auto a = as_array(row[s]);
                for (std::size_t c = 0; c < 5; ++c) stats[s][c].add(a[c]);
            }
            q2.add(outs[i].q2_avg);
            p2.add(outs[i].p2_avg);
            heat.add(outs[i].heat_current);
        }
        double t = 0.0;
        for (std::size_t s = 0; s < ns; ++s) {
            MomentSample ms;
            ms.t = std::min(t, cfg.relax.duration);
            for (std::size_t c = 0; c < 5; ++c) ms.m[c] = stats[s][c].estimate();
            res.series.push_back(ms);
            t += cfg.sample_interval;
        }
        res.relax_q2 = q2.estimate();
        res.relax_p2 = p2.estimate();
        res.relax_heat_current = heat.estimate();
        res.wall_seconds = std::chrono::duration<double>(clock_type::now() - start).count();
        return res;
    }

    const std::size_t K = cfg.max_cycles;
    const double T = plan.grid.period;
    MomentHistory hist(plan.sample_steps.size());
    for (std::size_t i : valid) hist.add_trajectory(outs[i].samples);
    std::vector<CycleLedger> ledgers;
    for (std::size_t k = 0; k < K; ++k) {
        std::vector<TrajectoryLedger> per;
        per.reserve(valid.size());
        for (std::size_t i : valid) per.push_back(outs[i].ledgers[k]);
        ledgers.push_back(summarize_cycle(k + 1, per));
    }
    res.pss = detect_pss(hist, cfg.pss_tol);
    const std::size_t first = res.pss.converged ? res.pss.cycle - 1 : K - 1;
    const double inv = 1.0 / static_cast<double>(K - first);
    std::vector<TrajectoryLedger> pooled;
    std::array<RunningStats, 4> cq2, cqp;
    for (std::size_t i : valid) {
        TrajectoryLedger acc;
        std::array<double, 4> q2{}, qp{};
        for (std::size_t k = first; k < K; ++k) {
            acc += outs[i].ledgers[k];
            for (std::size_t c = 0; c < 4; ++c) {
                q2[c] += outs[i].corners[k][c].q2 * inv;
                qp[c] += outs[i].corners[k][c].qp * inv;
            }
        }
        acc *= inv;
        pooled.push_back(acc);
        for (std::size_t c = 0; c < 4; ++c) {
            cq2[c].add(q2[c]);
            cqp[c].add(qp[c]);
        }
    }
    res.report = engine_figures(pooled, T, res.pss.converged);
    res.report.pss_cycle = res.pss.converged ? res.pss.cycle : 0;
    res.report.pooled_cycles = K - first;
    res.report.ledgers = ledgers;
    res.report.pooled.cycle = first + 1;
    for (std::size_t c = 0; c < 4; ++c) {
        res.report.corner_q2[c] = cq2[c].estimate();
        res.report.corner_qp[c] = cqp[c].estimate();
    }
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t s = 0; s < plan.sample_steps.size(); ++s) {
            MomentSample ms;
            ms.t = static_cast<double>(k) * T + plan.grid.steps[plan.sample_steps[s]].t;
            ms.cycle = k + 1;
            for (std::size_t c = 0; c < 5; ++c) ms.m[c] = hist.level(k, s, c);
            res.series.push_back(ms);
        }
    }
    res.wall_seconds = std::chrono::duration<double>(clock_type::now() - start).count();
    return res;
}

SweepResult sweep(const RunConfig& cfg, bool common_noise, const Progress& progress) {
    cfg.validate();
    if (!cfg.sweep.active()) throw ConfigError("sweep: no [sweep] block");
    SweepResult out;
    out.config_hash = config_hash(cfg);
    const auto& sw = cfg.sweep;
    const bool two = !sw.parameter2.empty();
    const std::vector<double> second = two ? sw.values2 : std::vector<double>{0.0};
    const std::size_t total = sw.values.size() * second.size();
    std::size_t idx = 0;
    for (double v : sw.values) {
        for (double v2 : second) {
            SweepPoint p;
            p.value = v;
            p.value2 = v2;
            p.seed = common_noise ? cfg.seed : derive_seed(cfg.seed, idx, std::uint64_t{0});
            try {
                RunConfig c = with_parameter(cfg, sw.parameter, v);
                if (two) c = with_parameter(c, sw.parameter2, v2);
                c.sweep = {};
                c.seed = p.seed;
                p.result = run(c);
                p.ok = true;
            } catch (const std::exception& e) {
                p.error = e.what();
            }
            out.points.push_back(std::move(p));
            ++idx;
            if (progress) progress(idx, total);
        }
    }
    if (two && sw.parameter == "gamma" && sw.parameter2 == "tau_I") {
        std::vector<std::vector<EngineReport>> reports(sw.values.size());
        for (std::size_t i = 0; i < sw.values.size(); ++i)
            for (std::size_t j = 0; j < second.size(); ++j) {
                const auto& p = out.points[i * second.size() + j];
                reports[i].push_back(p.ok ? p.result.report : EngineReport{});
            }
        out.phase_diagram = assemble_phase_diagram(sw.values, sw.values2, reports, cfg.schedule.delta_omega);
    }
    return out;
}

CrosscheckResult crosscheck(const RunConfig& cfg_in, std::size_t trajectories) {
    RunConfig cfg = cfg_in;
    cfg.mode = RunMode::Engine;
    cfg.propagator = PropagatorKind::Grid;
    if (cfg.schedule.kappa != 0.0) throw ConfigError("crosscheck requires kappa = 0");
    cfg.validate();
    const Plan plan = make_plan(cfg);
    const auto& s = cfg.schedule;
    const auto& tg = plan.grid;
    CrosscheckResult res;
    res.trajectories = trajectories;
    Workspace ws(cfg);
    for (std::size_t n = 0; n < trajectories; ++n) {
        const NoisePath path = ws.path(cfg.seed, n);
        auto gauss = make_stepper(cfg, ws, PropagatorKind::Gaussian, s.omega_hot());
        auto grid = make_stepper(cfg, ws, PropagatorKind::Grid, s.omega_hot());
        std::array<double, 5> maxdiff{}, scale{};
        auto record = [&](double t) {
            const auto a = as_array(gauss->moments());
            const auto b = as_array(grid->moments());
            std::array<double, 6> row{t};
            for (std::size_t c = 0; c < 5; ++c) {
                const double d = std::abs(a[c] - b[c]);
                maxdiff[c] = std::max(maxdiff[c], d);
                scale[c] = std::max(scale[c], std::abs(a[c]));
                row[c + 1] = d;
            }
            if (n == 0) res.trace.push_back(row);
        };
        record(0.0);
        for (const auto& st : tg.steps) {
            const auto& seg = tg.segments[st.segment];
            const double ta = st.t + 0.5 * st.h;
            const double xc = path.at(Bath::Cold, ta), xh = path.at(Bath::Hot, ta);
            const Drive d0 = make_drive(controls_in(s, seg, st.t), xc, xh, cfg.cold, cfg.hot);
            const Drive dm = make_drive(controls_in(s, seg, ta), xc, xh, cfg.cold, cfg.hot);
            const Drive d1 = make_drive(controls_in(s, seg, st.t + st.h), xc, xh, cfg.cold, cfg.hot);
            gauss->step(d0, dm, d1, st.h);
            grid->step(d0, dm, d1, st.h);
            record(st.t + st.h);
        }
        for (std::size_t c = 0; c < 5; ++c) {
            const double rel = scale[c] > 0.0 ? maxdiff[c] / scale[c] : maxdiff[c];
            res.max_rel[c] = std::max(res.max_rel[c], rel);
            res.max_rel_all = std::max(res.max_rel_all, rel);
        }
    }
    return res;
}

double noise_correlation(const ReservoirSpec& spec, double tau) {
    using boost::math::quadrature::gauss_kronrod;
    auto S = [&](double w) { return noise_psd(spec, w); };
    if (spec.gamma == 0.0) return 0.0;
    if (tau == 0.0) {
        boost::math::quadrature::exp_sinh<double> es;
        return es.integrate(S) / std::numbers::pi;
    }
    const double chunk = std::min(2.0, std::numbers::pi / std::abs(tau));
    const double W = 400.0 * spec.omega_cut;
    double acc = 0.0;
    for (double a = 0.0; a < W; a += chunk) {
        acc += gauss_kronrod<double, 31>::integrate(
            [&](double w) { return S(w) * std::cos(w * tau); }, a, a + chunk, 8, 1e-12);
    }
    return acc / std::numbers::pi;
}

std::vector<NoiseCheck> noise_selftest(const RunConfig& cfg, const std::vector<double>& lags,
                                       double horizon) {
    std::vector<NoiseCheck> out;
    std::vector<std::vector<double>> sc, sh;
    NoiseSampler cold(cfg.cold, horizon, cfg.dt), hot(cfg.hot, horizon, cfg.dt);
    for (std::size_t n = 0; n < cfg.n_samples; ++n) {
        sc.push_back(cold.sample(derive_seed(cfg.seed, n, Bath::Cold)));
        sh.push_back(hot.sample(derive_seed(cfg.seed, n, Bath::Hot)));
    }
    for (const auto* spec : {&cfg.cold, &cfg.hot}) {
        const auto& series = spec->label == Bath::Cold ? sc : sh;
        for (double lag : lags) {
            NoiseCheck c;
            c.bath = spec->label;
            const auto e = autocorrelation_estimate(series, cfg.dt, lag);
            c.lag = e.lag;
            c.estimate = e.value;
            c.oracle = noise_correlation(*spec, e.lag);
            out.push_back(c);
        }
    }
    NoiseCheck x;
    x.bath = Bath::Cold;
    const auto e = cross_correlation_estimate(sc, sh, cfg.dt, 0.0);
    x.lag = e.lag;
    x.estimate = e.value;
    x.oracle = 0.0;
    out.push_back(x);
    return out;
}

} // namespace otto
