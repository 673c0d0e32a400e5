#include "otto/thermodynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "otto/error.hpp"

namespace otto {

namespace {

struct BathTerms {
    double W_I_cl, W_I_xi, W_I_qp, Q;
};

BathTerms bath_terms(double l, double ld, double xi, const ReservoirSpec& r, const Moments& m) {
    const double g = r.gamma;
    BathTerms t;
    t.W_I_cl = g * ld * ld * m.q2;
    t.W_I_xi = -ld * xi * m.q;
    t.W_I_qp = g * l * ld * m.qp;
    t.Q = l * xi * m.p - g * l * l * m.p2 + g * l * l / r.beta - 2.0 * g * l * ld * m.qp +
          ld * xi * m.q - g * ld * ld * m.q2;
    return t;
}

} // namespace

LedgerRates ledger_rates(const Controls& c, const Moments& m, double xi_c, double xi_h,
                         const ReservoirSpec& cold, const ReservoirSpec& hot) {
    const auto tc = bath_terms(c.lambda_c, c.lambda_c_dot, xi_c, cold, m);
    const auto th = bath_terms(c.lambda_h, c.lambda_h_dot, xi_h, hot, m);
    LedgerRates r;
    r.W_d = c.omega * c.omega_dot * m.q2;
    r.W_I_cl = tc.W_I_cl + th.W_I_cl;
    r.W_I_xi = tc.W_I_xi + th.W_I_xi;
    r.W_I_qp = tc.W_I_qp + th.W_I_qp;
    r.Q_c = tc.Q;
    r.Q_h = th.Q;
    return r;
}

void TrajectoryLedger::add_trapezoid(const LedgerRates& a, const LedgerRates& b, double h) {
    const double w = 0.5 * h;
    W_d += w * (a.W_d + b.W_d);
    W_I_cl += w * (a.W_I_cl + b.W_I_cl);
    W_I_xi += w * (a.W_I_xi + b.W_I_xi);
    W_I_qp += w * (a.W_I_qp + b.W_I_qp);
    Q_c += w * (a.Q_c + b.Q_c);
    Q_h += w * (a.Q_h + b.Q_h);
}

TrajectoryLedger& TrajectoryLedger::operator+=(const TrajectoryLedger& o) {
    W_d += o.W_d;
    W_I_cl += o.W_I_cl;
    W_I_xi += o.W_I_xi;
    W_I_qp += o.W_I_qp;
    Q_c += o.Q_c;
    Q_h += o.Q_h;
    return *this;
}

TrajectoryLedger& TrajectoryLedger::operator*=(double s) {
    W_d *= s;
    W_I_cl *= s;
    W_I_xi *= s;
    W_I_qp *= s;
    Q_c *= s;
    Q_h *= s;
    return *this;
}

void accumulate(TrajectoryLedger& ledger, double dt, const Controls& c, const Moments& m,
                double xi_c, double xi_h, const ReservoirSpec& cold, const ReservoirSpec& hot) {
    const auto r = ledger_rates(c, m, xi_c, xi_h, cold, hot);
    ledger.add_trapezoid(r, r, dt);
}

CycleLedger summarize_cycle(std::size_t cycle, std::span<const TrajectoryLedger> per_trajectory) {
    RunningStats wd, wcl, wqm, wxi, wqp, qc, qh, wi, w, res;
    for (const auto& t : per_trajectory) {
        wd.add(t.W_d);
        wcl.add(t.W_I_cl);
        wqm.add(t.W_I_qm());
        wxi.add(t.W_I_xi);
        wqp.add(t.W_I_qp);
        qc.add(t.Q_c);
        qh.add(t.Q_h);
        wi.add(t.W_I());
        w.add(t.W());
        res.add(t.residual());
    }
    CycleLedger c;
    c.cycle = cycle;
    c.samples = per_trajectory.size();
    c.W_d = wd.estimate();
    c.W_I_cl = wcl.estimate();
    c.W_I_qm = wqm.estimate();
    c.W_I_xi = wxi.estimate();
    c.W_I_qp = wqp.estimate();
    c.Q_c = qc.estimate();
    c.Q_h = qh.estimate();
    c.W_I = wi.estimate();
    c.W = w.estimate();
    c.residual = res.estimate();
    return c;
}

Estimate first_law_residual(const CycleLedger& ledger) { return ledger.residual; }

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::HeatEngine: return "heat-engine";
        case Phase::Refrigerator: return "refrigerator";
        case Phase::Dissipator: return "dissipator";
        case Phase::NotConverged: return "not-converged";
    }
    return "?";
}

Phase classify(double W, double Q_h, double Q_c) {
    if (W < 0.0 && Q_h > 0.0) return Phase::HeatEngine;
    if (W > 0.0 && Q_c > 0.0) return Phase::Refrigerator;
    return Phase::Dissipator;
}

namespace {

// Ratio a/b of two ensemble means with delta-method standard error.
Estimate ratio(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    RunningStats sa, sb;
    for (std::size_t i = 0; i < n; ++i) {
        sa.add(a[i]);
        sb.add(b[i]);
    }
    const double ma = sa.mean(), mb = sb.mean();
    if (mb == 0.0) return {0.0, 0.0};
    double cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) cov += (a[i] - ma) * (b[i] - mb);
    cov = n > 1 ? cov / static_cast<double>(n - 1) : 0.0;
    const double r = ma / mb;
    const double var = n > 1 ? (sa.variance() - 2.0 * r * cov + r * r * sb.variance()) /
                                   (mb * mb * static_cast<double>(n))
                             : 0.0;
    return {r, std::sqrt(std::max(var, 0.0))};
}

} // namespace

EngineReport engine_figures(std::span<const TrajectoryLedger> per_trajectory, double period,
                            bool converged) {
    if (!(period > 0.0)) throw DomainError("engine_figures: period must be > 0");
    EngineReport rep;
    rep.converged = converged;
    rep.period = period;
    rep.pooled = summarize_cycle(0, per_trajectory);
    const auto& L = rep.pooled;
    rep.power = {-L.W.mean / period, L.W.se / period};
    rep.power_without_WI = {-L.W_d.mean / period, L.W_d.se / period};

    std::vector<double> negW, W, Qh, Qc;
    for (const auto& t : per_trajectory) {
        negW.push_back(-t.W());
        W.push_back(t.W());
        Qh.push_back(t.Q_h);
        Qc.push_back(t.Q_c);
    }
    const Phase p = classify(L.W.mean, L.Q_h.mean, L.Q_c.mean);
    rep.phase = converged ? p : Phase::NotConverged;
    if (p == Phase::HeatEngine) rep.eta = ratio(negW, Qh);
    if (p == Phase::Refrigerator) rep.eta_ref = ratio(Qc, W);
    return rep;
}

void MomentHistory::add_trajectory(const std::vector<std::vector<Moments>>& traj) {
    auto vec = [](const Moments& m) { return std::array<double, 5>{m.q, m.p, m.q2, m.p2, m.qp}; };
    if (level_.size() < traj.size()) {
        level_.resize(traj.size(), std::vector<Stats5>(samples_));
        delta_.resize(traj.size() > 0 ? traj.size() - 1 : 0, std::vector<Stats5>(samples_));
        drift_.resize(delta_.size());
    }
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj[k].size() != samples_) throw DomainError("moment history: sample count mismatch");
        std::array<double, 5> avg{};
        for (std::size_t s = 0; s < samples_; ++s) {
            const auto a = vec(traj[k][s]);
            for (std::size_t c = 0; c < 5; ++c) level_[k][s][c].add(a[c]);
            if (k + 1 < traj.size()) {
                const auto b = vec(traj[k + 1][s]);
                for (std::size_t c = 0; c < 5; ++c) {
                    delta_[k][s][c].add(b[c] - a[c]);
                    avg[c] += (b[c] - a[c]) / static_cast<double>(samples_);
                }
            }
        }
        if (k + 1 < traj.size())
            for (std::size_t c = 0; c < 5; ++c) drift_[k][c].add(avg[c]);
    }
}

Estimate MomentHistory::level(std::size_t cycle, std::size_t sample, std::size_t component) const {
    return level_.at(cycle).at(sample).at(component).estimate();
}

Estimate MomentHistory::delta(std::size_t cycle, std::size_t sample, std::size_t component) const {
    return delta_.at(cycle).at(sample).at(component).estimate();
}

Estimate MomentHistory::drift(std::size_t cycle, std::size_t component) const {
    return drift_.at(cycle).at(component).estimate();
}

PssResult detect_pss(const MomentHistory& history, double tol) {
    PssResult res;
    if (history.cycles() < 2) return res;
    for (std::size_t k = 0; k + 1 < history.cycles(); ++k) {
        double worst = 0.0;
        for (std::size_t s = 0; s < history.samples_per_cycle(); ++s) {
            double num = 0.0, den = 0.0;
            for (std::size_t c = 0; c < 5; ++c) {
                const Estimate d = history.delta(k, s, c);
                const double excess = std::max(std::abs(d.mean) - 3.0 * d.se, 0.0);
                num += excess * excess;
                const double m = history.level(k, s, c).mean;
                den += m * m;
            }
            const double rel = den > 0.0 ? std::sqrt(num / den)
                                         : (num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            worst = std::max(worst, rel);
        }
        // a slow drift shared by all sample times hides below the pointwise
        // noise; its cycle average is resolved much better, so it is held to
        // half the tolerance once it is statistically significant
        for (std::size_t c = 0; c < 5; ++c) {
            const Estimate d = history.drift(k, c);
            if (!(std::abs(d.mean) > 3.0 * d.se)) continue;
            double m = 0.0;
            for (std::size_t s = 0; s < history.samples_per_cycle(); ++s) m += std::abs(history.level(k, s, c).mean);
            m /= static_cast<double>(std::max<std::size_t>(history.samples_per_cycle(), 1));
            if (std::abs(d.mean) > 0.5 * tol * m) worst = std::max(worst, tol);
        }
        res.metric.push_back(worst);
        if (!res.converged && worst < tol) {
            res.converged = true;
            res.cycle = k + 1;
        }
    }
    return res;
}

} // namespace otto
