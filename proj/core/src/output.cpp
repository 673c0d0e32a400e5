#include "otto/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "otto/analysis.hpp"
#include "otto/error.hpp"

namespace otto::output {

namespace {

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::ofstream open(const fs::path& file) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream f(file, std::ios::binary);
    if (!f) throw RunError("cannot write " + file.string());
    return f;
}

class Row {
public:
    Row& operator<<(double x) { return put(num(x)); }
    Row& operator<<(const Estimate& e) { return put(num(e.mean)).put(num(e.se)); }
    Row& operator<<(std::string_view s) { return put(std::string(s)); }
    Row& operator<<(std::size_t n) { return put(std::to_string(n)); }
    std::string str() const { return s_ + "\n"; }

private:
    Row& put(const std::string& v) {
        if (!first_) s_ += ",";
        s_ += v;
        first_ = false;
        return *this;
    }
    std::string s_;
    bool first_{true};
};

std::string est_cols(std::initializer_list<const char*> names) {
    std::string s;
    for (const char* n : names) {
        if (!s.empty()) s += ",";
        s += std::string(n) + "," + n + "_se";
    }
    return s;
}

} // namespace

std::string header(const std::string& config_hash, std::uint64_t seed) {
    return "# config_hash=" + config_hash + " seed=" + std::to_string(seed) + "\n";
}

void write_ledger(const fs::path& file, const RunResult& r) {
    auto f = open(file);
    f << header(r.config_hash, r.seed);
    f << "cycle,samples," << est_cols({"W_d", "W_I_cl", "W_I_qm", "W_I_xi", "W_I_qp", "Q_c", "Q_h", "W_I", "W", "residual"})
      << ",phase,pss\n";
    for (const auto& L : r.report.ledgers) {
        const bool pss = r.pss.converged && L.cycle >= r.pss.cycle;
        const Phase ph = classify(L.W.mean, L.Q_h.mean, L.Q_c.mean);
        Row row;
        row << L.cycle << L.samples << L.W_d << L.W_I_cl << L.W_I_qm << L.W_I_xi << L.W_I_qp << L.Q_c
            << L.Q_h << L.W_I << L.W << L.residual << to_string(ph) << std::string_view(pss ? "1" : "0");
        f << row.str();
    }
}

void write_moments(const fs::path& file, const RunResult& r) {
    auto f = open(file);
    f << header(r.config_hash, r.seed);
    f << "t,cycle," << est_cols({"q", "p", "q2", "p2", "qp"})
      << ",var_q,var_p,cov_qp,entropy,nu,squeeze_r,squeeze_phi\n";
    std::vector<double> phis;
    std::vector<Squeezing> sq;
    std::vector<EntropyResult> ent;
    for (const auto& s : r.series) {
        const Moments m = s.mean();
        const double vq = m.q2 - m.q * m.q, vp = m.p2 - m.p * m.p, c = m.qp - m.q * m.p;
        sq.push_back(squeezing_parameters(vq, vp, c));
        phis.push_back(sq.back().phi);
        ent.push_back(gaussian_entropy(vq, vp, c, 1e-3));
    }
    const auto phi = unwrap(phis, std::numbers::pi);
    for (std::size_t i = 0; i < r.series.size(); ++i) {
        const auto& s = r.series[i];
        const Moments m = s.mean();
        Row row;
        row << s.t << s.cycle;
        for (const auto& e : s.m) row << e;
        row << m.q2 - m.q * m.q << m.p2 - m.p * m.p << m.qp - m.q * m.p << ent[i].value << ent[i].nu
            << sq[i].r << phi[i];
        f << row.str();
    }
}

void write_summary(const fs::path& file, const RunResult& r) {
    auto f = open(file);
    f << header(r.config_hash, r.seed);
    f << "key,value,se\n";
    auto kv = [&](std::string_view k, const Estimate& e) { f << k << "," << num(e.mean) << "," << num(e.se) << "\n"; };
    auto kd = [&](std::string_view k, double v) { f << k << "," << num(v) << ",\n"; };
    auto ks = [&](std::string_view k, std::string_view v) { f << k << "," << v << ",\n"; };
    ks("mode", to_string(r.mode));
    kd("completed", static_cast<double>(r.completed));
    kd("aborted", static_cast<double>(r.aborted));
    if (r.mode == RunMode::Relax) {
        kv("q2", r.relax_q2);
        kv("p2", r.relax_p2);
        kv("heat_current", r.relax_heat_current);
        return;
    }
    const auto& e = r.report;
    ks("phase", to_string(e.phase));
    kd("converged", e.converged ? 1.0 : 0.0);
    kd("pss_cycle", static_cast<double>(e.pss_cycle));
    kd("pooled_cycles", static_cast<double>(e.pooled_cycles));
    kd("period", e.period);
    kv("W_d", e.pooled.W_d);
    kv("W_I_cl", e.pooled.W_I_cl);
    kv("W_I_qm", e.pooled.W_I_qm);
    kv("W_I_xi", e.pooled.W_I_xi);
    kv("W_I_qp", e.pooled.W_I_qp);
    kv("W_I", e.pooled.W_I);
    kv("W", e.pooled.W);
    kv("Q_c", e.pooled.Q_c);
    kv("Q_h", e.pooled.Q_h);
    kv("residual", e.pooled.residual);
    kv("eta", e.eta);
    kv("power", e.power);
    kv("eta_ref", e.eta_ref);
    kv("power_without_WI", e.power_without_WI);
}

void write_corners(const fs::path& file, const RunResult& r) {
    auto f = open(file);
    f << header(r.config_hash, r.seed);
    f << "corner," << est_cols({"q2", "qp"}) << "\n";
    const char* names[] = {"A", "B", "C", "D"};
    for (std::size_t c = 0; c < 4; ++c) {
        Row row;
        row << std::string_view(names[c]) << r.report.corner_q2[c] << r.report.corner_qp[c];
        f << row.str();
    }
}

void write_run(const fs::path& dir, const RunResult& r) {
    write_moments(dir / "moments.csv", r);
    write_summary(dir / "summary.csv", r);
    if (r.mode == RunMode::Engine) {
        write_ledger(dir / "ledger.csv", r);
        write_corners(dir / "corners.csv", r);
    }
}

void write_sweep(const fs::path& dir, const SweepResult& s, const RunConfig& cfg) {
    const bool two = !cfg.sweep.parameter2.empty();
    {
        auto f = open(dir / "sweep.csv");
        f << header(s.config_hash, cfg.seed);
        f << cfg.sweep.parameter << "," << (two ? cfg.sweep.parameter2 : std::string("unused"))
          << ",seed,ok,phase,converged,pss_cycle,"
          << est_cols({"W_d", "W_I_cl", "W_I_qm", "W_I", "W", "Q_c", "Q_h", "eta", "power", "eta_ref",
                       "power_without_WI", "q2_eq", "p2_eq"})
          << ",error\n";
        for (const auto& p : s.points) {
            Row row;
            row << p.value << p.value2 << std::to_string(p.seed) << std::string_view(p.ok ? "1" : "0");
            const auto& e = p.result.report;
            if (p.ok && p.result.mode == RunMode::Engine) {
                row << to_string(e.phase) << std::string_view(e.converged ? "1" : "0") << e.pss_cycle
                    << e.pooled.W_d << e.pooled.W_I_cl << e.pooled.W_I_qm << e.pooled.W_I << e.pooled.W
                    << e.pooled.Q_c << e.pooled.Q_h << e.eta << e.power << e.eta_ref << e.power_without_WI
                    << Estimate{} << Estimate{};
            } else {
                row << std::string_view(p.ok ? "relax" : "error") << std::string_view("0") << std::size_t{0};
                for (int i = 0; i < 11; ++i) row << Estimate{};
                row << p.result.relax_q2 << p.result.relax_p2;
            }
            std::string err = p.error;
            std::replace(err.begin(), err.end(), ',', ';');
            std::replace(err.begin(), err.end(), '\n', ' ');
            row << std::string_view(err);
            f << row.str();
        }
    }
    if (!s.phase_diagram) return;
    const auto& pd = *s.phase_diagram;
    {
        auto f = open(dir / "phase_diagram.csv");
        f << header(s.config_hash, cfg.seed);
        f << "gamma,tau_I,phase," << est_cols({"eta", "W"}) << ",R\n";
        for (const auto& row_pts : pd.points)
            for (const auto& p : row_pts) {
                Row row;
                row << p.gamma << p.tau_I << to_string(p.phase) << p.eta << p.W << p.R;
                f << row.str();
            }
    }
    {
        auto f = open(dir / "boundary.csv");
        f << header(s.config_hash, cfg.seed);
        f << "gamma,tau_I_simulated,R,tau_I_estimate\n";
        for (const auto& b : pd.boundary) {
            Row row;
            row << b.gamma << b.tau_I << b.R << b.tau_estimate;
            f << row.str();
        }
    }
}

void write_crosscheck(const fs::path& file, const CrosscheckResult& c, const std::string& hash,
                      std::uint64_t seed) {
    auto f = open(file);
    f << header(hash, seed);
    f << "# max_rel q,p,q2,p2,qp = ";
    for (std::size_t i = 0; i < 5; ++i) f << (i ? "," : "") << num(c.max_rel[i]);
    f << " all=" << num(c.max_rel_all) << "\n";
    f << "t,dq,dp,dq2,dp2,dqp\n";
    for (const auto& r : c.trace) {
        Row row;
        for (double x : r) row << x;
        f << row.str();
    }
}

void write_noise_selftest(const fs::path& file, const std::vector<NoiseCheck>& checks,
                          const std::string& hash, std::uint64_t seed) {
    auto f = open(file);
    f << header(hash, seed);
    f << "bath,lag,estimate,estimate_se,oracle,z\n";
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto& c = checks[i];
        const bool cross = i + 1 == checks.size();
        Row row;
        row << std::string_view(cross ? "cross" : (c.bath == Bath::Cold ? "cold" : "hot")) << c.lag << c.estimate
            << c.oracle << c.z();
        f << row.str();
    }
}

void write_noise_path(const fs::path& file, const NoisePath& p) {
    auto f = open(file);
    f << "t,xi_c,xi_h\n";
    for (std::size_t i = 0; i < p.values_c.size(); ++i) {
        Row row;
        row << static_cast<double>(i) * p.dt << p.values_c[i] << p.values_h[i];
        f << row.str();
    }
}

void write_snapshot(const fs::path& file, const DensityGrid& g) {
    auto f = open(file);
    const Moments m = observables_grid(g);
    f << "# t=" << num(g.t) << " q=" << num(m.q) << " p=" << num(m.p) << " q2=" << num(m.q2)
      << " p2=" << num(m.p2) << " qp=" << num(m.qp) << "\n";
    f << "r,rho\n";
    const auto& s = g.spec();
    const std::size_t j0 = s.y0_index();
    for (std::size_t i = 0; i < s.n_r; ++i) {
        Row row;
        row << s.r(i) << g(i, j0).real() / s.dr();
        f << row.str();
    }
}

namespace {

constexpr double W = 640, H = 420, ML = 70, MR = 150, MT = 40, MB = 50;
const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

} // namespace

void svg_lines(const fs::path& file, const std::string& title, const std::string& xlabel,
               const std::vector<Series>& series) {
    double x0 = HUGE_VAL, x1 = -HUGE_VAL, y0 = HUGE_VAL, y1 = -HUGE_VAL;
    for (const auto& s : series)
        for (auto [x, y] : s.xy) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    const double pw = W - ML - MR, ph = H - MT - MB;
    auto X = [&](double x) { return ML + (x - x0) / (x1 - x0) * pw; };
    auto Y = [&](double y) { return MT + ph - (y - y0) / (y1 - y0) * ph; };
    auto f = open(file);
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "' font-family='sans-serif' font-size='12'>\n";
    f << "<rect width='100%' height='100%' fill='white'/>\n";
    f << "<text x='" << W / 2 << "' y='20' text-anchor='middle'>" << esc(title) << "</text>\n";
    f << "<rect x='" << ML << "' y='" << MT << "' width='" << pw << "' height='" << ph << "' fill='none' stroke='black'/>\n";
    f << "<text x='" << ML << "' y='" << H - 15 << "'>" << num(x0) << "</text>\n";
    f << "<text x='" << ML + pw << "' y='" << H - 15 << "' text-anchor='end'>" << num(x1) << "</text>\n";
    f << "<text x='" << ML + pw / 2 << "' y='" << H - 15 << "' text-anchor='middle'>" << esc(xlabel) << "</text>\n";
    f << "<text x='" << ML - 5 << "' y='" << MT + 10 << "' text-anchor='end'>" << num(y1) << "</text>\n";
    f << "<text x='" << ML - 5 << "' y='" << MT + ph << "' text-anchor='end'>" << num(y0) << "</text>\n";
    if (y0 < 0 && y1 > 0)
        f << "<line x1='" << ML << "' x2='" << ML + pw << "' y1='" << Y(0) << "' y2='" << Y(0) << "' stroke='#bbb'/>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* col = palette[k % 7];
        f << "<polyline fill='none' stroke='" << col << "' stroke-width='1.5' points='";
        for (auto [x, y] : series[k].xy)
            if (std::isfinite(x) && std::isfinite(y)) f << num(X(x)) << "," << num(Y(y)) << " ";
        f << "'/>\n";
        f << "<text x='" << ML + pw + 10 << "' y='" << MT + 15 + 18 * k << "' fill='" << col << "'>"
          << esc(series[k].label) << "</text>\n";
    }
    f << "</svg>\n";
}

void svg_heatmap(const fs::path& file, const std::string& title, const std::vector<double>& xs,
                 const std::vector<double>& ys, const std::vector<std::vector<double>>& values) {
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (const auto& r : values)
        for (double v : r)
            if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
    if (!(hi > lo)) hi = lo + 1;
    const double pw = W - ML - MR, ph = H - MT - MB;
    const double cw = pw / static_cast<double>(std::max<std::size_t>(xs.size(), 1));
    const double ch = ph / static_cast<double>(std::max<std::size_t>(ys.size(), 1));
    auto f = open(file);
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "' font-family='sans-serif' font-size='11'>\n";
    f << "<rect width='100%' height='100%' fill='white'/>\n";
    f << "<text x='" << W / 2 << "' y='20' text-anchor='middle'>" << esc(title) << "</text>\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            const double v = values[i][j];
            std::string fill = "#cccccc";
            if (std::isfinite(v)) {
                const double u = (v - lo) / (hi - lo);
                char buf[16];
                std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(255 * u),
                              static_cast<int>(80 + 100 * u), static_cast<int>(255 * (1 - u)));
                fill = buf;
            }
            f << "<rect x='" << num(ML + cw * static_cast<double>(i)) << "' y='"
              << num(MT + ph - ch * static_cast<double>(j + 1)) << "' width='" << num(cw) << "' height='" << num(ch)
              << "' fill='" << fill << "'/>\n";
        }
        f << "<text x='" << num(ML + cw * (static_cast<double>(i) + 0.5)) << "' y='" << H - 30
          << "' text-anchor='middle'>" << num(xs[i]) << "</text>\n";
    }
    for (std::size_t j = 0; j < ys.size(); ++j)
        f << "<text x='" << ML - 5 << "' y='" << num(MT + ph - ch * (static_cast<double>(j) + 0.5))
          << "' text-anchor='end'>" << num(ys[j]) << "</text>\n";
    f << "<text x='" << ML + pw + 10 << "' y='" << MT + 15 << "'>min " << num(lo) << "</text>\n";
    f << "<text x='" << ML + pw + 10 << "' y='" << MT + 33 << "'>max " << num(hi) << "</text>\n";
    f << "</svg>\n";
}

} // namespace otto::output
