#include "otto/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "otto/error.hpp"

namespace otto {

namespace pt = boost::property_tree;

std::string_view to_string(PropagatorKind p) { return p == PropagatorKind::Gaussian ? "gaussian" : "grid"; }

std::string_view to_string(InitialState s) {
    switch (s) {
        case InitialState::ThermalCold: return "thermal_cold";
        case InitialState::ThermalHot: return "thermal_hot";
        case InitialState::Ground: return "ground";
    }
    return "?";
}

std::string_view to_string(RunMode m) { return m == RunMode::Engine ? "engine" : "relax"; }

PropagatorKind propagator_from_string(std::string_view s) {
    if (s == "gaussian") return PropagatorKind::Gaussian;
    if (s == "grid") return PropagatorKind::Grid;
    throw ConfigError("unknown propagator '" + std::string(s) + "'");
}

namespace {

InitialState initial_from_string(const std::string& s) {
    if (s == "thermal_cold") return InitialState::ThermalCold;
    if (s == "thermal_hot") return InitialState::ThermalHot;
    if (s == "ground") return InitialState::Ground;
    throw ConfigError("unknown initial state '" + s + "'");
}

RunMode mode_from_string(const std::string& s) {
    if (s == "engine") return RunMode::Engine;
    if (s == "relax") return RunMode::Relax;
    throw ConfigError("unknown mode '" + s + "'");
}

Bath bath_from_string(const std::string& s) {
    if (s == "cold") return Bath::Cold;
    if (s == "hot") return Bath::Hot;
    throw ConfigError("unknown bath '" + s + "'");
}

std::string strip_comments(std::string_view text) {
    std::string out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto pos = line.find_first_of("#;");
        if (pos != std::string::npos) line.erase(pos);
        out += line;
        out += '\n';
    }
    return out;
}

double number(const pt::ptree& t, const std::string& key, double def) {
    const auto v = t.get_optional<std::string>(key);
    if (!v) return def;
    try {
        std::size_t used = 0;
        const double x = std::stod(*v, &used);
        if (used != v->size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + *v + "'");
    }
}

std::uint64_t integer(const pt::ptree& t, const std::string& key, std::uint64_t def) {
    const auto v = t.get_optional<std::string>(key);
    if (!v) return def;
    try {
        std::size_t used = 0;
        const auto x = std::stoull(*v, &used);
        if (used != v->size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" + *v + "'");
    }
}

std::vector<double> number_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = item.find_last_not_of(" \t");
        item = item.substr(b, e - b + 1);
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("bad number in list: '" + item + "'");
        }
    }
    return out;
}

// values = a, b, c   or   start/stop/count (inclusive, linear)
std::vector<double> sweep_values(const pt::ptree& t, const std::string& suffix) {
    if (auto v = t.get_optional<std::string>("values" + suffix)) return number_list(*v);
    if (t.get_optional<std::string>("start" + suffix)) {
        const double a = number(t, "start" + suffix, 0.0);
        const double b = number(t, "stop" + suffix, a);
        const auto n = integer(t, "count" + suffix, 2);
        if (n < 1) throw ConfigError("sweep: count must be >= 1");
        std::vector<double> out;
        for (std::uint64_t k = 0; k < n; ++k)
            out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
        return out;
    }
    return {};
}

void read_reservoir(const pt::ptree& root, const std::string& sec, ReservoirSpec& r) {
    const auto t = root.get_child_optional(sec);
    if (!t) return;
    r.beta = number(*t, "beta", r.beta);
    r.gamma = number(*t, "gamma", r.gamma);
    r.omega_cut = number(*t, "omega_cut", r.omega_cut);
}

} // namespace

void RunConfig::validate() const {
    schedule.validate();
    cold.validate();
    hot.validate();
    if (cold.label != Bath::Cold || hot.label != Bath::Hot) throw ConfigError("reservoir labels mismatched");
    if (n_samples < 2) throw ConfigError("run: samples must be >= 2");
    if (!(dt > 0.0)) throw ConfigError("run: dt must be > 0");
    const double wmax = std::max(schedule.omega_hot(), relax.omega);
    for (const auto* r : {&cold, &hot}) {
        if (dt > std::numbers::pi / r->omega_cut) throw ConfigError("run: dt must resolve omega_cut (dt <= pi/omega_cut)");
        if (r->omega_cut <= wmax) throw ConfigError("reservoir: omega_cut must exceed every system frequency");
    }
    if (propagator == PropagatorKind::Gaussian && schedule.kappa != 0.0)
        throw ConfigError("propagator = gaussian requires kappa = 0");
    if (mode == RunMode::Engine && max_cycles < 2) throw ConfigError("run: max_cycles must be >= 2");
    if (!(pss_tol > 0.0)) throw ConfigError("run: pss_tol must be > 0");
    if (threads == 0) throw ConfigError("run: threads must be >= 1");
    if (!(sample_interval > 0.0)) throw ConfigError("run: sample_interval must be > 0");
    if (!(abort_limit >= 0.0 && abort_limit < 1.0)) throw ConfigError("run: abort_limit in [0,1)");
    if (mode == RunMode::Relax) {
        if (!(relax.omega > 0.0) || !(relax.duration > 0.0)) throw ConfigError("relax: omega and duration must be > 0");
        if (!(relax.average_from >= 0.0 && relax.average_from < relax.duration))
            throw ConfigError("relax: average_from must lie in [0, duration)");
    }
    if (propagator == PropagatorKind::Grid) grid.validate();
    if (sweep.active() && sweep.values.empty()) throw ConfigError("sweep: no values given");
    if (!sweep.parameter2.empty() && sweep.values2.empty()) throw ConfigError("sweep: no values2 given");
}

RunConfig parse_config(std::string_view text) {
    pt::ptree root;
    try {
        std::istringstream in(strip_comments(text));
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    RunConfig c;
    if (auto t = root.get_child_optional("run")) {
        c.name = t->get("name", c.name);
        c.propagator = propagator_from_string(t->get("propagator", std::string(to_string(c.propagator))));
        c.mode = mode_from_string(t->get("mode", std::string(to_string(c.mode))));
        c.initial = initial_from_string(t->get("initial", std::string(to_string(c.initial))));
        c.n_samples = integer(*t, "samples", c.n_samples);
        c.max_cycles = integer(*t, "max_cycles", c.max_cycles);
        c.dt = number(*t, "dt", c.dt);
        c.pss_tol = number(*t, "pss_tol", c.pss_tol);
        c.seed = integer(*t, "seed", c.seed);
        c.threads = integer(*t, "threads", c.threads);
        c.sample_interval = number(*t, "sample_interval", c.sample_interval);
        c.abort_limit = number(*t, "abort_limit", c.abort_limit);
        c.out_dir = t->get("out_dir", c.out_dir);
    }
    if (auto t = root.get_child_optional("schedule")) {
        auto& s = c.schedule;
        s.tau_I = number(*t, "tau_I", s.tau_I);
        s.tau_d = number(*t, "tau_d", s.tau_d);
        s.tau_R = number(*t, "tau_R", s.tau_R);
        s.delta_omega = number(*t, "delta_omega", s.delta_omega);
        s.kappa = number(*t, "kappa", s.kappa);
        s.ramp_shape = ramp_shape_from_string(t->get("ramp", std::string(to_string(s.ramp_shape))));
        const std::string hold = t->get("hold", std::string("0"));
        s.hold_after_expansion = hold == "half-period" ? s.half_period_hold() : number(*t, "hold", 0.0);
        if (t->get_optional<std::string>("period")) {
            const double T = number(*t, "period", 0.0);
            s.tau_R = 0.5 * (T - 4.0 * s.tau_I - 2.0 * s.tau_d - s.hold_after_expansion);
            if (!(s.tau_R >= 0.0)) throw ConfigError("schedule: period too short for tau_I, tau_d and hold");
        }
    }
    read_reservoir(root, "cold", c.cold);
    read_reservoir(root, "hot", c.hot);
    if (auto t = root.get_child_optional("grid")) {
        auto& g = c.grid;
        g.n_r = integer(*t, "n_r", g.n_r);
        g.n_y = integer(*t, "n_y", g.n_y);
        g.L_r = number(*t, "L_r", g.L_r);
        g.L_y = number(*t, "L_y", g.L_y);
        g.frame_fraction = number(*t, "frame_fraction", g.frame_fraction);
        g.boundary_tol = number(*t, "boundary_tol", g.boundary_tol);
        g.check_stride = integer(*t, "check_stride", g.check_stride);
    }
    if (auto t = root.get_child_optional("relax")) {
        auto& r = c.relax;
        r.bath = bath_from_string(t->get("bath", std::string(to_string(r.bath))));
        r.omega = number(*t, "omega", r.omega);
        r.duration = number(*t, "duration", r.duration);
        r.average_from = number(*t, "average_from", r.average_from);
    }
    if (auto t = root.get_child_optional("sweep")) {
        c.sweep.parameter = t->get("parameter", std::string());
        c.sweep.values = sweep_values(*t, "");
        c.sweep.parameter2 = t->get("parameter2", std::string());
        c.sweep.values2 = sweep_values(*t, "2");
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::string canonical(const RunConfig& c) {
    std::ostringstream o;
    const auto& s = c.schedule;
    o << "mode=" << to_string(c.mode) << '\n'
      << "propagator=" << to_string(c.propagator) << '\n'
      << "initial=" << to_string(c.initial) << '\n'
      << "samples=" << c.n_samples << '\n'
      << "max_cycles=" << c.max_cycles << '\n'
      << "dt=" << num(c.dt) << '\n'
      << "pss_tol=" << num(c.pss_tol) << '\n'
      << "seed=" << c.seed << '\n'
      << "sample_interval=" << num(c.sample_interval) << '\n'
      << "abort_limit=" << num(c.abort_limit) << '\n'
      << "tau_I=" << num(s.tau_I) << "\ntau_d=" << num(s.tau_d) << "\ntau_R=" << num(s.tau_R) << '\n'
      << "delta_omega=" << num(s.delta_omega) << "\nkappa=" << num(s.kappa) << '\n'
      << "hold=" << num(s.hold_after_expansion) << "\nramp=" << to_string(s.ramp_shape) << '\n';
    for (const auto* r : {&c.cold, &c.hot})
        o << to_string(r->label) << ".beta=" << num(r->beta) << '\n'
          << to_string(r->label) << ".gamma=" << num(r->gamma) << '\n'
          << to_string(r->label) << ".omega_cut=" << num(r->omega_cut) << '\n';
    if (c.propagator == PropagatorKind::Grid) {
        const auto& g = c.grid;
        o << "grid=" << g.n_r << 'x' << g.n_y << ',' << num(g.L_r) << ',' << num(g.L_y) << ','
          << num(g.frame_fraction) << ',' << num(g.boundary_tol) << ',' << g.check_stride << '\n';
    }
    if (c.mode == RunMode::Relax)
        o << "relax=" << to_string(c.relax.bath) << ',' << num(c.relax.omega) << ','
          << num(c.relax.duration) << ',' << num(c.relax.average_from) << '\n';
    if (c.sweep.active()) {
        o << "sweep=" << c.sweep.parameter << ':';
        for (double v : c.sweep.values) o << num(v) << ',';
        o << '\n';
        if (!c.sweep.parameter2.empty()) {
            o << "sweep2=" << c.sweep.parameter2 << ':';
            for (double v : c.sweep.values2) o << num(v) << ',';
            o << '\n';
        }
    }
    return o.str();
}

std::string config_hash(const RunConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical(c)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig with_parameter(const RunConfig& c, std::string_view name, double v) {
    RunConfig r = c;
    auto& s = r.schedule;
    if (name == "gamma") r.cold.gamma = r.hot.gamma = v;
    else if (name == "gamma_c") r.cold.gamma = v;
    else if (name == "gamma_h") r.hot.gamma = v;
    else if (name == "beta_c") r.cold.beta = v;
    else if (name == "beta_h") r.hot.beta = v;
    else if (name == "tau_I") s.tau_I = v;
    else if (name == "tau_d") s.tau_d = v;
    else if (name == "tau_R") s.tau_R = v;
    else if (name == "delta_omega") s.delta_omega = v;
    else if (name == "kappa") s.kappa = v;
    else if (name == "hold") s.hold_after_expansion = v;
    else if (name == "period_scaled") {
        s.tau_I = v / 6.0;
        s.tau_d = v / 12.0;
        s.tau_R = v / 12.0;
    } else {
        throw ConfigError("unknown sweep parameter '" + std::string(name) + "'");
    }
    return r;
}

} // namespace otto
