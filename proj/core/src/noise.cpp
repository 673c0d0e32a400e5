#include "otto/noise.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <random>

#include "otto/error.hpp"

namespace otto {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t index, std::uint64_t label) {
    return splitmix64(splitmix64(splitmix64(run_seed) ^ index) ^ (label * 0xD1B54A32D192ED03ULL));
}

std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t index, Bath label) {
    return derive_seed(run_seed, index, label == Bath::Cold ? 0x636f6c64ULL : 0x686f74ULL);
}

double NoisePath::horizon() const {
    const auto n = std::max(values_c.size(), values_h.size());
    return n > 1 ? dt * static_cast<double>(n - 1) : 0.0;
}

double NoisePath::at(Bath b, double t) const {
    const auto v = values(b);
    if (v.empty()) return 0.0;
    const double x = t / dt;
    auto i = static_cast<std::size_t>(std::floor(x));
    if (i + 1 >= v.size()) {
        if (x > static_cast<double>(v.size() - 1) + 1e-9)
            throw DomainError("NoisePath::at: time beyond horizon");
        return v.back();
    }
    const double f = x - static_cast<double>(i);
    return v[i] + f * (v[i + 1] - v[i]);
}

namespace {
std::size_t checked_length(const ReservoirSpec& spec, double horizon, double dt) {
    spec.validate();
    if (!(horizon > 0.0)) throw ConfigError("sample_noise: horizon must be > 0");
    if (!(dt > 0.0) || dt > std::numbers::pi / spec.omega_cut)
        throw ConfigError("sample_noise: dt must satisfy 0 < dt <= pi/omega_cut");
    return static_cast<std::size_t>(std::floor(horizon / dt)) + 2;
}
} // namespace

NoiseSampler::NoiseSampler(const ReservoirSpec& spec, double horizon, double dt)
    : dt_(dt),
      dw_(0.0),
      length_(checked_length(spec, horizon, dt)),
      fft_(fft::next_pow2(2 * length_)) {

    const std::size_t n = fft_.size();
    dw_ = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
    amp_.assign(n / 2 + 1, 0.0);
    for (std::size_t k = 1; k <= n / 2; ++k) {
        const double s = noise_psd(spec, static_cast<double>(k) * dw_);
        assert(s >= 0.0);
        if (s < 0.0) throw std::logic_error("noise_psd produced a negative spectral weight");
        // Interior bins carry a full dw; the Nyquist bin only half of one.
        const double weight = (k == n / 2 ? 0.5 : 1.0) * s * dw_ / std::numbers::pi;
        amp_[k] = std::sqrt(weight);
    }
}

double NoiseSampler::variance() const {
    double v = 0.0;
    for (double a : amp_) v += a * a;
    return v;
}

std::vector<double> NoiseSampler::sample(std::uint64_t seed) {
    const std::size_t n = fft_.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    // x_j = Re sum_k A_k (a_k - i b_k) e^{i w_k t_j}; c2r sums the Hermitian
    // extension, so interior bins enter with half amplitude.
    auto spec = fft_.spectrum();
    spec[0] = 0.0;
    for (std::size_t k = 1; k < n / 2; ++k) {
        const double a = normal(rng);
        const double b = normal(rng);
        spec[k] = fft::cplx(0.5 * amp_[k] * a, -0.5 * amp_[k] * b);
    }
    spec[n / 2] = fft::cplx(amp_[n / 2] * normal(rng), 0.0);
    fft_.execute();

    const auto sig = fft_.signal();
    return {sig.begin(), sig.begin() + static_cast<std::ptrdiff_t>(length_)};
}

std::vector<double> sample_noise(const ReservoirSpec& spec, double horizon, double dt,
                                 std::uint64_t seed) {
    NoiseSampler sampler(spec, horizon, dt);
    return sampler.sample(seed);
}

NoisePath make_noise_path(const ReservoirSpec& cold, const ReservoirSpec& hot, double horizon,
                          double dt, std::uint64_t run_seed, std::uint64_t trajectory) {
    NoisePath path;
    path.dt = dt;
    path.seed = derive_seed(run_seed, trajectory, std::uint64_t{0});
    path.values_c = sample_noise(cold, horizon, dt, derive_seed(run_seed, trajectory, Bath::Cold));
    path.values_h = sample_noise(hot, horizon, dt, derive_seed(run_seed, trajectory, Bath::Hot));
    return path;
}

CorrelationEstimate cross_correlation_estimate(std::span<const std::vector<double>> xs,
                                               std::span<const std::vector<double>> ys,
                                               double dt, double lag) {
    if (xs.size() < 2 || xs.size() != ys.size())
        throw DomainError("correlation estimate needs >= 2 paired series");
    const auto k = static_cast<std::size_t>(std::llround(std::abs(lag) / dt));
    RunningStats stats;
    for (std::size_t s = 0; s < xs.size(); ++s) {
        const auto& x = xs[s];
        const auto& y = ys[s];
        const std::size_t len = std::min(x.size(), y.size());
        if (k >= len) throw DomainError("correlation estimate: lag beyond horizon");
        const std::size_t m = len - k;
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += x[i] * y[i + k];
        stats.add(acc / static_cast<double>(m));
    }
    return {static_cast<double>(k) * dt, stats.estimate()};
}

CorrelationEstimate autocorrelation_estimate(std::span<const std::vector<double>> series,
                                             double dt, double lag) {
    return cross_correlation_estimate(series, series, dt, lag);
}

CorrelationEstimate autocorrelation_estimate(std::span<const NoisePath> paths, Bath bath,
                                             double lag) {
    if (paths.size() < 2) throw DomainError("autocorrelation_estimate needs >= 2 paths");
    std::vector<std::vector<double>> series;
    series.reserve(paths.size());
    for (const auto& p : paths) {
        const auto v = p.values(bath);
        series.emplace_back(v.begin(), v.end());
    }
    return autocorrelation_estimate(series, paths.front().dt, lag);
}

} // namespace otto
