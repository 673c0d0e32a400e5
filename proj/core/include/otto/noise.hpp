// noise.hpp: stationary Gaussian noise with a prescribed spectrum
//
// Realizations are synthesized by circulant (FFT) spectral sampling: a period
// of at least twice the requested horizon is filled with independent complex
// Gaussian amplitudes weighted by sqrt(S(w_k) dw / pi) and transformed back.
// The resulting series has autocorrelation
//     C(tau) = (1/pi) sum_k S(w_k) cos(w_k tau) dw
// which is the midpoint rule for (1/pi) int_0^{pi/dt} S(w) cos(w tau) dw.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "otto/fft.hpp"
#include "otto/reservoir.hpp"
#include "otto/statistics.hpp"

namespace otto {

// SplitMix64-based seed derivation: independent streams per (run, index, label).
std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t index, std::uint64_t label);
std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t index, Bath label);

struct NoisePath {
    double dt{0.0};
    std::vector<double> values_c;
    std::vector<double> values_h;
    std::uint64_t seed{0};  // trajectory token the two streams were derived from

    std::span<const double> values(Bath b) const { return b == Bath::Cold ? values_c : values_h; }
    double horizon() const;
    // Piecewise-linear interpolation between samples; t must lie in [0, horizon()].
    double at(Bath b, double t) const;
};

// Reusable sampler for one (spec, horizon, dt); holds the FFT plan and the
// per-bin amplitudes.  Not shareable across threads; make one per worker.
class NoiseSampler {
public:
    NoiseSampler(const ReservoirSpec& spec, double horizon, double dt);

    // Number of samples returned by sample(): floor(horizon/dt) + 2.
    std::size_t length() const { return length_; }
    std::size_t period() const { return fft_.size(); }
    double dt() const { return dt_; }
    double bin_width() const { return dw_; }

    // Deterministic in seed: identical inputs reproduce the series bit for bit.
    std::vector<double> sample(std::uint64_t seed);

    // Variance of the synthesized process, sum_k S(w_k) dw / pi.
    double variance() const;

private:
    double dt_;
    double dw_;
    std::size_t length_;
    std::vector<double> amp_;  // per-bin standard deviation, k = 0..N/2
    fft::RealInverse fft_;
};

// Throws ConfigError if dt does not resolve the cutoff (dt > pi/omega_cut)
// or horizon <= 0.
std::vector<double> sample_noise(const ReservoirSpec& spec, double horizon, double dt,
                                 std::uint64_t seed);

NoisePath make_noise_path(const ReservoirSpec& cold, const ReservoirSpec& hot, double horizon,
                          double dt, std::uint64_t run_seed, std::uint64_t trajectory);

struct CorrelationEstimate {
    double lag{0.0};  // lag actually used (nearest multiple of dt)
    Estimate value;
};

// Estimate of <x(t) y(t+lag)> from each series' time average, mean and
// standard error across series.  Requires >= 2 series; |lag| beyond the
// shortest series throws DomainError.  C(lag) = C(-lag) for x == y.
CorrelationEstimate cross_correlation_estimate(std::span<const std::vector<double>> xs,
                                               std::span<const std::vector<double>> ys,
                                               double dt, double lag);

CorrelationEstimate autocorrelation_estimate(std::span<const std::vector<double>> series,
                                             double dt, double lag);

CorrelationEstimate autocorrelation_estimate(std::span<const NoisePath> paths, Bath bath,
                                             double lag);

} // namespace otto
