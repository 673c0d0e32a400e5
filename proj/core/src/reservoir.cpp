#include "otto/reservoir.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "otto/error.hpp"

namespace otto {

std::string_view to_string(Bath b) { return b == Bath::Cold ? "cold" : "hot"; }

void ReservoirSpec::validate() const {
    const std::string who{to_string(label)};
    if (!(beta > 0.0)) throw ConfigError(who + " reservoir: beta must be > 0");
    if (!(gamma >= 0.0)) throw ConfigError(who + " reservoir: gamma must be >= 0");
    if (!(omega_cut > 0.0)) throw ConfigError(who + " reservoir: omega_cut must be > 0");
}

double ReservoirSpec::counterterm() const { return gamma * omega_cut / 2.0; }

double spectral_density(const ReservoirSpec& spec, double omega) {
    if (!(omega >= 0.0)) throw DomainError("spectral_density: omega must be >= 0");
    const double x = omega / spec.omega_cut;
    const double d = 1.0 + x * x;
    return spec.gamma * omega / (d * d);
}

namespace {

// coth(x) - 1/x, accurate near zero.
double langevin(double x) {
    if (std::abs(x) < 1e-3) {
        const double x2 = x * x;
        return x / 3.0 - x * x2 / 45.0 + 2.0 * x * x2 * x2 / 945.0;
    }
    return 1.0 / std::tanh(x) - 1.0 / x;
}

} // namespace

double noise_psd(const ReservoirSpec& spec, double omega) {
    if (!(omega >= 0.0)) throw DomainError("noise_psd: omega must be >= 0");
    if (omega == 0.0 || spec.gamma == 0.0) return 0.0;
    // coth(wb/2) - 2/(wb) = L(wb/2) with L the Langevin function.
    return spectral_density(spec, omega) * langevin(0.5 * omega * spec.beta);
}

} // namespace otto
