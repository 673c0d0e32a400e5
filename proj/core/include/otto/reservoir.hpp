// reservoir.hpp: thermal bath description and spectral functions
//
// Natural units throughout: hbar = m = omega_0 = 1.

#pragma once

#include <string_view>

namespace otto {

enum class Bath { Cold, Hot };

std::string_view to_string(Bath b);

struct ReservoirSpec {
    double beta{1.0};        // inverse temperature, hbar*omega_0*beta
    double gamma{0.0};       // coupling (damping) rate
    double omega_cut{30.0};  // Drude cutoff
    Bath label{Bath::Cold};

    // Throws ConfigError unless beta > 0, gamma >= 0, omega_cut > 0.
    void validate() const;

    // mu = (2/pi) int_0^inf J(w)/w dw = gamma * omega_cut / 2 for the Drude form.
    // Carried for reference only; the counterterm is removed analytically.
    double counterterm() const;
};

// J(w) = gamma * w / (1 + w^2/w_cut^2)^2.  Throws DomainError for w < 0.
double spectral_density(const ReservoirSpec& spec, double omega);

// Quantum-correction spectrum of the stochastic force,
//   S(w) = J(w) [coth(w beta/2) - 2/(w beta)],
// i.e. Re L(w) with its cutoff-filtered classical part removed. S >= 0.
double noise_psd(const ReservoirSpec& spec, double omega);

} // namespace otto
