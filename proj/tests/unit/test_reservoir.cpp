#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "oracles.hpp"
#include "otto/error.hpp"
#include "otto/reservoir.hpp"

using namespace otto;

TEST(Reservoir, SpectralDensityMatchesDrudeForm) {
    ReservoirSpec r{3.0, 0.05, 30.0};
    for (double w : {0.0, 0.1, 1.0, 7.5, 30.0, 300.0})
        EXPECT_NEAR(spectral_density(r, w), oracle::drude_J(0.05, 30.0, w), 1e-15);
    EXPECT_THROW(spectral_density(r, -1.0), DomainError);
}

TEST(Reservoir, NoisePsdQuantumPart) {
    for (double beta : {0.1, 0.25, 3.0, 20.0}) {
        ReservoirSpec r{beta, 0.1, 30.0};
        for (double w : {1e-6, 0.01, 0.5, 1.0, 5.0, 60.0}) {
            const double s = noise_psd(r, w);
            EXPECT_GE(s, 0.0);
            EXPECT_NEAR(s, oracle::quantum_psd(0.1, beta, 30.0, w), 1e-12 * (1.0 + s));
        }
    }
    // low-frequency limit J(w) * beta w / 6
    ReservoirSpec r{2.0, 0.2, 30.0};
    EXPECT_NEAR(noise_psd(r, 1e-3) / (0.2 * 1e-3 * 2.0 * 1e-3 / 6.0), 1.0, 1e-5);
}

TEST(Reservoir, CountertermIntegral) {
    ReservoirSpec r{1.0, 0.3, 12.0};
    boost::math::quadrature::exp_sinh<double> es;
    const double mu = 2.0 / std::numbers::pi * es.integrate([](double w) {
        const double u = 1.0 + w * w / 144.0;
        return 0.3 / (u * u);
    });
    EXPECT_NEAR(r.counterterm(), mu, 1e-10);
}

TEST(Reservoir, Validate) {
    EXPECT_THROW((ReservoirSpec{0.0, 0.1, 30.0}.validate()), ConfigError);
    EXPECT_THROW((ReservoirSpec{1.0, -0.1, 30.0}.validate()), ConfigError);
    EXPECT_THROW((ReservoirSpec{1.0, 0.1, 0.0}.validate()), ConfigError);
    EXPECT_NO_THROW((ReservoirSpec{1.0, 0.0, 30.0}.validate()));
}
