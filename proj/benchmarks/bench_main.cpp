#include <benchmark/benchmark.h>

#include "otto/gaussian_propagator.hpp"
#include "otto/grid_propagator.hpp"
#include "otto/noise.hpp"
#include "otto/protocol.hpp"

namespace {

otto::ReservoirSpec bath() {
    otto::ReservoirSpec r;
    r.beta = 3.0;
    r.gamma = 0.05;
    r.omega_cut = 30.0;
    return r;
}

void BM_NoiseSample(benchmark::State& st) {
    otto::NoiseSampler s(bath(), static_cast<double>(st.range(0)), 0.005);
    std::uint64_t seed = 1;
    for (auto _ : st) benchmark::DoNotOptimize(s.sample(seed++));
    st.SetLabel("horizon " + std::to_string(st.range(0)));
}
BENCHMARK(BM_NoiseSample)->Arg(40)->Arg(320);

void BM_GaussianStep(benchmark::State& st) {
    auto s = otto::thermal_gaussian(2.0, 3.0);
    otto::Drive d{4.0, 0.05, 0.03, 0.1};
    for (auto _ : st) {
        otto::step_gaussian(s, d, d, d, 0.005);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_GaussianStep);

void BM_GridStep(benchmark::State& st) {
    otto::GridSpec spec;
    spec.n_r = spec.n_y = static_cast<std::size_t>(st.range(0));
    otto::GridPropagator p(spec, 0.0);
    auto g = otto::gaussian_density(spec, otto::thermal_gaussian(2.0, 3.0));
    otto::Drive d{4.0, 0.05, 0.4, 0.1};  // hot-bath diffusion keeps the state physical
    for (auto _ : st) p.step(g, d, 0.005);
    st.SetLabel(std::to_string(st.range(0)) + "^2");
}
BENCHMARK(BM_GridStep)->Arg(64)->Arg(128);

} // namespace
BENCHMARK_MAIN();
