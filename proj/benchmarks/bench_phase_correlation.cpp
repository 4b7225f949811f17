#include <benchmark/benchmark.h>

#include "specvs/phase_correlation.hpp"
#include "specvs/rng.hpp"

namespace {

specvs::VoxelGrid random_grid(int n, double fill) {
    specvs::Rng rng(5);
    specvs::VoxelGrid g;
    g.dims = {n, n, n};
    g.occupancy.assign(g.cell_count(), 0);
    for (auto& v : g.occupancy) v = rng.uniform() < fill ? 1 : 0;
    return g;
}

void Fft3(benchmark::State& state) {
    const auto grid = random_grid(static_cast<int>(state.range(0)), 0.05);
    for (auto _ : state) {
        auto spec = specvs::fft3(grid);
        benchmark::DoNotOptimize(spec.coeffs.data());
    }
}
BENCHMARK(Fft3)->Arg(32)->Arg(64)->Arg(128);

void PhaseCorrelationPipeline(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto f = random_grid(n, 0.05);
    const auto g = random_grid(n, 0.05);
    const auto f_spec = specvs::fft3(f);
    for (auto _ : state) {
        const auto g_spec = specvs::fft3(g);
        const auto est = specvs::peak_translation(
            specvs::invert_to_correlation(specvs::cross_power_spectrum(f_spec, g_spec)), 0.008);
        benchmark::DoNotOptimize(est.t_glob);
    }
}
BENCHMARK(PhaseCorrelationPipeline)->Arg(32)->Arg(64);

}  // namespace
