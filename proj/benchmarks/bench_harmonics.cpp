#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "specvs/egi.hpp"
#include "specvs/rigid_transform.hpp"
#include "specvs/rng.hpp"
#include "specvs/so3_transform.hpp"

namespace {

void SphForward(benchmark::State& state) {
    const int b = static_cast<int>(state.range(0));
    const auto tables = specvs::HarmonicTables::get(b, b);
    const auto egi = specvs::build_egi(bench::make_mug(), b);
    for (auto _ : state) {
        auto coeffs = specvs::sph_forward(egi, *tables);
        benchmark::DoNotOptimize(coeffs.blocks.data());
    }
}
BENCHMARK(SphForward)->Arg(16)->Arg(32);

void CorrelationGradient(benchmark::State& state) {
    const int b = static_cast<int>(state.range(0));
    const auto tables = specvs::HarmonicTables::get(b, b);
    const auto egi = specvs::build_egi(bench::make_mug(), b);
    const auto f = specvs::sph_forward(egi, *tables).normalized();
    specvs::Rng rng(3);
    const specvs::Mat3 r =
        specvs::rotation_exp(rng.unit_vector() * 0.4);
    for (auto _ : state) {
        auto eval = specvs::so3_corr_and_grad(f, f, r, *tables);
        benchmark::DoNotOptimize(eval.value);
    }
}
BENCHMARK(CorrelationGradient)->Arg(16)->Arg(32);

void WignerDStack(benchmark::State& state) {
    const int l_max = static_cast<int>(state.range(0));
    for (auto _ : state) {
        for (int l = 0; l < l_max; ++l) {
            auto d = specvs::wigner_d(l, 0.9);
            benchmark::DoNotOptimize(d.data());
        }
    }
}
BENCHMARK(WignerDStack)->Arg(16)->Arg(32);

}  // namespace
