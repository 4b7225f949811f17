#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "specvs/align.hpp"

namespace {

// One-shot alignment of a displaced mug; tracks the per-iteration cost that
// the acceptance speed criterion constrains.
void AlignIteration(benchmark::State& state) {
    const specvs::PointCloud mug = bench::make_mug();
    specvs::RigidTransform h;
    h.rotation = specvs::rot_z(0.4);
    h.translation = specvs::Vec3(0.05, -0.03, 0.02);
    const specvs::PointCloud target =
        specvs::apply_transform(mug, h, specvs::TransformPivot::kCentroid);

    specvs::ControllerConfig cfg;
    cfg.max_iters = 8;  // time a fixed number of iterations per run
    cfg.eps_g = 1e-300;
    for (auto _ : state) {
        auto result = specvs::align(mug, target, cfg);
        benchmark::DoNotOptimize(result.trace.data());
    }
    state.SetItemsProcessed(state.iterations() * cfg.max_iters);
}
BENCHMARK(AlignIteration)->Unit(benchmark::kMillisecond);

}  // namespace
