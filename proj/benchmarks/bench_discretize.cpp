#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "specvs/egi.hpp"
#include "specvs/voxel_grid.hpp"

namespace {

void VoxelizeMug(benchmark::State& state) {
    const specvs::PointCloud mug = bench::make_mug();
    for (auto _ : state) {
        auto grid = specvs::voxelize(mug, 0.008);
        benchmark::DoNotOptimize(grid.occupancy.data());
    }
}
BENCHMARK(VoxelizeMug);

void BuildEgiMug(benchmark::State& state) {
    const specvs::PointCloud mug = bench::make_mug();
    for (auto _ : state) {
        auto egi = specvs::build_egi(mug, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(egi.counts.data());
    }
}
BENCHMARK(BuildEgiMug)->Arg(16)->Arg(32);

}  // namespace
