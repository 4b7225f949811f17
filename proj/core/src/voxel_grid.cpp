#include "specvs/voxel_grid.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>

#include "specvs/error.hpp"

namespace specvs {

int64_t VoxelGrid::occupied_count() const {
    return std::accumulate(occupancy.begin(), occupancy.end(), int64_t{0});
}

int fft_friendly_dim(int n, double pad_fraction) {
    const int target = static_cast<int>(std::ceil(n * (1.0 + pad_fraction)));
    int p = 1;
    while (p < target) p *= 2;
    return p;
}

VoxelGrid voxelize(const PointCloud& cloud, double resolution, const VoxelizeOptions& options) {
    if (cloud.empty()) throw InvalidArgument("empty-cloud", "voxelize requires a non-empty cloud");
    if (!(resolution > 0.0)) throw InvalidArgument("bad-resolution", "resolution must be > 0");

    VoxelGrid grid;
    grid.resolution = resolution;

    Aabb box;
    if (options.bounds) {
        box = *options.bounds;
    } else {
        box = bounding_box(cloud);
        // Half-voxel padding keeps min-corner points strictly interior.
        box.min -= Vec3::Constant(resolution / 2.0);
    }
    grid.origin = box.min;

    Vec3i raw;
    for (int a = 0; a < 3; ++a) {
        raw[a] = std::max(1, static_cast<int>(std::ceil((box.max[a] - box.min[a]) / resolution)));
        grid.dims[a] = fft_friendly_dim(raw[a], options.pad_fraction);
    }

    grid.occupancy.assign(grid.cell_count(), 0);
    for (const auto& p : cloud.points) {
        Vec3i idx;
        bool outside = false;
        for (int a = 0; a < 3; ++a) {
            int v = static_cast<int>(std::floor((p[a] - grid.origin[a]) / resolution));
            // A point exactly on the upper bounds face belongs to the last voxel.
            if (v == raw[a] && p[a] <= box.max[a] + 1e-12 * resolution) v = raw[a] - 1;
            if (v < 0 || v >= raw[a]) outside = true;
            idx[a] = v;
        }
        // Points are tested against the requested bounds, not the padded dims.
        if (outside) {
            if (options.bounds && !options.drop_outside)
                throw InvalidArgument("point-outside-bounds",
                                      "point lies outside the explicit voxelization bounds");
            continue;
        }
        grid.occupancy[grid.index(idx.x(), idx.y(), idx.z())] = 1;
    }
    return grid;
}

PointCloud voxel_centers(const VoxelGrid& grid) {
    PointCloud cloud;
    for (int i = 0; i < grid.dims.x(); ++i)
        for (int j = 0; j < grid.dims.y(); ++j)
            for (int k = 0; k < grid.dims.z(); ++k)
                if (grid.at(i, j, k)) cloud.points.push_back(grid.voxel_center(i, j, k));
    if (cloud.empty()) throw InvalidArgument("empty-cloud", "grid has no occupied voxels");
    return cloud;
}

void write_voxel_csv(const std::string& path, const VoxelGrid& grid) {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(path.c_str(), "w"), std::fclose);
    if (!f) throw IoError("cannot write '" + path + "'");
    std::fprintf(f.get(), "i,j,k,value\n");
    for (int i = 0; i < grid.dims.x(); ++i)
        for (int j = 0; j < grid.dims.y(); ++j)
            for (int k = 0; k < grid.dims.z(); ++k)
                if (grid.at(i, j, k)) std::fprintf(f.get(), "%d,%d,%d,1\n", i, j, k);
}

}  // namespace specvs
