#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specvs/point_cloud.hpp"

namespace specvs {

/// Binary occupancy grid over an M x N x L lattice. `origin` is the world
/// position of the (0,0,0) voxel corner; voxel (i,j,k) spans
/// [origin + (i,j,k)*r, origin + (i+1,j+1,k+1)*r).
struct VoxelGrid {
    double resolution = 0.008;
    Vec3i dims = Vec3i::Zero();  // (M, N, L)
    Vec3 origin = Vec3::Zero();
    std::vector<uint8_t> occupancy;  // size M*N*L, x-major / z-fastest

    int64_t cell_count() const {
        return static_cast<int64_t>(dims.x()) * dims.y() * dims.z();
    }
    int64_t index(int i, int j, int k) const {
        return (static_cast<int64_t>(i) * dims.y() + j) * dims.z() + k;
    }
    bool in_bounds(int i, int j, int k) const {
        return i >= 0 && j >= 0 && k >= 0 && i < dims.x() && j < dims.y() && k < dims.z();
    }
    uint8_t at(int i, int j, int k) const { return occupancy[index(i, j, k)]; }

    int64_t occupied_count() const;

    /// World center of voxel (i,j,k).
    Vec3 voxel_center(int i, int j, int k) const {
        return origin + resolution * Vec3(i + 0.5, j + 0.5, k + 0.5);
    }
};

/// Smallest power of two >= n * (1 + pad_fraction). Keeps transform lengths
/// FFT-friendly and leaves zero margin against circular wrap-around.
int fft_friendly_dim(int n, double pad_fraction = 0.25);

struct VoxelizeOptions {
    std::optional<Aabb> bounds;     // shared lattice bounds; origin = bounds.min
    bool drop_outside = false;      // drop out-of-bounds points instead of throwing
    double pad_fraction = 0.25;     // zero padding before rounding dims up
};

/// Bin a cloud into a binary voxel grid. Without explicit bounds the origin
/// is the cloud's min corner minus half a voxel; with bounds, their min
/// corner. Point indices are floor((p - origin) / r). Dims are rounded up
/// to FFT-friendly sizes.
VoxelGrid voxelize(const PointCloud& cloud, double resolution,
                   const VoxelizeOptions& options = {});

/// Cloud of occupied-voxel centers (normals absent).
PointCloud voxel_centers(const VoxelGrid& grid);

/// Debug dump: one "i,j,k,value" row per occupied voxel.
void write_voxel_csv(const std::string& path, const VoxelGrid& grid);

}  // namespace specvs
