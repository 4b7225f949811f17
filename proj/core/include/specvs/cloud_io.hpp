#pragma once

#include <array>
#include <string>
#include <vector>

#include "specvs/point_cloud.hpp"

namespace specvs {

enum class CloudFormat { kPlyAscii, kPcdAscii };

/// Format deduced from the file extension (.ply / .pcd).
CloudFormat format_from_path(const std::string& path);

/// Load an ASCII PLY or PCD point cloud. Normals are returned when the file
/// carries nx/ny/nz (PLY) or normal_x/... (PCD) fields. frame_id is "world".
PointCloud load_cloud(const std::string& path, CloudFormat format);
PointCloud load_cloud(const std::string& path);  // format from extension

/// Write the same ASCII dialects the loader accepts.
void save_cloud(const std::string& path, const PointCloud& cloud, CloudFormat format);
void save_cloud(const std::string& path, const PointCloud& cloud);

/// Triangle mesh, used by the sample-from-mesh scene object.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
};

/// Load an ASCII PLY mesh (element vertex + element face with
/// vertex_indices). Non-triangle faces are fan-triangulated.
TriMesh load_mesh_ply(const std::string& path);

}  // namespace specvs
