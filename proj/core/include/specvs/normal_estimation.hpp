#pragma once

#include <optional>

#include "specvs/point_cloud.hpp"

namespace specvs {

/// k-NN PCA normal estimation: each point gets the eigenvector of its
/// neighborhood covariance with the smallest eigenvalue, unit length.
/// Signs are oriented away from the cloud centroid, or toward an explicit
/// viewpoint when one is given.
///
/// Requires k >= 3 and at least k+1 points. Throws insufficient-points /
/// degenerate-covariance otherwise.
PointCloud estimate_normals(const PointCloud& cloud, int k,
                            std::optional<Vec3> viewpoint = std::nullopt);

}  // namespace specvs
