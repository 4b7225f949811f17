#pragma once

#include <vector>

#include "specvs/types.hpp"

namespace specvs::detail {

/// Indices of the input points that are vertices of their 3D convex hull
/// (quickhull). Degenerate inputs (< 4 points, or all coplanar within
/// tolerance) return every index.
std::vector<int> convex_hull_vertices(const std::vector<Vec3>& points);

}  // namespace specvs::detail
