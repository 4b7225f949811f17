#pragma once

#include <string>
#include <vector>

#include "specvs/error.hpp"
#include "specvs/rigid_transform.hpp"
#include "specvs/types.hpp"

namespace specvs {

/// Point cloud with optional per-point unit normals. Immutable by
/// convention: operations return new clouds.
struct PointCloud {
    std::vector<Vec3> points;
    std::vector<Vec3> normals;  // empty, or exactly one per point
    std::string frame_id = "world";

    size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    bool has_normals() const { return !normals.empty() && normals.size() == points.size(); }
};

inline Vec3 centroid(const PointCloud& cloud) {
    if (cloud.empty()) throw InvalidArgument("empty-cloud", "centroid of empty cloud");
    Vec3 c = Vec3::Zero();
    for (const auto& p : cloud.points) c += p;
    return c / static_cast<double>(cloud.size());
}

inline Aabb bounding_box(const PointCloud& cloud) {
    Aabb box;
    for (const auto& p : cloud.points) box.expand(p);
    return box;
}

/// Largest distance from `center` to any point.
inline double circumradius(const PointCloud& cloud, const Vec3& center) {
    double r = 0.0;
    for (const auto& p : cloud.points) r = std::max(r, (p - center).norm());
    return r;
}

enum class TransformPivot { kOrigin, kCentroid };

/// Rigid motion of a cloud: p -> R (p - c) + c + T with c the pivot
/// (world origin or the cloud centroid); normals map as n -> R n.
inline PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& h,
                                  TransformPivot pivot = TransformPivot::kOrigin) {
    PointCloud out;
    out.frame_id = cloud.frame_id;
    out.points.reserve(cloud.size());
    const Vec3 c = (pivot == TransformPivot::kCentroid && !cloud.empty()) ? centroid(cloud)
                                                                          : Vec3::Zero();
    for (const auto& p : cloud.points) out.points.push_back(h.rotation * (p - c) + c + h.translation);
    if (cloud.has_normals()) {
        out.normals.reserve(cloud.size());
        for (const auto& n : cloud.normals) out.normals.push_back(h.rotation * n);
    }
    return out;
}

/// Equivalent origin-pivot transform of a centroid-pivot motion:
/// R (p - c) + c + T  ==  R p + (c - R c + T).
inline RigidTransform pivot_to_origin(const RigidTransform& h, const Vec3& pivot) {
    return {h.rotation, pivot - h.rotation * pivot + h.translation};
}

}  // namespace specvs
