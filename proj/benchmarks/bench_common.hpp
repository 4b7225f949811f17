#pragma once

#include "specvs/point_cloud.hpp"
#include "specvs/scene.hpp"

namespace bench {

/// Cylinder + handle test object, the same shape family the tests use.
inline specvs::PointCloud make_mug(uint64_t seed = 7, double density = 3.0e5) {
    specvs::SceneObject body;
    body.kind = specvs::ShapeKind::kCylinder;
    body.dimensions = specvs::Vec3(0.045, 0.045, 0.11);
    body.density = density;

    specvs::SceneObject handle;
    handle.kind = specvs::ShapeKind::kBox;
    handle.dimensions = specvs::Vec3(0.05, 0.018, 0.07);
    handle.pose.translation = specvs::Vec3(0.07, 0.0, 0.0);
    handle.density = density;

    return specvs::make_clutter({body, handle}, seed);
}

}  // namespace bench
