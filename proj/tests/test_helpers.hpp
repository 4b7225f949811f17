#pragma once

#include <filesystem>
#include <string>

#include "specvs/point_cloud.hpp"
#include "specvs/rng.hpp"
#include "specvs/scene.hpp"

namespace helpers {

using specvs::kPi;
using specvs::PointCloud;
using specvs::SceneObject;
using specvs::ShapeKind;
using specvs::Vec3;

/// Mug-like asymmetric object: cylindrical body plus a handle slab. The
/// handle breaks the azimuthal symmetry so the rotation is observable from
/// the normal histogram.
inline std::vector<SceneObject> mug_objects(double density = 3.0e5) {
    SceneObject body;
    body.kind = ShapeKind::kCylinder;
    body.dimensions = Vec3(0.045, 0.045, 0.11);
    body.density = density;

    SceneObject handle;
    handle.kind = ShapeKind::kBox;
    handle.dimensions = Vec3(0.05, 0.018, 0.07);
    handle.pose.translation = Vec3(0.07, 0.0, 0.0);
    handle.density = density;
    return {body, handle};
}

inline PointCloud make_mug(uint64_t seed = 7, double density = 3.0e5) {
    return specvs::make_clutter(mug_objects(density), seed);
}

inline std::string source_dir() { return SPECVS_SOURCE_DIR; }

inline std::string temp_dir(const std::string& name) {
    const auto dir = std::filesystem::path(SPECVS_BINARY_DIR) / "test_tmp" / name;
    std::filesystem::create_directories(dir);
    return dir.string();
}

}  // namespace helpers
