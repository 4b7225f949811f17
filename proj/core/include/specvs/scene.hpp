#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specvs/point_cloud.hpp"
#include "specvs/rigid_transform.hpp"

namespace specvs {

enum class ShapeKind { kSphere, kBox, kCylinder, kSuperellipsoid, kMesh };

/// Synthetic scene object: an analytic surface (or mesh) posed in the world,
/// surface-sampled at `density` points per square meter.
struct SceneObject {
    ShapeKind kind = ShapeKind::kSphere;
    // sphere: x = radius; box: full edge lengths; cylinder: x = radius,
    // z = height; superellipsoid: semi-axes.
    Vec3 dimensions = Vec3::Ones();
    double exponent_ns = 1.0;  // superellipsoid north-south shape exponent
    double exponent_ew = 1.0;  // superellipsoid east-west shape exponent
    RigidTransform pose;
    double density = 2.0e5;
    std::string mesh_path;  // for ShapeKind::kMesh
};

/// Simulated depth camera. The camera looks along its +z axis; x is right,
/// y is down-ish image vertical.
struct CameraModel {
    RigidTransform pose;
    double fov_h = 1.2;        // full horizontal field of view, radians
    double fov_v = 1.0;        // full vertical field of view, radians
    double min_range = 0.05;   // meters
    double max_range = 5.0;    // meters
    double noise_sigma = 0.001;  // Gaussian depth noise along the ray, meters
    double hpr_radius_scale = 20.0;  // spherical-flip radius / max point range

    void validate() const;
};

/// Servo experiment description embedded in a scene file.
struct ServoSetup {
    VecX goal_joints;
    Vec3 start_offset_xyz = Vec3::Zero();
    Vec3 start_offset_zyz = Vec3::Zero();  // alpha, beta, gamma
    double dt = 0.05;
};

struct Scene {
    std::vector<SceneObject> objects;
    CameraModel camera;
    std::optional<ServoSetup> servo;
};

/// Surface-sample one object with analytic normals, posed by obj.pose.
/// Deterministic for a given (object, seed).
PointCloud synth_object(const SceneObject& obj, uint64_t seed = 0);

/// Merged cloud of all objects; object i is sampled with seed
/// mix(seed, i) except the first, which uses `seed` itself, so a
/// single-object clutter equals synth_object(obj, seed). Overlaps union.
PointCloud make_clutter(const std::vector<SceneObject>& objects, uint64_t seed);

/// Parse a scene description JSON file (objects + camera [+ servo]).
Scene load_scene(const std::string& path);

}  // namespace specvs
