#include "specvs/scene.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "specvs/cloud_io.hpp"
#include "specvs/error.hpp"
#include "specvs/rng.hpp"

namespace specvs {
namespace {

using nlohmann::json;

int count_from_area(double area, double density) {
    return std::max(1, static_cast<int>(std::lround(area * density)));
}

PointCloud sample_sphere(const SceneObject& obj, Rng& rng) {
    const double r = obj.dimensions.x();
    const int n = count_from_area(4.0 * kPi * r * r, obj.density);
    PointCloud cloud;
    cloud.points.reserve(n);
    cloud.normals.reserve(n);
    for (int i = 0; i < n; ++i) {
        const Vec3 dir = rng.unit_vector();
        cloud.points.push_back(r * dir);
        cloud.normals.push_back(dir);
    }
    return cloud;
}

PointCloud sample_box(const SceneObject& obj, Rng& rng) {
    const Vec3 e = obj.dimensions;  // full extents
    const double face_areas[3] = {e.y() * e.z(), e.x() * e.z(), e.x() * e.y()};
    PointCloud cloud;
    for (int axis = 0; axis < 3; ++axis) {
        for (int side = -1; side <= 1; side += 2) {
            const int n = count_from_area(face_areas[axis], obj.density);
            const int u = (axis + 1) % 3;
            const int v = (axis + 2) % 3;
            for (int i = 0; i < n; ++i) {
                Vec3 p;
                p[axis] = side * e[axis] / 2.0;
                p[u] = rng.uniform(-e[u] / 2.0, e[u] / 2.0);
                p[v] = rng.uniform(-e[v] / 2.0, e[v] / 2.0);
                Vec3 normal = Vec3::Zero();
                normal[axis] = side;
                cloud.points.push_back(p);
                cloud.normals.push_back(normal);
            }
        }
    }
    return cloud;
}

PointCloud sample_cylinder(const SceneObject& obj, Rng& rng) {
    const double r = obj.dimensions.x();
    const double h = obj.dimensions.z();
    PointCloud cloud;
    const int n_side = count_from_area(2.0 * kPi * r * h, obj.density);
    for (int i = 0; i < n_side; ++i) {
        const double phi = rng.uniform(0.0, 2.0 * kPi);
        const double z = rng.uniform(-h / 2.0, h / 2.0);
        cloud.points.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
        cloud.normals.emplace_back(std::cos(phi), std::sin(phi), 0.0);
    }
    for (int side = -1; side <= 1; side += 2) {
        const int n_cap = count_from_area(kPi * r * r, obj.density);
        for (int i = 0; i < n_cap; ++i) {
            const double rad = r * std::sqrt(rng.uniform());
            const double phi = rng.uniform(0.0, 2.0 * kPi);
            cloud.points.emplace_back(rad * std::cos(phi), rad * std::sin(phi),
                                      side * h / 2.0);
            cloud.normals.emplace_back(0.0, 0.0, static_cast<double>(side));
        }
    }
    return cloud;
}

double sgn_pow(double v, double e) { return std::copysign(std::pow(std::abs(v), e), v); }

Vec3 superellipsoid_point(const Vec3& ax, double ns, double ew, double eta, double omega) {
    const double ce = std::cos(eta), se = std::sin(eta);
    const double co = std::cos(omega), so = std::sin(omega);
    return {ax.x() * sgn_pow(ce, ns) * sgn_pow(co, ew),
            ax.y() * sgn_pow(ce, ns) * sgn_pow(so, ew),
            ax.z() * sgn_pow(se, ns)};
}

PointCloud sample_superellipsoid(const SceneObject& obj, Rng& rng) {
    const Vec3 ax = obj.dimensions;
    const double ns = obj.exponent_ns, ew = obj.exponent_ew;
    // Rejection sampling in parameter space, weighted by the local area
    // element so the surface density is uniform.
    const auto area_element = [&](double eta, double omega) {
        const double d = 1e-5;
        const Vec3 de = (superellipsoid_point(ax, ns, ew, eta + d, omega) -
                         superellipsoid_point(ax, ns, ew, eta - d, omega)) /
                        (2.0 * d);
        const Vec3 dw = (superellipsoid_point(ax, ns, ew, eta, omega + d) -
                         superellipsoid_point(ax, ns, ew, eta, omega - d)) /
                        (2.0 * d);
        return de.cross(dw).norm();
    };
    double max_area = 1e-12;
    double total_area = 0.0;
    const int grid = 24;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const double eta = -kPi / 2.0 + kPi * (i + 0.5) / grid;
            const double omega = -kPi + 2.0 * kPi * (j + 0.5) / grid;
            const double a = area_element(eta, omega);
            max_area = std::max(max_area, a);
            total_area += a * (kPi / grid) * (2.0 * kPi / grid);
        }
    const int n = count_from_area(total_area, obj.density);

    PointCloud cloud;
    cloud.points.reserve(n);
    cloud.normals.reserve(n);
    int guard = 0;
    while (static_cast<int>(cloud.points.size()) < n && guard < 200 * n) {
        ++guard;
        const double eta = rng.uniform(-kPi / 2.0, kPi / 2.0);
        const double omega = rng.uniform(-kPi, kPi);
        const double a = area_element(eta, omega);
        if (rng.uniform() * max_area * 1.05 > a) continue;
        const double d = 1e-5;
        const Vec3 de = (superellipsoid_point(ax, ns, ew, eta + d, omega) -
                         superellipsoid_point(ax, ns, ew, eta - d, omega));
        const Vec3 dw = (superellipsoid_point(ax, ns, ew, eta, omega + d) -
                         superellipsoid_point(ax, ns, ew, eta, omega - d));
        Vec3 normal = de.cross(dw);
        if (normal.norm() < 1e-14) continue;
        normal.normalize();
        const Vec3 p = superellipsoid_point(ax, ns, ew, eta, omega);
        if (normal.dot(p) < 0.0) normal = -normal;  // outward for a star-shaped body
        cloud.points.push_back(p);
        cloud.normals.push_back(normal);
    }
    return cloud;
}

PointCloud sample_mesh(const SceneObject& obj, Rng& rng) {
    if (obj.mesh_path.empty())
        throw InvalidArgument("unsupported-shape", "mesh object lacks mesh_path");
    const TriMesh mesh = load_mesh_ply(obj.mesh_path);
    std::vector<double> areas;
    std::vector<Vec3> normals;
    double total = 0.0;
    int degenerate = 0;
    for (const auto& tri : mesh.triangles) {
        const Vec3 ab = mesh.vertices[tri[1]] - mesh.vertices[tri[0]];
        const Vec3 ac = mesh.vertices[tri[2]] - mesh.vertices[tri[0]];
        const Vec3 cross = ab.cross(ac);
        const double area = 0.5 * cross.norm();
        if (area < 1e-14) {
            ++degenerate;
            areas.push_back(0.0);
            normals.emplace_back(0.0, 0.0, 1.0);
            continue;
        }
        areas.push_back(area);
        normals.push_back(cross.normalized());
        total += area;
    }
    if (degenerate > 0)
        std::fprintf(stderr, "warning: skipped %d zero-area triangles in '%s'\n", degenerate,
                     obj.mesh_path.c_str());
    if (total <= 0.0)
        throw InvalidArgument("unsupported-shape", "mesh has no usable triangles");

    std::vector<double> cdf(areas.size());
    double acc = 0.0;
    for (size_t i = 0; i < areas.size(); ++i) {
        acc += areas[i];
        cdf[i] = acc;
    }
    const int n = count_from_area(total, obj.density);
    PointCloud cloud;
    cloud.points.reserve(n);
    cloud.normals.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double pick = rng.uniform() * total;
        const size_t t = std::lower_bound(cdf.begin(), cdf.end(), pick) - cdf.begin();
        const auto& tri = mesh.triangles[t];
        double u = rng.uniform(), v = rng.uniform();
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        cloud.points.push_back(mesh.vertices[tri[0]] +
                               u * (mesh.vertices[tri[1]] - mesh.vertices[tri[0]]) +
                               v * (mesh.vertices[tri[2]] - mesh.vertices[tri[0]]));
        cloud.normals.push_back(normals[t]);
    }
    return cloud;
}

RigidTransform pose_from_json(const json& j, const std::string& path) {
    RigidTransform t;
    if (j.contains("xyz")) {
        const auto& v = j.at("xyz");
        if (!v.is_array() || v.size() != 3) throw FormatError(path + ": pose xyz must be [x,y,z]");
        t.translation = Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
    }
    if (j.contains("zyz")) {
        const auto& v = j.at("zyz");
        if (!v.is_array() || v.size() != 3)
            throw FormatError(path + ": pose zyz must be [alpha,beta,gamma]");
        t.rotation = euler_zyz_to_rot(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
    }
    return t;
}

ShapeKind kind_from_string(const std::string& s, const std::string& path) {
    if (s == "sphere") return ShapeKind::kSphere;
    if (s == "box") return ShapeKind::kBox;
    if (s == "cylinder") return ShapeKind::kCylinder;
    if (s == "superellipsoid") return ShapeKind::kSuperellipsoid;
    if (s == "mesh") return ShapeKind::kMesh;
    throw FormatError(path + ": unknown shape kind '" + s + "'");
}

}  // namespace

void CameraModel::validate() const {
    if (!(fov_h > 0.0 && fov_h < kPi) || !(fov_v > 0.0 && fov_v < kPi))
        throw InvalidArgument("bad-camera", "field of view must lie in (0, pi)");
    if (!(min_range > 0.0 && min_range < max_range))
        throw InvalidArgument("bad-camera", "need 0 < min_range < max_range");
    if (noise_sigma < 0.0) throw InvalidArgument("bad-camera", "noise sigma must be >= 0");
}

PointCloud synth_object(const SceneObject& obj, uint64_t seed) {
    if ((obj.dimensions.array() <= 0.0).any())
        throw InvalidArgument("unsupported-shape", "object dimensions must be positive");
    if (obj.density <= 0.0)
        throw InvalidArgument("unsupported-shape", "sampling density must be positive");

    Rng rng(seed);
    PointCloud local;
    switch (obj.kind) {
        case ShapeKind::kSphere: local = sample_sphere(obj, rng); break;
        case ShapeKind::kBox: local = sample_box(obj, rng); break;
        case ShapeKind::kCylinder: local = sample_cylinder(obj, rng); break;
        case ShapeKind::kSuperellipsoid: local = sample_superellipsoid(obj, rng); break;
        case ShapeKind::kMesh: local = sample_mesh(obj, rng); break;
        default: throw InvalidArgument("unsupported-shape", "unknown shape kind");
    }
    return apply_transform(local, obj.pose);
}

PointCloud make_clutter(const std::vector<SceneObject>& objects, uint64_t seed) {
    if (objects.empty()) throw InvalidArgument("empty-cloud", "clutter needs at least one object");
    PointCloud merged;
    for (size_t i = 0; i < objects.size(); ++i) {
        const uint64_t object_seed = i == 0 ? seed : mix_seed(seed, i);
        PointCloud part = synth_object(objects[i], object_seed);
        merged.points.insert(merged.points.end(), part.points.begin(), part.points.end());
        merged.normals.insert(merged.normals.end(), part.normals.begin(), part.normals.end());
    }
    return merged;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        // nlohmann reports byte offsets; surface the line by counting.
        std::ifstream again(path);
        std::string text((std::istreambuf_iterator<char>(again)),
                         std::istreambuf_iterator<char>());
        long line = 1;
        for (size_t i = 0; i < std::min(text.size(), e.byte); ++i)
            if (text[i] == '\n') ++line;
        throw ParseError(path, line, e.what());
    }

    Scene scene;
    try {
        if (!doc.contains("objects") || !doc.at("objects").is_array())
            throw FormatError(path + ": missing 'objects' array");
        for (const auto& jo : doc.at("objects")) {
            SceneObject obj;
            obj.kind = kind_from_string(jo.at("kind").get<std::string>(), path);
            if (jo.contains("dimensions")) {
                const auto& v = jo.at("dimensions");
                obj.dimensions = Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
            }
            if (jo.contains("pose")) obj.pose = pose_from_json(jo.at("pose"), path);
            if (jo.contains("density")) obj.density = jo.at("density").get<double>();
            if (jo.contains("exponent_ns")) obj.exponent_ns = jo.at("exponent_ns").get<double>();
            if (jo.contains("exponent_ew")) obj.exponent_ew = jo.at("exponent_ew").get<double>();
            if (jo.contains("mesh_path")) obj.mesh_path = jo.at("mesh_path").get<std::string>();
            scene.objects.push_back(obj);
        }
        if (doc.contains("camera")) {
            const auto& jc = doc.at("camera");
            if (jc.contains("pose")) scene.camera.pose = pose_from_json(jc.at("pose"), path);
            if (jc.contains("fov_h")) scene.camera.fov_h = jc.at("fov_h").get<double>();
            if (jc.contains("fov_v")) scene.camera.fov_v = jc.at("fov_v").get<double>();
            if (jc.contains("min_range")) scene.camera.min_range = jc.at("min_range").get<double>();
            if (jc.contains("max_range")) scene.camera.max_range = jc.at("max_range").get<double>();
            if (jc.contains("noise_sigma"))
                scene.camera.noise_sigma = jc.at("noise_sigma").get<double>();
            if (jc.contains("hpr_radius_scale"))
                scene.camera.hpr_radius_scale = jc.at("hpr_radius_scale").get<double>();
            scene.camera.validate();
        }
        if (doc.contains("servo")) {
            const auto& js = doc.at("servo");
            ServoSetup setup;
            const auto& goals = js.at("goal_joints");
            setup.goal_joints = VecX(goals.size());
            for (size_t i = 0; i < goals.size(); ++i) setup.goal_joints(i) = goals[i].get<double>();
            if (js.contains("start_offset")) {
                const auto& so = js.at("start_offset");
                if (so.contains("xyz")) {
                    const auto& v = so.at("xyz");
                    setup.start_offset_xyz =
                        Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
                }
                if (so.contains("zyz")) {
                    const auto& v = so.at("zyz");
                    setup.start_offset_zyz =
                        Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
                }
            }
            if (js.contains("dt")) setup.dt = js.at("dt").get<double>();
            scene.servo = setup;
        }
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    return scene;
}

}  // namespace specvs
