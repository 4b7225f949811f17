#include <cmath>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "test_helpers.hpp"

#include "specvs/cloud_io.hpp"
#include "specvs/depth_camera.hpp"
#include "specvs/error.hpp"
#include "specvs/scene.hpp"

using namespace specvs;

TEST_CASE("synth_object: unit sphere has radial points and normals") {
    SceneObject obj;
    obj.kind = ShapeKind::kSphere;
    obj.dimensions = Vec3(1.0, 1.0, 1.0);
    obj.density = 2000.0;
    const PointCloud cloud = synth_object(obj, 3);
    REQUIRE(cloud.has_normals());
    for (size_t i = 0; i < cloud.size(); ++i) {
        CHECK(cloud.points[i].norm() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK((cloud.normals[i] - cloud.points[i].normalized()).norm() < 1e-9);
    }
}

TEST_CASE("synth_object: box normals are axis-aligned in the box frame") {
    SceneObject obj;
    obj.kind = ShapeKind::kBox;
    obj.dimensions = Vec3(0.2, 0.1, 0.3);
    obj.density = 5e4;
    const PointCloud cloud = synth_object(obj, 4);
    for (const auto& n : cloud.normals) {
        int axis_hits = 0;
        for (int a = 0; a < 3; ++a)
            if (std::abs(std::abs(n[a]) - 1.0) < 1e-12) ++axis_hits;
        CHECK(axis_hits == 1);
        CHECK(n.norm() == doctest::Approx(1.0));
    }
}

TEST_CASE("synth_object: posed cylinder respects its pose") {
    SceneObject obj;
    obj.kind = ShapeKind::kCylinder;
    obj.dimensions = Vec3(0.05, 0.05, 0.2);
    obj.density = 5e4;
    obj.pose.translation = Vec3(1.0, 2.0, 3.0);
    const PointCloud cloud = synth_object(obj, 5);
    const Vec3 c = centroid(cloud);
    CHECK((c - Vec3(1.0, 2.0, 3.0)).norm() < 0.01);
}

TEST_CASE("synth_object: superellipsoid points satisfy the implicit equation") {
    SceneObject obj;
    obj.kind = ShapeKind::kSuperellipsoid;
    obj.dimensions = Vec3(0.06, 0.04, 0.08);
    obj.exponent_ns = 0.6;
    obj.exponent_ew = 1.4;
    obj.density = 4e4;
    const PointCloud cloud = synth_object(obj, 6);
    CHECK(cloud.size() > 100);
    for (const auto& p : cloud.points) {
        const double fx = std::pow(std::abs(p.x() / 0.06), 2.0 / obj.exponent_ew);
        const double fy = std::pow(std::abs(p.y() / 0.04), 2.0 / obj.exponent_ew);
        const double fz = std::pow(std::abs(p.z() / 0.08), 2.0 / obj.exponent_ns);
        const double implicit =
            std::pow(fx + fy, obj.exponent_ew / obj.exponent_ns) + fz;
        CHECK(implicit == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("synth_object: mesh sampling skips degenerate triangles") {
    const std::string path = helpers::temp_dir("mesh") + "/tri.ply";
    std::ofstream out(path);
    out << "ply\nformat ascii 1.0\nelement vertex 4\n"
           "property float x\nproperty float y\nproperty float z\n"
           "element face 3\nproperty list uchar int vertex_indices\nend_header\n"
           "0 0 0\n1 0 0\n0 1 0\n1 1 0\n"
           "3 0 1 2\n3 1 3 2\n3 0 0 0\n";  // last face has zero area
    out.close();

    SceneObject obj;
    obj.kind = ShapeKind::kMesh;
    obj.mesh_path = path;
    obj.density = 1e4;
    const PointCloud cloud = synth_object(obj, 7);
    CHECK(cloud.size() > 100);
    for (const auto& p : cloud.points) {
        CHECK(p.z() == doctest::Approx(0.0));
        CHECK(p.x() >= -1e-9);
        CHECK(p.x() <= 1.0 + 1e-9);
    }
    for (const auto& n : cloud.normals) CHECK(std::abs(n.z()) == doctest::Approx(1.0));
}

TEST_CASE("make_clutter: determinism and composition") {
    auto objects = helpers::mug_objects(5e4);

    const PointCloud a = make_clutter(objects, 99);
    const PointCloud b = make_clutter(objects, 99);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a.points[i] == b.points[i]);
        CHECK(a.normals[i] == b.normals[i]);
    }

    const PointCloud single = make_clutter({objects[0]}, 42);
    const PointCloud direct = synth_object(objects[0], 42);
    REQUIRE(single.size() == direct.size());
    for (size_t i = 0; i < single.size(); ++i) CHECK(single.points[i] == direct.points[i]);

    size_t total = 0;
    for (size_t i = 0; i < objects.size(); ++i)
        total += synth_object(objects[i], i == 0 ? 7 : mix_seed(7, i)).size();
    CHECK(make_clutter(objects, 7).size() == total);
}

TEST_CASE("capture: sphere seen from outside keeps the near side, removes the far side") {
    SceneObject obj;
    obj.kind = ShapeKind::kSphere;
    obj.dimensions = Vec3(0.5, 0.5, 0.5);
    obj.density = 4000.0;
    const PointCloud sphere = synth_object(obj, 8);

    CameraModel cam;
    cam.pose.translation = Vec3(0.0, 0.0, -2.0);  // looking +z toward the sphere
    cam.fov_h = 1.2;
    cam.fov_v = 1.2;
    cam.max_range = 10.0;
    cam.noise_sigma = 0.0;
    const PointCloud view = capture(sphere, cam, 0);

    // Ray-visibility oracle: a sphere point is visible from c iff it is on
    // the near side, i.e. the ray from the camera hits it before the
    // interior. For a sphere that is exactly n . (p - c) < 0.
    int wrong = 0;
    int clearly_near = 0, clearly_near_kept = 0;
    std::vector<char> kept(sphere.size(), 0);
    for (size_t i = 0; i < sphere.size(); ++i)
        for (const auto& q : view.points)
            if ((q - sphere.points[i]).norm() < 1e-12) kept[i] = 1;
    for (size_t i = 0; i < sphere.size(); ++i) {
        const Vec3 to_point = sphere.points[i] - cam.pose.translation;
        const double facing = sphere.normals[i].dot(to_point);
        // Skip the silhouette band where flip visibility is approximate.
        if (std::abs(facing) < 0.1 * to_point.norm()) continue;
        const bool visible_oracle = facing < 0.0;
        if (visible_oracle) {
            ++clearly_near;
            if (kept[i]) ++clearly_near_kept;
        } else if (kept[i]) {
            ++wrong;  // far-side point leaked through
        }
    }
    CHECK(wrong == 0);
    CHECK(clearly_near_kept > 0.9 * clearly_near);
}

TEST_CASE("capture: sigma = 0 output is a subset of the scene") {
    const PointCloud mug = helpers::make_mug(17, 5e4);
    CameraModel cam;
    cam.pose.translation = Vec3(0.0, 0.0, -0.8);
    cam.noise_sigma = 0.0;
    const PointCloud view = capture(mug, cam, 3);
    CHECK(view.size() > 0);
    CHECK(view.size() < mug.size());
    for (const auto& q : view.points) {
        bool found = false;
        for (const auto& p : mug.points)
            if ((p - q).norm() < 1e-12) {
                found = true;
                break;
            }
        CHECK(found);
    }
}

TEST_CASE("capture: camera facing away gives empty-view") {
    const PointCloud mug = helpers::make_mug(19, 2e4);
    CameraModel cam;
    cam.pose.translation = Vec3(0.0, 0.0, 1.0);  // mug sits near the origin, camera looks +z
    CHECK_THROWS_WITH_AS(capture(mug, cam, 0), doctest::Contains("empty-view"), InvalidArgument);
}

TEST_CASE("capture: determinism and noise statistics") {
    const PointCloud mug = helpers::make_mug(23, 2e5);
    CameraModel cam;
    cam.pose.translation = Vec3(0.0, 0.0, -0.9);
    cam.noise_sigma = 0.002;

    const PointCloud a = capture(mug, cam, 11);
    const PointCloud b = capture(mug, cam, 11);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a.points[i] == b.points[i]);

    // Injected ray perturbations: measure the sample standard deviation.
    cam.noise_sigma = 0.0;
    const PointCloud clean = capture(mug, cam, 11);
    cam.noise_sigma = 0.002;
    const PointCloud noisy = capture(mug, cam, 11);
    REQUIRE(clean.size() == noisy.size());
    REQUIRE(clean.size() >= 10000);
    double sum_sq = 0.0;
    for (size_t i = 0; i < clean.size(); ++i)
        sum_sq += (noisy.points[i] - clean.points[i]).squaredNorm();
    const double sample_sigma = std::sqrt(sum_sq / clean.size());
    CHECK(std::abs(sample_sigma - cam.noise_sigma) < 0.05 * cam.noise_sigma);
}

TEST_CASE("capture: camera frame output expresses points in camera coordinates") {
    const PointCloud mug = helpers::make_mug(29, 5e4);
    CameraModel cam;
    cam.pose.translation = Vec3(0.2, -0.1, -0.7);
    cam.pose.rotation = rot_y(0.2);
    cam.noise_sigma = 0.0;
    const PointCloud world_view = capture(mug, cam, 5, CaptureFrame::kWorld);
    const PointCloud cam_view = capture(mug, cam, 5, CaptureFrame::kCamera);
    REQUIRE(world_view.size() == cam_view.size());
    CHECK(cam_view.frame_id == "camera");
    const RigidTransform inv = cam.pose.inverse();
    for (size_t i = 0; i < world_view.size(); ++i)
        CHECK((inv.apply(world_view.points[i]) - cam_view.points[i]).norm() < 1e-12);
}

TEST_CASE("load_scene: parses objects, camera, and servo blocks") {
    const std::string path = helpers::temp_dir("scene") + "/scene.json";
    std::ofstream out(path);
    out << R"({
  "objects": [
    {"kind": "cylinder", "dimensions": [0.05, 0.05, 0.12],
     "pose": {"xyz": [0.1, 0.0, 0.0], "zyz": [0.0, 0.0, 0.0]}, "density": 10000},
    {"kind": "superellipsoid", "dimensions": [0.05, 0.03, 0.04],
     "exponent_ns": 0.7, "exponent_ew": 1.2, "density": 10000}
  ],
  "camera": {"pose": {"xyz": [0, 0, -1]}, "fov_h": 1.1, "fov_v": 0.9,
             "min_range": 0.1, "max_range": 3.0, "noise_sigma": 0.001},
  "servo": {"goal_joints": [0, 0.4, 0, -1.4, 0, 1.0, 0],
            "start_offset": {"xyz": [0.1, 0.05, 0], "zyz": [0.35, 0, 0]}, "dt": 0.05}
})";
    out.close();

    const Scene scene = load_scene(path);
    REQUIRE(scene.objects.size() == 2);
    CHECK(scene.objects[0].kind == ShapeKind::kCylinder);
    CHECK(scene.objects[1].exponent_ns == doctest::Approx(0.7));
    CHECK(scene.camera.fov_h == doctest::Approx(1.1));
    REQUIRE(scene.servo.has_value());
    CHECK(scene.servo->goal_joints.size() == 7);
    CHECK(scene.servo->start_offset_xyz.x() == doctest::Approx(0.1));

    CHECK(make_clutter(scene.objects, 1).size() > 0);
}

TEST_CASE("load_scene: malformed JSON reports a line-anchored parse error") {
    const std::string path = helpers::temp_dir("scene") + "/broken.json";
    std::ofstream out(path);
    out << "{\n  \"objects\": [\n    {\"kind\": }\n  ]\n}\n";
    out.close();
    CHECK_THROWS_WITH_AS(load_scene(path), doctest::Contains(":3:"), ParseError);
}

TEST_CASE("committed scene fixtures parse and build") {
    for (const char* name : {"c1_model.json", "c2_partial.json", "c3_clutter.json",
                             "servo_planar.json"}) {
        const Scene scene = load_scene(helpers::source_dir() + "/scenes/" + name);
        CHECK(!scene.objects.empty());
        const PointCloud cloud = make_clutter(scene.objects, 1);
        CHECK(cloud.size() > 500);
    }
}
