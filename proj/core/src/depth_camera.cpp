#include "specvs/depth_camera.hpp"

#include <cmath>

#include "convex_hull.hpp"
#include "specvs/error.hpp"
#include "specvs/rng.hpp"

namespace specvs {

PointCloud capture(const PointCloud& scene, const CameraModel& cam, uint64_t seed,
                   CaptureFrame frame) {
    if (scene.empty()) throw InvalidArgument("empty-cloud", "capture requires a non-empty scene");
    cam.validate();

    const RigidTransform to_cam = cam.pose.inverse();
    const bool with_normals = scene.has_normals();

    // Frustum culling in the camera frame (+z forward).
    std::vector<Vec3> pts;
    std::vector<Vec3> nrm;
    pts.reserve(scene.size());
    for (size_t i = 0; i < scene.size(); ++i) {
        const Vec3 p = to_cam.apply(scene.points[i]);
        if (p.z() < cam.min_range || p.z() > cam.max_range) continue;
        if (std::abs(std::atan2(p.x(), p.z())) > cam.fov_h / 2.0) continue;
        if (std::abs(std::atan2(p.y(), p.z())) > cam.fov_v / 2.0) continue;
        pts.push_back(p);
        if (with_normals) nrm.push_back(to_cam.rotation * scene.normals[i]);
    }
    if (pts.empty()) throw InvalidArgument("empty-view", "no scene points inside the frustum");

    // Spherical-flip visibility: invert ranges about a large sphere and keep
    // points whose image lies on the convex hull of the flipped set plus the
    // camera center.
    double max_range = 0.0;
    for (const auto& p : pts) max_range = std::max(max_range, p.norm());
    const double radius = cam.hpr_radius_scale * max_range;

    std::vector<Vec3> flipped;
    flipped.reserve(pts.size() + 1);
    for (const auto& p : pts) {
        const double r = p.norm();
        flipped.push_back(r > 1e-12 ? Vec3(p * (2.0 * radius / r - 1.0)) : p);
    }
    flipped.push_back(Vec3::Zero());  // the camera center itself

    const auto hull = detail::convex_hull_vertices(flipped);
    std::vector<char> visible(pts.size(), 0);
    for (int idx : hull)
        if (idx < static_cast<int>(pts.size())) visible[idx] = 1;

    Rng rng(seed);
    PointCloud out;
    out.frame_id = frame == CaptureFrame::kCamera ? "camera" : scene.frame_id;
    for (size_t i = 0; i < pts.size(); ++i) {
        if (!visible[i]) continue;
        Vec3 p = pts[i];
        if (cam.noise_sigma > 0.0) {
            const double r = p.norm();
            if (r > 1e-12) p += rng.normal(0.0, cam.noise_sigma) * (p / r);
        }
        if (frame == CaptureFrame::kWorld) {
            out.points.push_back(cam.pose.apply(p));
            if (with_normals) out.normals.push_back(cam.pose.rotation * nrm[i]);
        } else {
            out.points.push_back(p);
            if (with_normals) out.normals.push_back(nrm[i]);
        }
    }
    if (out.points.empty())
        throw InvalidArgument("empty-view", "no scene points visible after hidden-point removal");
    return out;
}

}  // namespace specvs
