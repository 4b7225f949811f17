#include "specvs/servo_loop.hpp"

#include <chrono>
#include <future>

#include "specvs/egi.hpp"
#include "specvs/error.hpp"
#include "specvs/phase_correlation.hpp"
#include "specvs/rng.hpp"
#include "specvs/so3_transform.hpp"
#include "specvs/voxel_grid.hpp"

namespace specvs {

ServoResult servo_loop(const PointCloud& scene, const SimRobot& robot,
                       const PointCloud& reference_capture, const ControllerConfig& cfg,
                       const ServoOptions& options) {
    cfg.validate();
    if (scene.empty() || reference_capture.empty())
        throw InvalidArgument("empty-cloud", "servo loop requires non-empty clouds");
    if (!scene.has_normals() || !reference_capture.has_normals())
        throw InvalidArgument("missing-normals", "servo loop requires clouds with normals");
    if (reference_capture.frame_id != "camera")
        throw InvalidArgument("bad-config", "reference capture must be in the camera frame");

    const auto tables = HarmonicTables::get(cfg.bandwidth, cfg.effective_l_max());

    ServoResult result;
    VecX q = robot.joint_angles;

    CameraModel cam = options.camera;

    // Shared lattice: the union of the reference view and the start view,
    // padded so intermediate views stay inside while the camera converges.
    cam.pose = robot.camera_pose(q);
    const PointCloud start_capture =
        capture(scene, cam, mix_seed(options.seed, 0), CaptureFrame::kCamera);
    VoxelizeOptions vox;
    {
        Aabb box = bounding_box(reference_capture);
        box.expand(bounding_box(start_capture));
        vox.bounds = box.inflated(5.0 * cfg.resolution);
        vox.drop_outside = true;
    }

    // Reference side, cached once (the F-slot of the correlations).
    const VoxelGrid f_grid = voxelize(reference_capture, cfg.resolution, vox);
    const Spectrum3D f_spec = fft3(f_grid);
    const Egi f_egi = build_egi(reference_capture, cfg.bandwidth);
    const SphCoeffs f_coeffs = sph_forward(f_egi, *tables).normalized();

    ControllerState state;
    const PeakOptions peak_opts{cfg.subvoxel};
    const Mat3 identity = Mat3::Identity();

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const auto t0 = std::chrono::steady_clock::now();

        cam.pose = robot.camera_pose(q);
        result.joint_trajectory.push_back(q);
        result.camera_path.push_back(cam.pose);

        const PointCloud current =
            capture(scene, cam, mix_seed(options.seed, iter), CaptureFrame::kCamera);
        const VoxelGrid g_grid = voxelize(current, cfg.resolution, vox);
        const Egi g_egi = build_egi(current, cfg.bandwidth);
        const SphCoeffs g_coeffs = sph_forward(g_egi, *tables).normalized();

        auto translation_task = [&]() {
            const Spectrum3D g_spec = fft3(g_grid);
            const Spectrum3D cps = cross_power_spectrum(f_spec, g_spec);
            const CorrelationVolume delta = invert_to_correlation(cps);
            return peak_translation(delta, cfg.resolution, peak_opts);
        };
        auto rotation_task = [&]() {
            return correlation_gradient(f_coeffs, g_coeffs, identity, *tables);
        };

        TranslationEstimate t_est;
        Vec3 r_grad;
        if (cfg.threads > 1) {
            auto rot_future = std::async(std::launch::async, rotation_task);
            t_est = translation_task();
            r_grad = rot_future.get();
        } else {
            t_est = translation_task();
            r_grad = rotation_task();
        }

        state = controller_step(state, t_est.t_glob, r_grad, cfg);
        state.j_t = translation_cost(g_grid, f_grid, Vec3::Zero());
        state.j_r = rotation_cost(g_egi, f_egi, identity);

        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        result.trace.push_back({state.iteration, state.j_t, state.j_r, t_est.t_glob.norm(),
                                r_grad.norm(), state.h, ms});

        if (converged(state, cfg.eps_g)) {
            result.converged = true;
            break;
        }

        const CameraTwist twist = camera_twist(state, cfg, options.dt);
        Twist6 xdot;
        xdot.head<3>() = twist.linear;
        xdot.tail<3>() = twist.angular;
        const auto jv = joint_velocities(robot.camera_jacobian(q), xdot);
        q += options.dt * jv.qdot;

        if (!robot.within_limits(q)) {
            result.kinematic_limit = true;
            break;
        }
    }

    result.final_joints = q;
    return result;
}

}  // namespace specvs
