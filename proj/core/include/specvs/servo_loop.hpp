#pragma once

#include <cstdint>
#include <vector>

#include "specvs/controller.hpp"
#include "specvs/depth_camera.hpp"
#include "specvs/point_cloud.hpp"
#include "specvs/sim_robot.hpp"
#include "specvs/trace.hpp"

namespace specvs {

struct ServoOptions {
    CameraModel camera;   // pose field is overridden by forward kinematics
    double dt = 0.05;     // control period / Euler step, seconds
    uint64_t seed = 0;
};

struct ServoResult {
    IterationTrace trace;
    std::vector<VecX> joint_trajectory;          // per-cycle joint angles
    std::vector<RigidTransform> camera_path;     // per-cycle camera poses
    bool converged = false;
    bool kinematic_limit = false;
    VecX final_joints;
};

/// Closed-loop simulated servoing: the reference capture (taken at the goal
/// pose) is spectrally cached; each cycle captures the scene from the
/// current camera pose, estimates the camera-frame correction gradients
/// against the reference, converts the scaled gradients to a camera twist,
/// maps it through the damped Jacobian pseudoinverse, and Euler-integrates
/// the joints. Stops on convergence, joint-limit violation, or max_iters.
ServoResult servo_loop(const PointCloud& scene, const SimRobot& robot,
                       const PointCloud& reference_capture, const ControllerConfig& cfg,
                       const ServoOptions& options);

}  // namespace specvs
