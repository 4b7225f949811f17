#pragma once

#include "specvs/rigid_transform.hpp"
#include "specvs/types.hpp"

namespace specvs {

/// Gains, tolerances, and discretization parameters shared by the alignment
/// and servoing loops.
struct ControllerConfig {
    double lambda_t = 0.25;   // translation gain, in (0, 1)
    double lambda_r = 0.25;   // rotation gain, in (0, 1)
    double eps_g = 1e-4;      // convergence tolerance on ||grad T|| + ||grad C_r||
    int max_iters = 2000;

    double resolution = 0.008;  // voxel edge, meters
    int bandwidth = 16;         // EGI bandwidth B
    int l_max = 0;              // harmonic degree cutoff; 0 means bandwidth

    bool subvoxel = false;      // sub-voxel peak refinement (off: pure argmax)
    int threads = 1;            // 1 = fully sequential/deterministic

    // Rotation steps larger than this are clamped; keeps the exponential
    // update well-behaved when coefficient energy concentrates.
    double max_rot_step = 0.35;  // radians

    // Twist saturation for the simulated robot.
    double max_lin_vel = 0.1;   // m/s
    double max_ang_vel = 0.5;   // rad/s

    int effective_l_max() const { return l_max > 0 ? l_max : bandwidth; }
    void validate() const;
};

/// Controller state: the running transform estimate plus the latest
/// gradients and costs.
struct ControllerState {
    RigidTransform h;
    int iteration = 0;
    Vec3 last_t_grad = Vec3::Zero();
    Vec3 last_r_grad = Vec3::Zero();
    double j_t = 0.0;
    double j_r = 0.0;
};

/// Decoupled update law:
///   T <- T + lambda_t * t_grad
///   R <- R * exp(lambda_r * hat(r_grad))
/// R is re-orthonormalized by polar projection each step. Translation
/// updates never touch R and rotation updates never touch T.
ControllerState controller_step(const ControllerState& state, const Vec3& t_grad,
                                const Vec3& r_grad, const ControllerConfig& cfg);

/// True iff ||grad T|| + ||grad C_r|| < eps_g (strict).
bool converged(const ControllerState& state, double eps_g);

struct CameraTwist {
    Vec3 linear = Vec3::Zero();   // m/s, camera frame
    Vec3 angular = Vec3::Zero();  // rad/s, camera frame
};

/// Camera-frame velocity command for one control period: the scaled
/// gradients over dt, saturated at the configured caps.
CameraTwist camera_twist(const ControllerState& state, const ControllerConfig& cfg, double dt);

}  // namespace specvs
