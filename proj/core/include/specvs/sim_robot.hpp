#pragma once

#include <vector>

#include "specvs/rigid_transform.hpp"
#include "specvs/types.hpp"

namespace specvs {

/// Standard DH link: frame update RotZ(theta) TransZ(d) TransX(a) RotX(alpha)
/// with theta supplied by the joint.
struct DhLink {
    double a = 0.0;
    double alpha = 0.0;
    double d = 0.0;
};

using Jacobian6 = Eigen::Matrix<double, 6, Eigen::Dynamic>;
using Twist6 = Eigen::Matrix<double, 6, 1>;  // (v; omega)

/// Serial revolute arm with a wrist-mounted camera. 7 joints by default,
/// iiwa-like proportions but deliberately generic.
struct SimRobot {
    std::vector<DhLink> links;
    VecX joint_angles;
    VecX joint_min;
    VecX joint_max;
    RigidTransform camera_offset;  // flange -> camera

    static SimRobot make_default();

    int dof() const { return static_cast<int>(links.size()); }

    RigidTransform flange_pose(const VecX& q) const;
    RigidTransform camera_pose(const VecX& q) const;

    /// Geometric Jacobian of the camera point, expressed in the camera
    /// frame: camera twist (v; omega) = J(q) qdot.
    Jacobian6 camera_jacobian(const VecX& q) const;

    bool within_limits(const VecX& q) const;
};

struct JointVelocityResult {
    VecX qdot;
    double smallest_singular_value = 0.0;
    bool near_singular = false;  // smallest sigma < 1e-3; damped result still valid
};

/// qdot = J^+ twist with a damped pseudoinverse (sigma / (sigma^2 + mu^2)).
JointVelocityResult joint_velocities(const SimRobot& robot, const Twist6& twist,
                                     double damping = 1e-4);
JointVelocityResult joint_velocities(const Jacobian6& jacobian, const Twist6& twist,
                                     double damping = 1e-4);

struct IkResult {
    VecX joints;
    bool converged = false;
    double final_error = 0.0;
};

/// Damped-least-squares IK for the camera pose; used to stage test poses.
IkResult solve_camera_ik(const SimRobot& robot, const RigidTransform& target_camera_pose,
                         const VecX& q_init, int max_iters = 500, double tol = 1e-10);

}  // namespace specvs
