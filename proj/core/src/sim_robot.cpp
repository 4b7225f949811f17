#include "specvs/sim_robot.hpp"

#include <cmath>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "specvs/error.hpp"

namespace specvs {
namespace {

RigidTransform dh_step(const DhLink& link, double theta) {
    RigidTransform t;
    const double ct = std::cos(theta), st = std::sin(theta);
    const double ca = std::cos(link.alpha), sa = std::sin(link.alpha);
    t.rotation << ct, -st * ca, st * sa,
                  st, ct * ca, -ct * sa,
                  0.0, sa, ca;
    t.translation = Vec3(link.a * ct, link.a * st, link.d);
    return t;
}

}  // namespace

SimRobot SimRobot::make_default() {
    SimRobot r;
    // 7R arm, alternating wrist axes, ~0.5 m reach segments.
    r.links = {
        {0.0, -kPi / 2.0, 0.35}, {0.0, kPi / 2.0, 0.0},  {0.0, kPi / 2.0, 0.42},
        {0.0, -kPi / 2.0, 0.0},  {0.0, -kPi / 2.0, 0.4}, {0.0, kPi / 2.0, 0.0},
        {0.0, 0.0, 0.12},
    };
    r.joint_angles = VecX::Zero(7);
    r.joint_min = VecX::Constant(7, -2.9);
    r.joint_max = VecX::Constant(7, 2.9);
    r.camera_offset.translation = Vec3(0.0, 0.0, 0.05);
    return r;
}

RigidTransform SimRobot::flange_pose(const VecX& q) const {
    if (q.size() != dof()) throw InvalidArgument("bad-config", "joint vector size mismatch");
    RigidTransform t;
    for (int i = 0; i < dof(); ++i) t = t.compose(dh_step(links[i], q(i)));
    return t;
}

RigidTransform SimRobot::camera_pose(const VecX& q) const {
    return flange_pose(q).compose(camera_offset);
}

Jacobian6 SimRobot::camera_jacobian(const VecX& q) const {
    if (q.size() != dof()) throw InvalidArgument("bad-config", "joint vector size mismatch");
    std::vector<Vec3> joint_origins(dof());
    std::vector<Vec3> joint_axes(dof());
    RigidTransform t;
    for (int i = 0; i < dof(); ++i) {
        joint_origins[i] = t.translation;
        joint_axes[i] = t.rotation.col(2);  // joint i rotates about frame i-1's z
        t = t.compose(dh_step(links[i], q(i)));
    }
    const RigidTransform cam = t.compose(camera_offset);

    Jacobian6 j(6, dof());
    for (int i = 0; i < dof(); ++i) {
        j.block<3, 1>(0, i) = joint_axes[i].cross(cam.translation - joint_origins[i]);
        j.block<3, 1>(3, i) = joint_axes[i];
    }
    // Re-express base-frame twist columns in the camera frame.
    const Mat3 rct = cam.rotation.transpose();
    j.topRows<3>() = rct * j.topRows<3>();
    j.bottomRows<3>() = rct * j.bottomRows<3>();
    return j;
}

bool SimRobot::within_limits(const VecX& q) const {
    return (q.array() >= joint_min.array()).all() && (q.array() <= joint_max.array()).all();
}

JointVelocityResult joint_velocities(const Jacobian6& jacobian, const Twist6& twist,
                                     double damping) {
    Eigen::JacobiSVD<MatX> svd(jacobian, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VecX& sigma = svd.singularValues();
    VecX inv_sigma(sigma.size());
    for (int i = 0; i < sigma.size(); ++i)
        inv_sigma(i) = sigma(i) / (sigma(i) * sigma(i) + damping * damping);

    JointVelocityResult res;
    res.qdot = svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().transpose() * twist;
    res.smallest_singular_value = sigma(sigma.size() - 1);
    res.near_singular = res.smallest_singular_value < 1e-3;
    return res;
}

JointVelocityResult joint_velocities(const SimRobot& robot, const Twist6& twist, double damping) {
    return joint_velocities(robot.camera_jacobian(robot.joint_angles), twist, damping);
}

IkResult solve_camera_ik(const SimRobot& robot, const RigidTransform& target_camera_pose,
                         const VecX& q_init, int max_iters, double tol) {
    IkResult res;
    res.joints = q_init;
    for (int it = 0; it < max_iters; ++it) {
        const RigidTransform cur = robot.camera_pose(res.joints);
        // Error twist in the current camera frame.
        const RigidTransform err = cur.inverse().compose(target_camera_pose);
        const Eigen::AngleAxisd aa(err.rotation);
        Twist6 twist;
        twist.head<3>() = err.translation;
        twist.tail<3>() = aa.angle() * aa.axis();
        res.final_error = twist.norm();
        if (res.final_error < tol) {
            res.converged = true;
            return res;
        }
        const auto jv = joint_velocities(robot.camera_jacobian(res.joints), twist, 1e-3);
        res.joints += 0.5 * jv.qdot;
    }
    res.converged = res.final_error < 1e-6;
    return res;
}

}  // namespace specvs
