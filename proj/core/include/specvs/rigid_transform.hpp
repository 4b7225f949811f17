#pragma once

#include <cmath>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "specvs/types.hpp"

namespace specvs {

/// Skew-symmetric (cross-product) matrix of a 3-vector: hat(v) * w == v x w.
inline Mat3 hat(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return m;
}

/// Rodrigues formula: exp of the skew matrix of `w` (axis * angle).
inline Mat3 rotation_exp(const Vec3& w) {
    const double angle = w.norm();
    if (angle < 1e-14) {
        // Second-order series keeps the result orthonormal to machine precision.
        const Mat3 k = hat(w);
        return Mat3::Identity() + k + 0.5 * k * k;
    }
    const Vec3 axis = w / angle;
    return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

inline Mat3 rot_x(double a) { return Eigen::AngleAxisd(a, Vec3::UnitX()).toRotationMatrix(); }
inline Mat3 rot_y(double a) { return Eigen::AngleAxisd(a, Vec3::UnitY()).toRotationMatrix(); }
inline Mat3 rot_z(double a) { return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix(); }

/// R = exp(alpha e_z^) * exp(beta e_y^) * exp(gamma e_z^).
inline Mat3 euler_zyz_to_rot(double alpha, double beta, double gamma) {
    return rot_z(alpha) * rot_y(beta) * rot_z(gamma);
}

struct EulerZyz {
    double alpha = 0.0;  // [0, 2pi)
    double beta = 0.0;   // [0, pi]
    double gamma = 0.0;  // [0, 2pi)
};

namespace detail {
inline double wrap_2pi(double a) {
    a = std::fmod(a, 2.0 * kPi);
    return a < 0.0 ? a + 2.0 * kPi : a;
}
}  // namespace detail

/// ZYZ factorization of a rotation matrix. At the beta = 0 / beta = pi
/// singularities only alpha + gamma (resp. alpha - gamma) is determined;
/// gamma is set to 0 there.
inline EulerZyz zyz_from_rotation(const Mat3& r) {
    EulerZyz e;
    const double sin_beta = std::hypot(r(0, 2), r(1, 2));
    e.beta = std::atan2(sin_beta, r(2, 2));
    if (sin_beta > 1e-12) {
        e.alpha = detail::wrap_2pi(std::atan2(r(1, 2), r(0, 2)));
        e.gamma = detail::wrap_2pi(std::atan2(r(2, 1), -r(2, 0)));
    } else if (r(2, 2) > 0.0) {  // beta ~ 0: R ~ rot_z(alpha + gamma)
        e.beta = 0.0;
        e.alpha = detail::wrap_2pi(std::atan2(r(1, 0), r(0, 0)));
        e.gamma = 0.0;
    } else {  // beta ~ pi: R ~ rot_z(alpha) * rot_y(pi)
        e.beta = kPi;
        e.alpha = detail::wrap_2pi(std::atan2(-r(1, 0), -r(0, 0)));
        e.gamma = 0.0;
    }
    return e;
}

/// Geodesic distance on SO(3): the rotation angle of r1^T r2, in [0, pi].
inline double geodesic_angle(const Mat3& r1, const Mat3& r2) {
    const double c = ((r1.transpose() * r2).trace() - 1.0) / 2.0;
    return std::acos(std::clamp(c, -1.0, 1.0));
}

/// Nearest rotation matrix in the Frobenius sense (polar projection).
inline Mat3 orthonormalized(const Mat3& m) {
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0.0) {
        Mat3 flip = Mat3::Identity();
        flip(2, 2) = -1.0;
        r = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    return r;
}

/// Rigid motion (R, T): p -> R p + T. Composition and inverse follow the
/// usual homogeneous-matrix algebra.
struct RigidTransform {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    static RigidTransform identity() { return {}; }

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

    RigidTransform compose(const RigidTransform& other) const {
        // this * other: apply `other` first.
        return {rotation * other.rotation, rotation * other.translation + translation};
    }

    RigidTransform inverse() const {
        return {rotation.transpose(), -(rotation.transpose() * translation)};
    }

    bool is_valid(double tol = 1e-9) const {
        const double ortho = (rotation.transpose() * rotation - Mat3::Identity()).norm();
        return ortho < tol && std::abs(rotation.determinant() - 1.0) < tol &&
               translation.allFinite();
    }
};

}  // namespace specvs
