#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include <complex>
#include <limits>

namespace specvs {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec3i = Eigen::Vector3i;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using MatXc = Eigen::MatrixXcd;
using VecXc = Eigen::VectorXcd;
using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

/// Axis-aligned bounding box.
struct Aabb {
    Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

    bool valid() const { return (min.array() <= max.array()).all(); }
    Vec3 extent() const { return max - min; }

    void expand(const Vec3& p) {
        min = min.cwiseMin(p);
        max = max.cwiseMax(p);
    }
    void expand(const Aabb& other) {
        min = min.cwiseMin(other.min);
        max = max.cwiseMax(other.max);
    }
    Aabb inflated(double margin) const { return {min.array() - margin, max.array() + margin}; }
    bool contains(const Vec3& p) const {
        return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
    }
};

}  // namespace specvs
