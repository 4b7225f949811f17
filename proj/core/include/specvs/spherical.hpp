#pragma once

#include <cmath>

#include "specvs/types.hpp"

namespace specvs {

/// Direction on the unit sphere: colatitude theta in [0, pi] measured from
/// +z, azimuth phi in [0, 2pi) measured from +x toward +y.
struct SphericalDirection {
    double theta = 0.0;
    double phi = 0.0;
};

/// Unit vector -> spherical direction. phi is conventionally 0 at the poles
/// where the azimuth is undefined.
inline SphericalDirection cart_to_sph(const Vec3& n) {
    SphericalDirection d;
    const double rho = std::hypot(n.x(), n.y());
    d.theta = std::atan2(rho, n.z());
    if (rho > 0.0) {
        d.phi = std::atan2(n.y(), n.x());
        if (d.phi < 0.0) d.phi += 2.0 * kPi;
        if (d.phi >= 2.0 * kPi) d.phi = 0.0;
    }
    return d;
}

inline Vec3 sph_to_cart(const SphericalDirection& d) {
    const double st = std::sin(d.theta);
    return {st * std::cos(d.phi), st * std::sin(d.phi), std::cos(d.theta)};
}

}  // namespace specvs
