#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specvs/point_cloud.hpp"
#include "specvs/spherical.hpp"

namespace specvs {

/// Extended Gaussian Image: surface-normal counts on the 2B x 2B equiangular
/// sphere grid theta_j = pi(2j+1)/(4B), phi_k = pi k / B, 0 <= j,k < 2B.
struct Egi {
    int bandwidth = 16;                 // B, a power of two
    std::vector<int64_t> counts;        // 2B*2B, row j (colatitude) major

    int grid_size() const { return 2 * bandwidth; }
    int64_t& at(int j, int k) { return counts[static_cast<size_t>(j) * grid_size() + k]; }
    int64_t at(int j, int k) const { return counts[static_cast<size_t>(j) * grid_size() + k]; }
    int64_t total() const;

    double theta_node(int j) const { return kPi * (2 * j + 1) / (4.0 * bandwidth); }
    double phi_node(int k) const { return kPi * k / bandwidth; }
};

/// Grid node nearest to a direction; ties break toward the lower index and
/// the azimuth index wraps modulo 2B.
struct EgiBin {
    int j = 0;
    int k = 0;
};
EgiBin nearest_egi_bin(const SphericalDirection& dir, int bandwidth);

/// Histogram the cloud's normals on the sphere grid.
Egi build_egi(const PointCloud& cloud, int bandwidth);

/// Same binning applied to an explicit list of directions.
Egi build_egi(const std::vector<Vec3>& normals, int bandwidth);

/// Debug dump: "j,k,count" rows (zero cells omitted).
void write_egi_csv(const std::string& path, const Egi& egi);

}  // namespace specvs
