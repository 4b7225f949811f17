#include "specvs/egi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>

#include "specvs/error.hpp"

namespace specvs {
namespace {

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

/// Nearest integer with half-ties toward the lower value.
int round_half_down(double t) { return static_cast<int>(std::ceil(t - 0.5)); }

}  // namespace

int64_t Egi::total() const { return std::accumulate(counts.begin(), counts.end(), int64_t{0}); }

EgiBin nearest_egi_bin(const SphericalDirection& dir, int bandwidth) {
    const int n = 2 * bandwidth;
    EgiBin bin;
    // theta_j = pi(2j+1)/(4B)  =>  j = theta*2B/pi - 1/2, clamped at the poles.
    bin.j = std::clamp(round_half_down(dir.theta * 2.0 * bandwidth / kPi - 0.5), 0, n - 1);
    // phi_k = pi k / B, periodic.
    int k = round_half_down(dir.phi * bandwidth / kPi) % n;
    if (k < 0) k += n;
    bin.k = k;
    return bin;
}

Egi build_egi(const std::vector<Vec3>& normals, int bandwidth) {
    if (!is_power_of_two(bandwidth))
        throw InvalidArgument("bad-bandwidth", "bandwidth must be a positive power of two");
    if (normals.empty()) throw InvalidArgument("missing-normals", "no normals to bin");

    Egi egi;
    egi.bandwidth = bandwidth;
    egi.counts.assign(static_cast<size_t>(egi.grid_size()) * egi.grid_size(), 0);
    for (const auto& n : normals) {
        const EgiBin bin = nearest_egi_bin(cart_to_sph(n), bandwidth);
        ++egi.at(bin.j, bin.k);
    }
    return egi;
}

Egi build_egi(const PointCloud& cloud, int bandwidth) {
    if (!cloud.has_normals())
        throw InvalidArgument("missing-normals", "cloud has no normals to bin");
    return build_egi(cloud.normals, bandwidth);
}

void write_egi_csv(const std::string& path, const Egi& egi) {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(path.c_str(), "w"), std::fclose);
    if (!f) throw IoError("cannot write '" + path + "'");
    std::fprintf(f.get(), "j,k,count\n");
    for (int j = 0; j < egi.grid_size(); ++j)
        for (int k = 0; k < egi.grid_size(); ++k)
            if (egi.at(j, k) != 0)
                std::fprintf(f.get(), "%d,%d,%lld\n", j, k,
                             static_cast<long long>(egi.at(j, k)));
}

}  // namespace specvs
