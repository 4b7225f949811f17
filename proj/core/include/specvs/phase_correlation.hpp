#pragma once

#include <complex>
#include <string>
#include <vector>

#include "specvs/voxel_grid.hpp"

namespace specvs {

/// 3D DFT coefficients of a voxel grid, same dims as the source.
struct Spectrum3D {
    Vec3i dims = Vec3i::Zero();
    std::vector<Complex> coeffs;  // x-major / z-fastest, like VoxelGrid

    int64_t size() const { return static_cast<int64_t>(dims.x()) * dims.y() * dims.z(); }
    int64_t index(int u, int v, int w) const {
        return (static_cast<int64_t>(u) * dims.y() + v) * dims.z() + w;
    }
};

/// Real inverse-transform volume; ideal phase-correlation output is a unit
/// impulse at the shift index.
struct CorrelationVolume {
    Vec3i dims = Vec3i::Zero();
    std::vector<double> values;
    double imag_residual = 0.0;  // max |imag| of the inverse transform

    int64_t index(int i, int j, int k) const {
        return (static_cast<int64_t>(i) * dims.y() + j) * dims.z() + k;
    }
};

struct TranslationEstimate {
    Vec3 t_glob = Vec3::Zero();   // meters, wrap-around resolved
    double peak_value = 0.0;
    Vec3i peak_index = Vec3i::Zero();   // raw argmax index
    Vec3i shift = Vec3i::Zero();        // unwrapped integer voxel shift
    Vec3 subvoxel_shift = Vec3::Zero(); // unwrapped shift with parabolic refinement
};

/// Forward DFT of the occupancy function. The DC coefficient equals the
/// occupied-voxel count.
Spectrum3D fft3(const VoxelGrid& grid);

/// Normalized cross-power spectrum conj(F) .* G ./ (|conj(F) .* G| + eps).
/// When g is f circularly shifted by s, entries have phase
/// -2pi(s_x u/M + s_y v/N + s_z w/L) and the correlation peaks at s.
Spectrum3D cross_power_spectrum(const Spectrum3D& f, const Spectrum3D& g, double eps = 1e-12);

/// Real part of the 1/(MNL)-normalized inverse DFT. Throws if the imaginary
/// residue exceeds 1e-8 of the peak, which signals non-conjugate-symmetric
/// input.
CorrelationVolume invert_to_correlation(const Spectrum3D& c);

struct PeakOptions {
    bool subvoxel = false;  // 3-point parabolic refinement per axis
};

/// Argmax of the correlation volume; indices above dims/2 unwrap to negative
/// shifts and t_glob = shift * resolution. Ties break toward the lowest
/// lexicographic index.
TranslationEstimate peak_translation(const CorrelationVolume& delta, double resolution,
                                     const PeakOptions& options = {});

/// J_t(T) = 1/2 sum_x (g(x) - f_T(x))^2 where f_T is f translated by T
/// (rounded to whole voxels; out-of-range reads as 0). Zero when g is an
/// exact-voxel shift of f by T. Grids must share lattice metadata.
double translation_cost(const VoxelGrid& f, const VoxelGrid& g, const Vec3& t);

/// Debug dump: "i,j,k,value" rows.
void write_correlation_csv(const std::string& path, const CorrelationVolume& delta);

}  // namespace specvs
