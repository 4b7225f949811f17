#include "specvs/phase_correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>

#include <fftw3.h>

#include "specvs/error.hpp"

namespace specvs {
namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

void fft3_c2c(const Vec3i& dims, std::vector<Complex>& data, int sign) {
    fftw_complex* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_dft_3d(dims.x(), dims.y(), dims.z(), buf, buf, sign, FFTW_ESTIMATE);
    }
    if (!plan) throw NumericalError("fft-plan-failed", "FFTW could not plan the transform");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
}

}  // namespace

Spectrum3D fft3(const VoxelGrid& grid) {
    if ((grid.dims.array() <= 0).any())
        throw InvalidArgument("bad-dims", "grid dims must be positive");
    Spectrum3D spec;
    spec.dims = grid.dims;
    spec.coeffs.resize(grid.cell_count());
    for (int64_t i = 0; i < grid.cell_count(); ++i)
        spec.coeffs[i] = Complex(static_cast<double>(grid.occupancy[i]), 0.0);
    fft3_c2c(spec.dims, spec.coeffs, FFTW_FORWARD);
    return spec;
}

Spectrum3D cross_power_spectrum(const Spectrum3D& f, const Spectrum3D& g, double eps) {
    if (f.dims != g.dims)
        throw InvalidArgument("dim-mismatch", "spectra have different dimensions");
    Spectrum3D c;
    c.dims = f.dims;
    c.coeffs.resize(f.coeffs.size());
    for (size_t i = 0; i < f.coeffs.size(); ++i) {
        const Complex prod = std::conj(f.coeffs[i]) * g.coeffs[i];
        c.coeffs[i] = prod / (std::abs(prod) + eps);
    }
    return c;
}

CorrelationVolume invert_to_correlation(const Spectrum3D& c) {
    std::vector<Complex> data = c.coeffs;
    fft3_c2c(c.dims, data, FFTW_BACKWARD);

    CorrelationVolume delta;
    delta.dims = c.dims;
    delta.values.resize(data.size());
    const double norm = 1.0 / static_cast<double>(c.size());
    double max_abs = 0.0;
    double max_imag = 0.0;
    for (size_t i = 0; i < data.size(); ++i) {
        delta.values[i] = data[i].real() * norm;
        max_abs = std::max(max_abs, std::abs(delta.values[i]));
        max_imag = std::max(max_imag, std::abs(data[i].imag()) * norm);
    }
    delta.imag_residual = max_imag;
    if (max_imag > 1e-8 * std::max(max_abs, 1e-300))
        throw NumericalError("imaginary-residue-exceeded",
                             "inverse transform is not real; input spectrum lacks conjugate "
                             "symmetry");
    return delta;
}

TranslationEstimate peak_translation(const CorrelationVolume& delta, double resolution,
                                     const PeakOptions& options) {
    const auto& v = delta.values;
    if (v.empty()) throw InvalidArgument("bad-dims", "empty correlation volume");

    const auto [min_it, max_it] = std::minmax_element(v.begin(), v.end());
    if (*max_it - *min_it < 1e-12)
        throw NumericalError("flat-volume", "correlation volume has no unique peak");

    // Lowest lexicographic (i,j,k) wins ties; the layout is i-major so the
    // first maximum in memory order is exactly that.
    const int64_t flat = max_it - v.begin();
    const int L = delta.dims.z();
    const int N = delta.dims.y();
    TranslationEstimate est;
    est.peak_value = *max_it;
    est.peak_index = {static_cast<int>(flat / (static_cast<int64_t>(N) * L)),
                      static_cast<int>((flat / L) % N),
                      static_cast<int>(flat % L)};

    for (int a = 0; a < 3; ++a) {
        const int d = delta.dims[a];
        int s = est.peak_index[a];
        if (s >= (d + 1) / 2) s -= d;  // unwrap to [-d/2, d/2)
        est.shift[a] = s;
        est.subvoxel_shift[a] = static_cast<double>(s);
    }

    if (options.subvoxel) {
        for (int a = 0; a < 3; ++a) {
            const int d = delta.dims[a];
            Vec3i lo = est.peak_index, hi = est.peak_index;
            lo[a] = (est.peak_index[a] + d - 1) % d;
            hi[a] = (est.peak_index[a] + 1) % d;
            const double ym = v[delta.index(lo.x(), lo.y(), lo.z())];
            const double y0 = est.peak_value;
            const double yp = v[delta.index(hi.x(), hi.y(), hi.z())];
            const double denom = ym - 2.0 * y0 + yp;
            if (std::abs(denom) > 1e-300) {
                const double offset = std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
                est.subvoxel_shift[a] += offset;
            }
        }
    }

    est.t_glob = est.subvoxel_shift * resolution;
    return est;
}

double translation_cost(const VoxelGrid& f, const VoxelGrid& g, const Vec3& t) {
    if (f.dims != g.dims || f.resolution != g.resolution)
        throw InvalidArgument("dim-mismatch", "grids do not share lattice metadata");
    Vec3i shift;
    for (int a = 0; a < 3; ++a) shift[a] = static_cast<int>(std::lround(t[a] / f.resolution));

    // Lookup f at x - t: J_t(t) compares g against f translated by +t, so
    // the cost vanishes exactly at the phase-correlation estimate when g is
    // an exact-voxel shift of f.
    double cost = 0.0;
    for (int i = 0; i < g.dims.x(); ++i)
        for (int j = 0; j < g.dims.y(); ++j)
            for (int k = 0; k < g.dims.z(); ++k) {
                const int fi = i - shift.x();
                const int fj = j - shift.y();
                const int fk = k - shift.z();
                const double fv = f.in_bounds(fi, fj, fk) ? f.at(fi, fj, fk) : 0.0;
                const double diff = static_cast<double>(g.at(i, j, k)) - fv;
                cost += diff * diff;
            }
    return 0.5 * cost;
}

void write_correlation_csv(const std::string& path, const CorrelationVolume& delta) {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(path.c_str(), "w"), std::fclose);
    if (!f) throw IoError("cannot write '" + path + "'");
    std::fprintf(f.get(), "i,j,k,value\n");
    for (int i = 0; i < delta.dims.x(); ++i)
        for (int j = 0; j < delta.dims.y(); ++j)
            for (int k = 0; k < delta.dims.z(); ++k)
                std::fprintf(f.get(), "%d,%d,%d,%.17g\n", i, j, k,
                             delta.values[delta.index(i, j, k)]);
}

}  // namespace specvs
