#include "specvs/align.hpp"

#include <chrono>
#include <future>

#include "specvs/egi.hpp"
#include "specvs/error.hpp"
#include "specvs/phase_correlation.hpp"
#include "specvs/so3_transform.hpp"
#include "specvs/voxel_grid.hpp"

namespace specvs {
namespace {

/// Shared lattice for the whole run: the reference may rotate about its
/// centroid anywhere inside its circumscribing ball, so the box covers that
/// ball, the target, and one voxel of slack.
Aabb shared_lattice_bounds(const PointCloud& reference, const PointCloud& target,
                           double resolution) {
    const Vec3 c = centroid(reference);
    const double rho = circumradius(reference, c);
    Aabb box;
    box.expand(c - Vec3::Constant(rho));
    box.expand(c + Vec3::Constant(rho));
    box.expand(bounding_box(target));
    return box.inflated(resolution);
}

}  // namespace

AlignResult align(const PointCloud& reference, const PointCloud& target,
                  const ControllerConfig& cfg, const AlignHooks& hooks) {
    cfg.validate();
    if (reference.empty() || target.empty())
        throw InvalidArgument("empty-cloud", "align requires non-empty clouds");
    if (!reference.has_normals() || !target.has_normals())
        throw InvalidArgument("missing-normals", "align requires clouds with normals");

    const auto tables = HarmonicTables::get(cfg.bandwidth, cfg.effective_l_max());

    VoxelizeOptions vox;
    vox.bounds = shared_lattice_bounds(reference, target, cfg.resolution);
    vox.drop_outside = true;

    // Target side, computed once.
    const VoxelGrid g_grid = voxelize(target, cfg.resolution, vox);
    const Spectrum3D g_spec = fft3(g_grid);
    const Egi g_egi = build_egi(target, cfg.bandwidth);
    const SphCoeffs g_coeffs = sph_forward(g_egi, *tables).normalized();

    if (!hooks.debug_dir.empty()) {
        write_voxel_csv(hooks.debug_dir + "/target_voxels.csv", g_grid);
        write_egi_csv(hooks.debug_dir + "/target_egi.csv", g_egi);
        write_coeffs_csv(hooks.debug_dir + "/target_coeffs.csv", g_coeffs);
    }

    AlignResult result;
    result.pivot = centroid(reference);
    ControllerState state;

    const PeakOptions peak_opts{cfg.subvoxel};
    const Mat3 identity = Mat3::Identity();

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        const auto t0 = std::chrono::steady_clock::now();

        const PointCloud moved =
            apply_transform(reference, pivot_to_origin(state.h, result.pivot));
        if (hooks.observer) hooks.observer(AlignPhase::kTransform, state);

        const VoxelGrid f_grid = voxelize(moved, cfg.resolution, vox);
        const Egi f_egi = build_egi(moved, cfg.bandwidth);
        const SphCoeffs f_coeffs = sph_forward(f_egi, *tables).normalized();
        if (hooks.observer) hooks.observer(AlignPhase::kDiscretize, state);

        auto translation_task = [&]() {
            const Spectrum3D f_spec = fft3(f_grid);
            const Spectrum3D cps = cross_power_spectrum(f_spec, g_spec);
            const CorrelationVolume delta = invert_to_correlation(cps);
            return peak_translation(delta, cfg.resolution, peak_opts);
        };
        auto rotation_task = [&]() {
            return correlation_gradient(f_coeffs, g_coeffs, identity, *tables);
        };

        TranslationEstimate t_est;
        Vec3 r_grad;
        if (cfg.threads > 1) {
            auto rot_future = std::async(std::launch::async, rotation_task);
            t_est = translation_task();
            r_grad = rot_future.get();
        } else {
            t_est = translation_task();
            r_grad = rotation_task();
        }
        if (hooks.observer) hooks.observer(AlignPhase::kGradients, state);

        state = controller_step(state, t_est.t_glob, r_grad, cfg);
        if (hooks.observer) hooks.observer(AlignPhase::kUpdate, state);

        state.j_t = translation_cost(f_grid, g_grid, t_est.t_glob);
        state.j_r = rotation_cost(f_egi, g_egi, identity);
        if (hooks.observer) hooks.observer(AlignPhase::kCost, state);

        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        result.trace.push_back({state.iteration, state.j_t, state.j_r, t_est.t_glob.norm(),
                                r_grad.norm(), state.h, ms});

        if (iter == 0 && !hooks.debug_dir.empty()) {
            write_voxel_csv(hooks.debug_dir + "/reference_voxels.csv", f_grid);
            write_egi_csv(hooks.debug_dir + "/reference_egi.csv", f_egi);
            write_coeffs_csv(hooks.debug_dir + "/reference_coeffs.csv", f_coeffs);
            const Spectrum3D f_spec = fft3(f_grid);
            write_correlation_csv(hooks.debug_dir + "/correlation.csv",
                                  invert_to_correlation(cross_power_spectrum(f_spec, g_spec)));
        }

        if (converged(state, cfg.eps_g)) {
            result.converged = true;
            break;
        }
    }

    result.iterations = state.iteration;
    result.h = state.h;
    result.h_origin = pivot_to_origin(state.h, result.pivot);
    return result;
}

}  // namespace specvs
