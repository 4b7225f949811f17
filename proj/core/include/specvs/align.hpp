#pragma once

#include <functional>
#include <string>

#include "specvs/controller.hpp"
#include "specvs/point_cloud.hpp"
#include "specvs/trace.hpp"

namespace specvs {

/// Phases of one alignment iteration, in execution order.
enum class AlignPhase { kTransform, kDiscretize, kGradients, kUpdate, kCost };

/// Optional per-phase observer, called once per phase per iteration.
using AlignObserver = std::function<void(AlignPhase, const ControllerState&)>;

struct AlignResult {
    /// Estimated motion in centroid-pivot form: p -> R (p - pivot) + pivot + T.
    RigidTransform h;
    Vec3 pivot = Vec3::Zero();      // the reference centroid
    RigidTransform h_origin;        // same motion with origin pivot
    IterationTrace trace;
    bool converged = false;
    int iterations = 0;
};

struct AlignHooks {
    AlignObserver observer;
    std::string debug_dir;  // when set, dump grids/EGIs/coefficients as CSV
};

/// Iterative spectral alignment of `reference` onto `target`:
/// the target's voxel spectrum and harmonic coefficients are computed once;
/// each iteration transforms the reference by the current estimate
/// (rotation about the reference centroid), re-discretizes it, estimates the
/// remaining translation by phase correlation and the rotation ascent
/// direction from the SO(3) correlation gradient, and applies the decoupled
/// update law. Ends when ||grad T|| + ||grad C_r|| < eps_g or at max_iters
/// (converged flag false; the trace is still complete).
AlignResult align(const PointCloud& reference, const PointCloud& target,
                  const ControllerConfig& cfg, const AlignHooks& hooks = {});

}  // namespace specvs
