#pragma once

#include <cstdint>

#include "specvs/point_cloud.hpp"
#include "specvs/scene.hpp"

namespace specvs {

enum class CaptureFrame { kWorld, kCamera };

/// Simulated depth capture: frustum culling by field of view and range,
/// hidden-point removal by spherical-flip visibility, then Gaussian noise of
/// cam.noise_sigma along each viewing ray. Deterministic under `seed`.
/// Throws empty-view when nothing survives the frustum.
PointCloud capture(const PointCloud& scene, const CameraModel& cam, uint64_t seed,
                   CaptureFrame frame = CaptureFrame::kWorld);

}  // namespace specvs
