#pragma once

#include <string>

#include "specvs/trace.hpp"

namespace specvs {

/// Convergence plot of j_t and j_r against iteration, written as a
/// self-contained SVG (no plotting dependency). Costs are drawn on a log10
/// scale with a floor at 1e-16.
void write_convergence_svg(const std::string& path, const IterationTrace& trace,
                           const std::string& title = "Convergence");

}  // namespace specvs
