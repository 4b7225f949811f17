#pragma once

#include <string>
#include <vector>

#include "specvs/rigid_transform.hpp"

namespace specvs {

/// One alignment/servo iteration, as written to the trace CSV.
struct IterationRecord {
    int iteration = 0;
    double j_t = 0.0;
    double j_r = 0.0;
    double grad_t_norm = 0.0;
    double grad_r_norm = 0.0;
    RigidTransform h;
    double millis = 0.0;
};

using IterationTrace = std::vector<IterationRecord>;

/// CSV columns: iter,j_t,j_r,grad_t_norm,grad_r_norm,tx,ty,tz,qw,qx,qy,qz,ms.
void write_trace_csv(const std::string& path, const IterationTrace& trace);
void write_trace_json(const std::string& path, const IterationTrace& trace, bool converged);

/// Fraction of iterations (window..end) whose trailing-window mean cost
/// j_t + j_r does not exceed the previous window's mean. 1.0 = monotone.
double trace_nonincreasing_fraction(const IterationTrace& trace, int window);

}  // namespace specvs
