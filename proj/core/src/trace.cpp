#include "specvs/trace.hpp"

#include <cstdio>
#include <memory>

#include <Eigen/Geometry>

#include "specvs/error.hpp"

namespace specvs {
namespace {

using FilePtr = std::unique_ptr<std::FILE, int (*)(std::FILE*)>;

FilePtr open_for_write(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "w"), std::fclose);
    if (!f) throw IoError("cannot write '" + path + "'");
    return f;
}

}  // namespace

void write_trace_csv(const std::string& path, const IterationTrace& trace) {
    auto f = open_for_write(path);
    std::fprintf(f.get(), "iter,j_t,j_r,grad_t_norm,grad_r_norm,tx,ty,tz,qw,qx,qy,qz,ms\n");
    for (const auto& rec : trace) {
        const Eigen::Quaterniond q(rec.h.rotation);
        std::fprintf(f.get(),
                     "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                     rec.iteration, rec.j_t, rec.j_r, rec.grad_t_norm, rec.grad_r_norm,
                     rec.h.translation.x(), rec.h.translation.y(), rec.h.translation.z(), q.w(),
                     q.x(), q.y(), q.z(), rec.millis);
    }
}

void write_trace_json(const std::string& path, const IterationTrace& trace, bool converged) {
    auto f = open_for_write(path);
    std::fprintf(f.get(), "{\n  \"converged\": %s,\n  \"iterations\": [\n",
                 converged ? "true" : "false");
    for (size_t i = 0; i < trace.size(); ++i) {
        const auto& rec = trace[i];
        const Eigen::Quaterniond q(rec.h.rotation);
        std::fprintf(f.get(),
                     "    {\"iter\": %d, \"j_t\": %.17g, \"j_r\": %.17g, "
                     "\"grad_t_norm\": %.17g, \"grad_r_norm\": %.17g, "
                     "\"t\": [%.17g, %.17g, %.17g], "
                     "\"q\": [%.17g, %.17g, %.17g, %.17g], \"ms\": %.17g}%s\n",
                     rec.iteration, rec.j_t, rec.j_r, rec.grad_t_norm, rec.grad_r_norm,
                     rec.h.translation.x(), rec.h.translation.y(), rec.h.translation.z(), q.w(),
                     q.x(), q.y(), q.z(), rec.millis, i + 1 < trace.size() ? "," : "");
    }
    std::fprintf(f.get(), "  ]\n}\n");
}

double trace_nonincreasing_fraction(const IterationTrace& trace, int window) {
    if (static_cast<int>(trace.size()) <= window) return 1.0;
    auto window_mean = [&](size_t end) {  // mean of (end-window, end]
        double sum = 0.0;
        for (size_t i = end + 1 - window; i <= end; ++i)
            sum += trace[i].j_t + trace[i].j_r;
        return sum / window;
    };
    int ok = 0;
    int total = 0;
    for (size_t i = window; i < trace.size(); ++i) {
        ++total;
        if (window_mean(i) <= window_mean(i - 1) + 1e-12) ++ok;
    }
    return total == 0 ? 1.0 : static_cast<double>(ok) / total;
}

}  // namespace specvs
