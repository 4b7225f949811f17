#include "specvs/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "specvs/error.hpp"

namespace specvs {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

double log_floor(double v) { return std::log10(std::max(v, 1e-16)); }

}  // namespace

void write_convergence_svg(const std::string& path, const IterationTrace& trace,
                           const std::string& title) {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(path.c_str(), "w"), std::fclose);
    if (!f) throw IoError("cannot write '" + path + "'");

    const int n = static_cast<int>(trace.size());
    double lo = 0.0, hi = 1.0;
    if (n > 0) {
        lo = 1e300;
        hi = -1e300;
        for (const auto& rec : trace) {
            lo = std::min({lo, log_floor(rec.j_t), log_floor(rec.j_r)});
            hi = std::max({hi, log_floor(rec.j_t), log_floor(rec.j_r)});
        }
        if (hi - lo < 1.0) hi = lo + 1.0;
    }

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto x_of = [&](int i) {
        return kMarginLeft + (n <= 1 ? 0.0 : plot_w * i / (n - 1));
    };
    const auto y_of = [&](double logv) {
        return kMarginTop + plot_h * (1.0 - (logv - lo) / (hi - lo));
    };

    std::fprintf(f.get(),
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                 "viewBox=\"0 0 %g %g\">\n",
                 kWidth, kHeight, kWidth, kHeight);
    std::fprintf(f.get(), "<rect width=\"100%%\" height=\"100%%\" fill=\"white\"/>\n");
    std::fprintf(f.get(),
                 "<text x=\"%g\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
                 "text-anchor=\"middle\">%s</text>\n",
                 kWidth / 2.0, title.c_str());

    // Axes.
    std::fprintf(f.get(),
                 "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
                 kMarginLeft, kMarginTop, kMarginLeft, kHeight - kMarginBottom);
    std::fprintf(f.get(),
                 "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
                 kMarginLeft, kHeight - kMarginBottom, kWidth - kMarginRight,
                 kHeight - kMarginBottom);

    // Y ticks at whole decades.
    for (int d = static_cast<int>(std::ceil(lo)); d <= static_cast<int>(std::floor(hi)); ++d) {
        const double y = y_of(d);
        std::fprintf(f.get(),
                     "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#cccccc\"/>\n",
                     kMarginLeft, y, kWidth - kMarginRight, y);
        std::fprintf(f.get(),
                     "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
                     "text-anchor=\"end\">1e%d</text>\n",
                     kMarginLeft - 6.0, y + 4.0, d);
    }
    // X ticks.
    for (int t = 0; t <= 4; ++t) {
        const int i = n <= 1 ? 0 : (n - 1) * t / 4;
        const double x = x_of(i);
        std::fprintf(f.get(),
                     "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
                     "text-anchor=\"middle\">%d</text>\n",
                     x, kHeight - kMarginBottom + 18.0, i);
    }
    std::fprintf(f.get(),
                 "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
                 "text-anchor=\"middle\">iteration</text>\n",
                 kMarginLeft + plot_w / 2.0, kHeight - 12.0);

    const auto polyline = [&](const char* color, bool use_jt) {
        std::fprintf(f.get(), "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\" points=\"",
                     color);
        for (int i = 0; i < n; ++i) {
            const double v = use_jt ? trace[i].j_t : trace[i].j_r;
            std::fprintf(f.get(), "%.2f,%.2f ", x_of(i), y_of(log_floor(v)));
        }
        std::fprintf(f.get(), "\"/>\n");
    };
    if (n > 0) {
        polyline("#1f77b4", true);
        polyline("#d62728", false);
    }

    // Legend.
    std::fprintf(f.get(),
                 "<rect x=\"%g\" y=\"%g\" width=\"14\" height=\"3\" fill=\"#1f77b4\"/>"
                 "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\">J_t</text>\n",
                 kWidth - 130.0, kMarginTop + 8.0, kWidth - 110.0, kMarginTop + 13.0);
    std::fprintf(f.get(),
                 "<rect x=\"%g\" y=\"%g\" width=\"14\" height=\"3\" fill=\"#d62728\"/>"
                 "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\">J_r</text>\n",
                 kWidth - 130.0, kMarginTop + 26.0, kWidth - 110.0, kMarginTop + 31.0);
    std::fprintf(f.get(), "</svg>\n");
}

}  // namespace specvs
