#include "convex_hull.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace specvs::detail {
namespace {

struct Face {
    int a, b, c;
    Vec3 normal;       // outward unit normal
    double offset;     // plane: normal . x = offset
    std::vector<int> outside;
    bool alive = true;

    double dist(const Vec3& p) const { return normal.dot(p) - offset; }
};

Face make_face(int a, int b, int c, const std::vector<Vec3>& pts, const Vec3& interior) {
    Face f{a, b, c, Vec3::Zero(), 0.0, {}, true};
    Vec3 n = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
    const double len = n.norm();
    if (len > 0.0) n /= len;
    if (n.dot(interior - pts[a]) > 0.0) {  // flip outward
        std::swap(f.b, f.c);
        n = -n;
    }
    f.normal = n;
    f.offset = n.dot(pts[a]);
    return f;
}

}  // namespace

std::vector<int> convex_hull_vertices(const std::vector<Vec3>& points) {
    const int n = static_cast<int>(points.size());
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    if (n < 4) return all;

    Aabb box;
    for (const auto& p : points) box.expand(p);
    const double eps = 1e-10 * std::max(box.extent().norm(), 1.0);

    // Initial simplex: extreme pair, then farthest from the line, then from
    // the plane.
    int i0 = 0, i1 = 0;
    {
        double best = -1.0;
        for (int a = 0; a < 3; ++a) {
            int lo = 0, hi = 0;
            for (int i = 1; i < n; ++i) {
                if (points[i][a] < points[lo][a]) lo = i;
                if (points[i][a] > points[hi][a]) hi = i;
            }
            const double d = (points[hi] - points[lo]).norm();
            if (d > best) {
                best = d;
                i0 = lo;
                i1 = hi;
            }
        }
        if (best < eps) return all;  // all points coincide
    }
    int i2 = -1;
    {
        const Vec3 dir = (points[i1] - points[i0]).normalized();
        double best = eps;
        for (int i = 0; i < n; ++i) {
            const Vec3 rel = points[i] - points[i0];
            const double d = (rel - rel.dot(dir) * dir).norm();
            if (d > best) {
                best = d;
                i2 = i;
            }
        }
        if (i2 < 0) return all;  // collinear
    }
    int i3 = -1;
    {
        const Vec3 nrm =
            (points[i1] - points[i0]).cross(points[i2] - points[i0]).normalized();
        double best = eps;
        for (int i = 0; i < n; ++i) {
            const double d = std::abs(nrm.dot(points[i] - points[i0]));
            if (d > best) {
                best = d;
                i3 = i;
            }
        }
        if (i3 < 0) return all;  // coplanar
    }

    const Vec3 interior =
        (points[i0] + points[i1] + points[i2] + points[i3]) / 4.0;

    std::vector<Face> faces;
    faces.push_back(make_face(i0, i1, i2, points, interior));
    faces.push_back(make_face(i0, i1, i3, points, interior));
    faces.push_back(make_face(i0, i2, i3, points, interior));
    faces.push_back(make_face(i1, i2, i3, points, interior));

    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i1 || i == i2 || i == i3) continue;
        for (auto& f : faces)
            if (f.dist(points[i]) > eps) {
                f.outside.push_back(i);
                break;
            }
    }

    std::vector<size_t> pending;
    for (size_t fi = 0; fi < faces.size(); ++fi)
        if (!faces[fi].outside.empty()) pending.push_back(fi);

    while (!pending.empty()) {
        const size_t fi = pending.back();
        pending.pop_back();
        if (!faces[fi].alive || faces[fi].outside.empty()) continue;

        // Farthest outside point of this face.
        int apex = faces[fi].outside[0];
        double best = faces[fi].dist(points[apex]);
        for (int idx : faces[fi].outside) {
            const double d = faces[fi].dist(points[idx]);
            if (d > best) {
                best = d;
                apex = idx;
            }
        }

        // Visible set and its horizon (edges shared with exactly one
        // visible face).
        std::vector<size_t> visible;
        for (size_t g = 0; g < faces.size(); ++g)
            if (faces[g].alive && faces[g].dist(points[apex]) > eps) visible.push_back(g);

        std::map<std::pair<int, int>, int> edge_count;
        const auto add_edge = [&edge_count](int u, int v) {
            ++edge_count[{std::min(u, v), std::max(u, v)}];
        };
        for (size_t g : visible) {
            add_edge(faces[g].a, faces[g].b);
            add_edge(faces[g].b, faces[g].c);
            add_edge(faces[g].c, faces[g].a);
        }

        std::vector<int> orphans;
        for (size_t g : visible) {
            faces[g].alive = false;
            orphans.insert(orphans.end(), faces[g].outside.begin(), faces[g].outside.end());
            faces[g].outside.clear();
        }

        for (const auto& [edge, count] : edge_count) {
            if (count != 1) continue;  // interior edge of the visible region
            Face nf = make_face(edge.first, edge.second, apex, points, interior);
            for (int idx : orphans) {
                if (idx == apex) continue;
                if (nf.dist(points[idx]) > eps) nf.outside.push_back(idx);
            }
            faces.push_back(std::move(nf));
            if (!faces.back().outside.empty()) pending.push_back(faces.size() - 1);
        }

        // Orphans may be outside several new faces; points swallowed by the
        // cone interior are dropped (they are inside the hull).
        // (Each orphan was offered to every new face above; duplicates in
        // multiple outside sets are harmless for vertex extraction.)
    }

    std::set<int> verts;
    for (const auto& f : faces)
        if (f.alive) {
            verts.insert(f.a);
            verts.insert(f.b);
            verts.insert(f.c);
        }
    return {verts.begin(), verts.end()};
}

}  // namespace specvs::detail
