#include "specvs/normal_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include <Eigen/Eigenvalues>

#include "specvs/error.hpp"

namespace specvs {
namespace {

// Uniform-grid spatial hash. Query expands cell shells until k neighbors are
// guaranteed, so results equal an exhaustive k-NN search.
class SpatialHash {
public:
    SpatialHash(const std::vector<Vec3>& points, double cell)
        : points_(points), cell_(cell) {
        buckets_.reserve(points.size());
        for (size_t i = 0; i < points.size(); ++i) {
            const Vec3i c = cell_index(points[i]);
            cell_min_ = cell_min_.cwiseMin(c);
            cell_max_ = cell_max_.cwiseMax(c);
            buckets_[key(c)].push_back(static_cast<int>(i));
        }
    }

    /// Indices of the k nearest neighbors of points[query] (excluding itself).
    std::vector<int> knn(int query, int k) const {
        const Vec3& q = points_[query];
        const Vec3i qc = cell_index(q);
        // Past this ring every occupied cell has been visited.
        const int last_ring =
            std::max((qc - cell_min_).cwiseAbs().maxCoeff(), (cell_max_ - qc).cwiseAbs().maxCoeff());
        std::vector<std::pair<double, int>> found;  // (squared distance, index)

        for (int ring = 0;; ++ring) {
            collect_ring(qc, ring, query, q, found);
            if (static_cast<int>(found.size()) >= k) {
                std::nth_element(found.begin(), found.begin() + (k - 1), found.end());
                const double kth = found[k - 1].first;
                // All cells within `ring` rings cover a ball of radius
                // ring*cell; neighbors beyond that may still be closer than
                // the kth candidate, so grow until the ball is conclusive.
                const double safe = static_cast<double>(ring) * cell_;
                if (kth <= safe * safe) break;
            }
            if (ring >= last_ring) break;
        }
        const int take = std::min<int>(k, static_cast<int>(found.size()));
        std::partial_sort(found.begin(), found.begin() + take, found.end());
        std::vector<int> out(take);
        for (int i = 0; i < take; ++i) out[i] = found[i].second;
        return out;
    }

private:
    Vec3i cell_index(const Vec3& p) const {
        return {static_cast<int>(std::floor(p.x() / cell_)),
                static_cast<int>(std::floor(p.y() / cell_)),
                static_cast<int>(std::floor(p.z() / cell_))};
    }
    static int64_t key(const Vec3i& c) {
        return (static_cast<int64_t>(c.x()) * 73856093) ^
               (static_cast<int64_t>(c.y()) * 19349663) ^
               (static_cast<int64_t>(c.z()) * 83492791);
    }

    void collect_ring(const Vec3i& qc, int ring, int query, const Vec3& q,
                      std::vector<std::pair<double, int>>& found) const {
        for (int dx = -ring; dx <= ring; ++dx)
            for (int dy = -ring; dy <= ring; ++dy)
                for (int dz = -ring; dz <= ring; ++dz) {
                    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
                    auto it = buckets_.find(key({qc.x() + dx, qc.y() + dy, qc.z() + dz}));
                    if (it == buckets_.end()) continue;
                    for (int idx : it->second) {
                        if (idx == query) continue;
                        found.emplace_back((points_[idx] - q).squaredNorm(), idx);
                    }
                }
    }

    const std::vector<Vec3>& points_;
    double cell_;
    std::unordered_map<int64_t, std::vector<int>> buckets_;
    Vec3i cell_min_ = Vec3i::Constant(std::numeric_limits<int>::max());
    Vec3i cell_max_ = Vec3i::Constant(std::numeric_limits<int>::min());
};

}  // namespace

PointCloud estimate_normals(const PointCloud& cloud, int k, std::optional<Vec3> viewpoint) {
    if (k < 3) throw InvalidArgument("insufficient-points", "k must be >= 3");
    if (cloud.size() < static_cast<size_t>(k) + 1)
        throw InvalidArgument("insufficient-points",
                              "need at least k+1 = " + std::to_string(k + 1) + " points, have " +
                                  std::to_string(cloud.size()));

    const Aabb box = bounding_box(cloud);
    const double diag = std::max(box.extent().norm(), 1e-12);
    // Aim for a handful of points per cell.
    const double cell = std::max(diag / std::cbrt(static_cast<double>(cloud.size())), 1e-9);
    SpatialHash hash(cloud.points, cell);

    const Vec3 center = centroid(cloud);
    PointCloud out = cloud;
    out.normals.assign(cloud.size(), Vec3::Zero());

    for (size_t i = 0; i < cloud.size(); ++i) {
        const auto nbrs = hash.knn(static_cast<int>(i), k);
        if (static_cast<int>(nbrs.size()) < k)
            throw InvalidArgument("insufficient-points", "fewer than k distinct neighbors");

        Vec3 mean = cloud.points[i];
        for (int j : nbrs) mean += cloud.points[j];
        mean /= static_cast<double>(nbrs.size() + 1);

        Mat3 cov = Mat3::Zero();
        {
            const Vec3 d = cloud.points[i] - mean;
            cov += d * d.transpose();
        }
        for (int j : nbrs) {
            const Vec3 d = cloud.points[j] - mean;
            cov += d * d.transpose();
        }

        Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
        const Vec3 evals = eig.eigenvalues();  // ascending
        // Two vanishing eigenvalues mean the neighborhood is collinear and
        // the surface normal is not defined.
        if (evals(1) <= 1e-12 * std::max(evals(2), 1e-300))
            throw NumericalError("degenerate-covariance",
                                 "collinear neighborhood at point " + std::to_string(i));
        Vec3 n = eig.eigenvectors().col(0).normalized();

        const Vec3 ref = viewpoint ? (*viewpoint - cloud.points[i])  // toward viewpoint
                                   : (cloud.points[i] - center);     // away from centroid
        if (n.dot(ref) < 0.0) n = -n;
        out.normals[i] = n;
    }
    return out;
}

}  // namespace specvs
