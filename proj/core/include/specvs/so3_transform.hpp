#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "specvs/egi.hpp"
#include "specvs/rigid_transform.hpp"
#include "specvs/spherical_harmonics.hpp"
#include "specvs/types.hpp"
#include "specvs/wigner.hpp"

namespace specvs {

/// Real spherical-harmonic coefficient stack: blocks[l] has length 2l+1 for
/// each degree l < l_max.
struct SphCoeffs {
    int bandwidth = 16;           // sampling grid bandwidth B
    std::vector<VecX> blocks;     // degree blocks F^0 .. F^{l_max-1}

    int l_max() const { return static_cast<int>(blocks.size()); }
    double energy() const;        // sum_l ||F^l||^2
    SphCoeffs normalized() const; // unit-energy copy (zero stack unchanged)
};

enum class RotationAxis { kX = 0, kY = 1, kZ = 2 };

/// Precomputed per-bandwidth machinery: T^l change-of-basis matrices, real
/// basis values at the 2B x 2B grid nodes, quadrature weights that make the
/// forward transform exact for band-limited (l < B) inputs, and the
/// so(3) generators u^l(e_k) in the real basis.
class HarmonicTables {
public:
    HarmonicTables(int bandwidth, int l_max);

    int bandwidth() const { return bandwidth_; }
    int l_max() const { return l_max_; }
    int node_count() const { return 4 * bandwidth_ * bandwidth_; }

    const MatXc& t_matrix(int l) const { return t_[l]; }
    /// (2l+1) x node_count matrix of S^l values; node index = j*2B + k.
    const MatX& basis_at_nodes(int l) const { return s_nodes_[l]; }
    /// Quadrature weight per node, including the azimuthal pi/B factor;
    /// weights sum to 4 pi.
    const VecX& node_weights() const { return node_weights_; }
    const MatX& generator(int l, RotationAxis axis) const {
        return generators_[l][static_cast<int>(axis)];
    }

    /// Shared, lazily built tables (immutable, safe to use across threads).
    static std::shared_ptr<const HarmonicTables> get(int bandwidth, int l_max);

private:
    int bandwidth_;
    int l_max_;
    std::vector<MatXc> t_;
    std::vector<MatX> s_nodes_;
    VecX node_weights_;
    std::vector<std::array<MatX, 3>> generators_;
};

/// Forward transform of samples on the 2B x 2B grid (node index j*2B + k)
/// by quadrature: F^l = sum_n w_n f_n S^l(node_n). Exact for band-limited
/// inputs with l < B.
SphCoeffs sph_forward(const VecX& samples, const HarmonicTables& tables);

/// EGI counts as grid samples.
SphCoeffs sph_forward(const Egi& egi, const HarmonicTables& tables);

/// Band-limited synthesis at the grid nodes: f_n = sum_l (F^l)^T S^l(node_n).
VecX sph_synthesis(const SphCoeffs& coeffs, const HarmonicTables& tables);

/// Real rotation operator U^l(R) = conj(T^l) D^l(R) (T^l)^T acting on degree
/// blocks: rotating a cloud by R maps F^l to U^l(R) F^l. Throws
/// imaginary-residue-exceeded if the conjugation does not come out real.
MatX u_operator(int l, double alpha, double beta, double gamma, const MatXc& t);
MatX u_operator(int l, const Mat3& rotation, const MatXc& t);

/// Generator u^l(e_k) = d/de U^l(exp(e hat(e_k))) at e = 0; skew-symmetric.
/// Assembled analytically from the angular-momentum operators in the complex
/// basis, not by finite differences.
MatX u_generator(int l, RotationAxis axis, const MatXc& t);

/// C_r(R) = (1/4pi) sum_l (G^l)^T U^l(R) F^l. Peaks at the rotation R0 with
/// g(omega) = f(R0^T omega), i.e. the rotation carrying the f-cloud onto the
/// g-cloud.
double so3_correlation(const SphCoeffs& f, const SphCoeffs& g, const Mat3& rotation,
                       const HarmonicTables& tables);

/// Gradient of C_r under right perturbation R exp(e hat(e_k)), component k =
/// (1/4pi) sum_l (G^l)^T U^l(R) u^l(e_k) F^l.
Vec3 correlation_gradient(const SphCoeffs& f, const SphCoeffs& g, const Mat3& rotation,
                          const HarmonicTables& tables);

struct CorrelationEval {
    double value = 0.0;
    Vec3 gradient = Vec3::Zero();
};
CorrelationEval so3_corr_and_grad(const SphCoeffs& f, const SphCoeffs& g, const Mat3& rotation,
                                  const HarmonicTables& tables);

/// J_r(R) = 1/2 sum over grid nodes of (g(node) - f(R^T node))^2 with
/// nearest-node lookup of the rotated direction; both EGIs are normalized by
/// their total mass first.
double rotation_cost(const Egi& f, const Egi& g, const Mat3& rotation);

struct AscendOptions {
    Mat3 initial = Mat3::Identity();
    double step = 0.0;          // lambda_r; 0 = auto (0.1 / (||F|| ||G||))
    bool adaptive = true;       // reject decreasing steps, adapt the rate
    int max_iters = 2000;
    double grad_tol = 1e-10;    // stop when ||grad|| < grad_tol
};
struct AscendResult {
    Mat3 rotation = Mat3::Identity();
    double correlation = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Gradient ascent of C_r over SO(3): R <- R exp(step * hat(grad)).
AscendResult so3_ascend(const SphCoeffs& f, const SphCoeffs& g, const HarmonicTables& tables,
                        const AscendOptions& options = {});

/// Debug dump: "l,index,value" rows (index in [0, 2l]).
void write_coeffs_csv(const std::string& path, const SphCoeffs& coeffs);

}  // namespace specvs
