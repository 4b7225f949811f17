#include "specvs/so3_transform.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>

#include "specvs/error.hpp"

namespace specvs {
namespace {

void check_pair(const SphCoeffs& f, const SphCoeffs& g) {
    if (f.bandwidth != g.bandwidth || f.l_max() != g.l_max())
        throw InvalidArgument("bandwidth-mismatch",
                              "coefficient stacks have different bandwidth or degree range");
}

MatX real_part_checked(const MatXc& m, double tol, const char* what) {
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0);
    if (m.imag().cwiseAbs().maxCoeff() > tol * scale)
        throw NumericalError("imaginary-residue-exceeded", what);
    return m.real();
}

/// -i J_k in the complex |l m> basis (m ascending). These are the
/// derivatives of D^l(exp(e hat(e_k))) at e = 0.
MatXc minus_i_j(int l, RotationAxis axis) {
    const int n = 2 * l + 1;
    MatXc m = MatXc::Zero(n, n);
    const auto idx = [l](int mm) { return mm + l; };
    const Complex i_unit(0.0, 1.0);
    switch (axis) {
        case RotationAxis::kZ:
            for (int mm = -l; mm <= l; ++mm) m(idx(mm), idx(mm)) = -i_unit * static_cast<double>(mm);
            break;
        case RotationAxis::kY:
            for (int mm = -l; mm <= l; ++mm) {
                if (mm + 1 <= l) {
                    const double c = std::sqrt(static_cast<double>(l - mm) * (l + mm + 1));
                    m(idx(mm + 1), idx(mm)) -= 0.5 * c;
                }
                if (mm - 1 >= -l) {
                    const double c = std::sqrt(static_cast<double>(l + mm) * (l - mm + 1));
                    m(idx(mm - 1), idx(mm)) += 0.5 * c;
                }
            }
            break;
        case RotationAxis::kX:
            for (int mm = -l; mm <= l; ++mm) {
                if (mm + 1 <= l) {
                    const double c = std::sqrt(static_cast<double>(l - mm) * (l + mm + 1));
                    m(idx(mm + 1), idx(mm)) -= 0.5 * i_unit * c;
                }
                if (mm - 1 >= -l) {
                    const double c = std::sqrt(static_cast<double>(l + mm) * (l - mm + 1));
                    m(idx(mm - 1), idx(mm)) -= 0.5 * i_unit * c;
                }
            }
            break;
    }
    return m;
}

MatXc wigner_big_d(int l, double alpha, double beta, double gamma) {
    const MatX d = wigner_d(l, beta);
    MatXc big(2 * l + 1, 2 * l + 1);
    for (int mp = -l; mp <= l; ++mp)
        for (int m = -l; m <= l; ++m)
            big(mp + l, m + l) = std::polar(1.0, -mp * alpha) * d(mp + l, m + l) *
                                 std::polar(1.0, -m * gamma);
    return big;
}

}  // namespace

double SphCoeffs::energy() const {
    double e = 0.0;
    for (const auto& b : blocks) e += b.squaredNorm();
    return e;
}

SphCoeffs SphCoeffs::normalized() const {
    SphCoeffs out = *this;
    const double norm = std::sqrt(energy());
    if (norm > 0.0)
        for (auto& b : out.blocks) b /= norm;
    return out;
}

HarmonicTables::HarmonicTables(int bandwidth, int l_max)
    : bandwidth_(bandwidth), l_max_(l_max) {
    if (bandwidth <= 0 || (bandwidth & (bandwidth - 1)) != 0)
        throw InvalidArgument("bad-bandwidth", "bandwidth must be a positive power of two");
    if (l_max < 1 || l_max > 2 * bandwidth)
        throw InvalidArgument("bad-degree", "l_max must be in [1, 2B]");

    const int n = 2 * bandwidth;

    t_.reserve(l_max);
    for (int l = 0; l < l_max; ++l) t_.push_back(real_harmonic_t_matrix(l));

    // Quadrature weights for the offset equiangular grid: exact integration
    // of Legendre polynomials in cos(theta) up to degree 2B-1 against
    // sin(theta) d(theta), times the uniform pi/B azimuthal rule.
    VecX w_theta(n);
    for (int j = 0; j < n; ++j) {
        const double theta = kPi * (2 * j + 1) / (4.0 * bandwidth);
        double sum = 0.0;
        for (int p = 0; p < bandwidth; ++p)
            sum += std::sin((2 * p + 1) * theta) / (2 * p + 1);
        w_theta(j) = (2.0 / bandwidth) * std::sin(theta) * sum;
    }
    node_weights_.resize(node_count());
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            node_weights_(j * n + k) = (kPi / bandwidth) * w_theta(j);

    s_nodes_.reserve(l_max);
    for (int l = 0; l < l_max; ++l) s_nodes_.emplace_back(2 * l + 1, node_count());
    for (int j = 0; j < n; ++j) {
        const double theta = kPi * (2 * j + 1) / (4.0 * bandwidth);
        const auto legendre = normalized_legendre(l_max - 1, theta);
        for (int k = 0; k < n; ++k) {
            const double phi = kPi * k / bandwidth;
            const int node = j * n + k;
            for (int l = 0; l < l_max; ++l) {
                VecXc y(2 * l + 1);
                for (int m = 0; m <= l; ++m) {
                    const Complex e = std::polar(1.0, m * phi);
                    y(l + m) = legendre[l](m) * e;
                    if (m > 0)
                        y(l - m) = ((m % 2 == 0) ? 1.0 : -1.0) * legendre[l](m) * std::conj(e);
                }
                const VecXc s = t_[l] * y;
                s_nodes_[l].col(node) = s.real();
            }
        }
    }

    generators_.reserve(l_max);
    for (int l = 0; l < l_max; ++l) {
        std::array<MatX, 3> gens;
        for (int a = 0; a < 3; ++a) {
            const MatXc u = t_[l].conjugate() * minus_i_j(l, static_cast<RotationAxis>(a)) *
                            t_[l].transpose();
            gens[a] = real_part_checked(u, 1e-12, "generator conjugation is not real");
        }
        generators_.push_back(std::move(gens));
    }
}

std::shared_ptr<const HarmonicTables> HarmonicTables::get(int bandwidth, int l_max) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const HarmonicTables>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(bandwidth, l_max);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto tables = std::make_shared<const HarmonicTables>(bandwidth, l_max);
    cache.emplace(key, tables);
    return tables;
}

SphCoeffs sph_forward(const VecX& samples, const HarmonicTables& tables) {
    if (samples.size() != tables.node_count())
        throw InvalidArgument("bad-dims", "sample vector does not match the sphere grid");
    const VecX weighted = samples.cwiseProduct(tables.node_weights());
    SphCoeffs out;
    out.bandwidth = tables.bandwidth();
    out.blocks.reserve(tables.l_max());
    for (int l = 0; l < tables.l_max(); ++l) out.blocks.push_back(tables.basis_at_nodes(l) * weighted);
    return out;
}

SphCoeffs sph_forward(const Egi& egi, const HarmonicTables& tables) {
    if (2 * egi.bandwidth != 2 * tables.bandwidth())
        throw InvalidArgument("bandwidth-mismatch", "EGI and tables bandwidth differ");
    VecX samples(tables.node_count());
    for (int i = 0; i < samples.size(); ++i) samples(i) = static_cast<double>(egi.counts[i]);
    return sph_forward(samples, tables);
}

VecX sph_synthesis(const SphCoeffs& coeffs, const HarmonicTables& tables) {
    VecX samples = VecX::Zero(tables.node_count());
    const int l_max = std::min(coeffs.l_max(), tables.l_max());
    for (int l = 0; l < l_max; ++l)
        samples += tables.basis_at_nodes(l).transpose() * coeffs.blocks[l];
    return samples;
}

MatX u_operator(int l, double alpha, double beta, double gamma, const MatXc& t) {
    const MatXc u = t.conjugate() * wigner_big_d(l, alpha, beta, gamma) * t.transpose();
    return real_part_checked(u, 1e-9, "U^l conjugation is not real");
}

MatX u_operator(int l, const Mat3& rotation, const MatXc& t) {
    const EulerZyz e = zyz_from_rotation(rotation);
    return u_operator(l, e.alpha, e.beta, e.gamma, t);
}

MatX u_generator(int l, RotationAxis axis, const MatXc& t) {
    const MatXc u = t.conjugate() * minus_i_j(l, axis) * t.transpose();
    return real_part_checked(u, 1e-12, "generator conjugation is not real");
}

double so3_correlation(const SphCoeffs& f, const SphCoeffs& g, const Mat3& rotation,
                       const HarmonicTables& tables) {
    return so3_corr_and_grad(f, g, rotation, tables).value;
}

Vec3 correlation_gradient(const SphCoeffs& f, const SphCoeffs& g, const Mat3& rotation,
                          const HarmonicTables& tables) {
    return so3_corr_and_grad(f, g, rotation, tables).gradient;
}

CorrelationEval so3_corr_and_grad(const SphCoeffs& f, const SphCoeffs& g, const Mat3& rotation,
                                  const HarmonicTables& tables) {
    check_pair(f, g);
    if (f.l_max() > tables.l_max())
        throw InvalidArgument("bandwidth-mismatch", "tables cover fewer degrees than the stack");

    const EulerZyz e = zyz_from_rotation(rotation);
    CorrelationEval out;
    for (int l = 0; l < f.l_max(); ++l) {
        const MatX u = u_operator(l, e.alpha, e.beta, e.gamma, tables.t_matrix(l));
        const VecX uf = u * f.blocks[l];
        out.value += g.blocks[l].dot(uf);
        for (int a = 0; a < 3; ++a) {
            const VecX gen_f = tables.generator(l, static_cast<RotationAxis>(a)) * f.blocks[l];
            out.gradient(a) += g.blocks[l].dot(u * gen_f);
        }
    }
    const double scale = 1.0 / (4.0 * kPi);
    out.value *= scale;
    out.gradient *= scale;
    return out;
}

double rotation_cost(const Egi& f, const Egi& g, const Mat3& rotation) {
    if (f.bandwidth != g.bandwidth)
        throw InvalidArgument("bandwidth-mismatch", "EGIs have different bandwidth");
    const double f_total = static_cast<double>(f.total());
    const double g_total = static_cast<double>(g.total());
    if (f_total <= 0.0 || g_total <= 0.0)
        throw InvalidArgument("missing-normals", "EGI has zero mass");

    const int n = f.grid_size();
    const Mat3 rt = rotation.transpose();
    double cost = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const Vec3 dir = sph_to_cart({f.theta_node(j), f.phi_node(k)});
            const EgiBin bin = nearest_egi_bin(cart_to_sph(rt * dir), f.bandwidth);
            const double fv = static_cast<double>(f.at(bin.j, bin.k)) / f_total;
            const double gv = static_cast<double>(g.at(j, k)) / g_total;
            const double diff = gv - fv;
            cost += diff * diff;
        }
    return 0.5 * cost;
}

AscendResult so3_ascend(const SphCoeffs& f, const SphCoeffs& g, const HarmonicTables& tables,
                        const AscendOptions& options) {
    check_pair(f, g);
    AscendResult res;
    res.rotation = options.initial;

    const double energy_scale = std::sqrt(f.energy()) * std::sqrt(g.energy());
    double step = options.step > 0.0 ? options.step
                                     : 0.1 / std::max(energy_scale, 1e-300);

    CorrelationEval eval = so3_corr_and_grad(f, g, res.rotation, tables);
    for (int it = 0; it < options.max_iters; ++it) {
        res.iterations = it;
        res.grad_norm = eval.gradient.norm();
        if (res.grad_norm < options.grad_tol) {
            res.converged = true;
            break;
        }
        const Mat3 candidate =
            orthonormalized(res.rotation * rotation_exp(step * eval.gradient));
        const CorrelationEval next = so3_corr_and_grad(f, g, candidate, tables);
        if (!options.adaptive) {
            res.rotation = candidate;
            eval = next;
            continue;
        }
        if (next.value >= eval.value) {
            res.rotation = candidate;
            eval = next;
            step *= 1.5;
        } else {
            step *= 0.5;
            if (step * res.grad_norm < 1e-14) {  // no representable ascent step left
                res.converged = true;
                break;
            }
        }
    }
    res.correlation = eval.value;
    res.grad_norm = eval.gradient.norm();
    if (res.grad_norm < options.grad_tol) res.converged = true;
    return res;
}

void write_coeffs_csv(const std::string& path, const SphCoeffs& coeffs) {
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(path.c_str(), "w"), std::fclose);
    if (!f) throw IoError("cannot write '" + path + "'");
    std::fprintf(f.get(), "l,index,value\n");
    for (int l = 0; l < coeffs.l_max(); ++l)
        for (int i = 0; i < coeffs.blocks[l].size(); ++i)
            std::fprintf(f.get(), "%d,%d,%.17g\n", l, i, coeffs.blocks[l](i));
}

}  // namespace specvs
