#include "specvs/spherical_harmonics.hpp"

#include <cmath>

#include "specvs/error.hpp"

namespace specvs {

std::vector<VecX> normalized_legendre(int l_max, double theta) {
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    std::vector<VecX> p(l_max + 1);
    for (int l = 0; l <= l_max; ++l) p[l] = VecX::Zero(l + 1);

    p[0](0) = std::sqrt(1.0 / (4.0 * kPi));
    // Diagonal Pbar_m^m, then the first off-diagonal, then the three-term
    // recursion upward in l. Stable for l well beyond the 64 used here.
    for (int m = 1; m <= l_max; ++m)
        p[m](m) = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * p[m - 1](m - 1);
    for (int m = 0; m < l_max; ++m)
        p[m + 1](m) = std::sqrt(2.0 * m + 3.0) * ct * p[m](m);
    for (int m = 0; m <= l_max; ++m) {
        for (int l = m + 2; l <= l_max; ++l) {
            const double a =
                std::sqrt((2.0 * l - 1.0) * (2.0 * l + 1.0) /
                          (static_cast<double>(l - m) * (l + m)));
            const double b =
                std::sqrt(((2.0 * l + 1.0) / (2.0 * l - 3.0)) *
                          (static_cast<double>(l - m - 1) * (l + m - 1)) /
                          (static_cast<double>(l - m) * (l + m)));
            p[l](m) = a * ct * p[l - 1](m) - b * p[l - 2](m);
        }
    }
    return p;
}

VecXc complex_ylm(int l, const SphericalDirection& dir) {
    if (l < 0) throw InvalidArgument("bad-degree", "l must be >= 0");
    const auto p = normalized_legendre(l, dir.theta);
    VecXc y(2 * l + 1);
    for (int m = 0; m <= l; ++m) {
        const Complex e = std::polar(1.0, m * dir.phi);
        y(l + m) = p[l](m) * e;
        if (m > 0) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            y(l - m) = sign * p[l](m) * std::conj(e);
        }
    }
    return y;
}

MatXc real_harmonic_t_matrix(int l) {
    const int n = 2 * l + 1;
    MatXc t = MatXc::Zero(n, n);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Complex i_unit(0.0, 1.0);
    t(l, l) = 1.0;
    for (int mu = 1; mu <= l; ++mu) {
        const double sign = (mu % 2 == 0) ? 1.0 : -1.0;
        t(l + mu, l - mu) = inv_sqrt2;
        t(l + mu, l + mu) = sign * inv_sqrt2;
        t(l - mu, l - mu) = i_unit * inv_sqrt2;
        t(l - mu, l + mu) = -i_unit * sign * inv_sqrt2;
    }
    return t;
}

VecX real_basis_s(int l, const SphericalDirection& dir, const MatXc& t) {
    if (t.rows() != 2 * l + 1)
        throw InvalidArgument("bad-degree", "T matrix degree does not match l");
    const VecXc s = t * complex_ylm(l, dir);
    const double scale = std::max(s.cwiseAbs().maxCoeff(), 1.0);
    if (s.imag().cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw NumericalError("imaginary-residue-exceeded",
                             "T^l Y^l is not real; inconsistent T^l convention");
    return s.real();
}

}  // namespace specvs
