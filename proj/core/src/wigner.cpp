#include "specvs/wigner.hpp"

#include <cmath>

#include "specvs/error.hpp"

namespace specvs {

MatX wigner_d(int l, double beta) {
    if (l < 0) throw InvalidArgument("bad-degree", "l must be >= 0");
    if (beta < 0.0 || beta > kPi)
        throw InvalidArgument("bad-angle", "beta must lie in [0, pi]");
    const int n = 2 * l + 1;
    const auto idx = [l](int m) { return m + l; };

    MatX d = MatX::Zero(n, n);
    if (l == 0) {
        d(0, 0) = 1.0;
        return d;
    }
    if (beta < 1e-12) return MatX::Identity(n, n);
    if (kPi - beta < 1e-12) {
        // d(pi): antidiagonal with sign (-1)^(l-m).
        for (int m = -l; m <= l; ++m)
            d(idx(-m), idx(m)) = ((l - m) % 2 == 0) ? 1.0 : -1.0;
        return d;
    }

    const double cb = std::cos(beta);
    const double sb = std::sin(beta);
    const double log_ch = std::log(std::cos(beta / 2.0));
    const double log_sh = std::log(std::sin(beta / 2.0));
    const double sin_half_sq = std::sin(beta / 2.0) * std::sin(beta / 2.0);
    const double cos_half_sq = std::cos(beta / 2.0) * std::cos(beta / 2.0);

    // Strip m' in [|m|, l] per column m, recursed downward from the m' = l
    // seed. Values carry a shared log-scale offset so deep sub-normal seeds
    // keep full relative accuracy.
    for (int m = -l; m <= l; ++m) {
        const double log_seed = 0.5 * (std::lgamma(2.0 * l + 1.0) - std::lgamma(l + m + 1.0) -
                                       std::lgamma(l - m + 1.0)) +
                                (l + m) * log_ch + (l - m) * log_sh;
        const double seed_sign = ((l - m) % 2 == 0) ? 1.0 : -1.0;

        double offset = 0.0;
        double curr = 0.0;
        if (log_seed < -600.0) {
            offset = log_seed;
            curr = seed_sign;
        } else {
            curr = seed_sign * std::exp(log_seed);
        }
        double prev = 0.0;  // d[m'+1][m], zero above the seed row

        d(idx(l), idx(m)) = curr * (offset == 0.0 ? 1.0 : std::exp(offset));
        for (int mp = l; mp - 1 >= std::abs(m); --mp) {
            // 2(m - m' cos beta) without cancellation near beta = 0 or pi.
            const double num = (cb >= 0.0) ? (m - mp) + 2.0 * mp * sin_half_sq
                                           : (m + mp) - 2.0 * mp * cos_half_sq;
            const double coef = 2.0 * num / sb;
            const double next =
                (coef * curr - std::sqrt(static_cast<double>(l - mp) * (l + mp + 1)) * prev) /
                std::sqrt(static_cast<double>(l + mp) * (l - mp + 1));
            prev = curr;
            curr = next;
            if (offset != 0.0) {
                const double mag = std::abs(curr);
                if (mag > 1e200) {  // fold growth back into the offset
                    offset += std::log(mag);
                    curr /= mag;
                    prev /= mag;
                }
                d(idx(mp - 1), idx(m)) = curr * std::exp(offset);
            } else {
                d(idx(mp - 1), idx(m)) = curr;
            }
        }
    }

    // Remaining regions via d[m'][m] = (-1)^(m'-m) d[m][m'] = d[-m][-m'].
    for (int mp = -l; mp <= l; ++mp)
        for (int m = -l; m <= l; ++m) {
            if (mp >= std::abs(m)) continue;  // strip, already computed
            const double sign = ((mp - m) % 2 == 0) ? 1.0 : -1.0;
            if (m >= std::abs(mp))
                d(idx(mp), idx(m)) = sign * d(idx(m), idx(mp));
            else if (-m >= std::abs(mp))
                d(idx(mp), idx(m)) = d(idx(-m), idx(-mp));
            else
                d(idx(mp), idx(m)) = sign * d(idx(-mp), idx(-m));
        }
    return d;
}

}  // namespace specvs
