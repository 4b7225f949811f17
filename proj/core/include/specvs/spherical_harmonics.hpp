#pragma once

#include <vector>

#include "specvs/spherical.hpp"
#include "specvs/types.hpp"

namespace specvs {

/// Fully normalized associated Legendre values Pbar_l^m(cos theta) for all
/// l <= l_max, m in [0, l], Condon-Shortley phase included. out[l][m] is
/// Pbar_l^m; Y_l^m = Pbar_l^m e^{i m phi} is orthonormal on the sphere.
std::vector<VecX> normalized_legendre(int l_max, double theta);

/// Complex spherical harmonics Y^l(theta, phi), entries m = -l..l in
/// ascending order. Y^0_0 = 1/sqrt(4 pi).
VecXc complex_ylm(int l, const SphericalDirection& dir);

/// Unitary change of basis from complex to real harmonics: S^l = T^l Y^l.
/// Rows are indexed by the real harmonic index mu = -l..l ascending:
///   mu = 0:  picks Y_l^0
///   mu > 0:  (Y_l^{-mu} + (-1)^mu Y_l^{mu}) / sqrt(2)        (cosine type)
///   mu < 0:  i (Y_l^{-|mu|} - (-1)^{|mu|} Y_l^{|mu|}) / sqrt(2)  (sine type)
/// For l = 1 this yields sqrt(3/4pi) * (y, z, x).
MatXc real_harmonic_t_matrix(int l);

/// Real basis vector S^l(theta, phi) = T^l Y^l(theta, phi). Throws
/// imaginary-residue-exceeded if the product is not real within 1e-10,
/// which signals an inconsistent T^l convention.
VecX real_basis_s(int l, const SphericalDirection& dir, const MatXc& t);

}  // namespace specvs
