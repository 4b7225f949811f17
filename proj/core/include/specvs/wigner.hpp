#pragma once

#include "specvs/types.hpp"

namespace specvs {

/// Wigner little-d matrix d^l(beta) for beta in [0, pi]. Rows and columns
/// are indexed m', m = -l..l ascending; d^l(0) = I and the matrix is
/// orthogonal. Entries follow the convention with
///   d^1 = [ (1+c)/2   s/sqrt2   (1-c)/2 ]
///         [ -s/sqrt2  c         s/sqrt2 ]
///         [ (1-c)/2   -s/sqrt2  (1+c)/2 ]
/// (c = cos beta, s = sin beta), i.e. d(beta) = exp(-i beta J_y) in the
/// complex harmonic basis.
///
/// Evaluation is a three-term recursion in m' per column, restricted to the
/// strip m' >= |m| where it recurses toward growth (stable), with the
/// remaining entries filled by the index symmetries. The seed row is
/// computed in the log domain, so no factorials overflow through l = 64.
MatX wigner_d(int l, double beta);

}  // namespace specvs
