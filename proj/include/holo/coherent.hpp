/*
 * coherent.hpp — Schwinger su(2) / su(1,1) generators and the coherent
 * operators
 *
 *   U(xi)   = exp(xi a1^dag a2 - conj(xi) a2^dag a1)        (beam splitter)
 *   V(zeta) = exp(zeta a1^dag a2^dag - conj(zeta) a2 a1)    (two-mode squeeze)
 *
 * in direct-exponential and normal-ordered (disentangled) form.
 *
 * Truncation notes. U conserves n1 + n2, but shells with n1 + n2 > cutoff are
 * incomplete and do not carry an su(2) representation, so the disentangled
 * product only agrees with U on complete shells. V conserves n1 - n2 and
 * leaks amplitude tanh|zeta|^n towards the cutoff.
 */
#pragma once

#include <stdexcept>

#include "holo/fock.hpp"
#include "holo/sectors.hpp"

namespace holo {

struct Su2Generators {
  FockOperator j_plus;   // a1^dag a2
  FockOperator j_minus;  // a2^dag a1
  FockOperator j_3;      // (N1 - N2) / 2
};

struct Su11Generators {
  FockOperator k_plus;   // a1^dag a2^dag
  FockOperator k_minus;  // a2 a1
  FockOperator k_3;      // (N1 + N2 + 1) / 2
};

Su2Generators su2_generators(const FockSpace& space);
Su11Generators su11_generators(const FockSpace& space);

/// eta = xi tan|xi| / |xi|
cplx eta_of(cplx xi);
/// kappa = zeta tanh|zeta| / |zeta|
cplx kappa_of(cplx zeta);

/// Matrix elements of a x J+ + b x J- (total-number conserving).
MatrixElement su2_element(cplx plus, cplx minus);
/// Matrix elements of a x K+ + b x K- (number-difference conserving).
MatrixElement su11_element(cplx plus, cplx minus);

/// xi J+ - conj(xi) J- over the total-number sectors.
BlockOperator u_exponent(const FockSpace& space, cplx xi);
/// zeta K+ - conj(zeta) K- over the number-difference sectors.
BlockOperator v_exponent(const FockSpace& space, cplx zeta);

BlockOperator u_blocks(const FockSpace& space, cplx xi);
BlockOperator v_blocks(const FockSpace& space, cplx zeta);

FockOperator u_op(const FockSpace& space, cplx xi);
FockOperator v_op(const FockSpace& space, cplx zeta);

/// e^{eta J+} e^{log(1+|eta|^2) J3} e^{-conj(eta) J-}; requires |xi| < pi/2
/// (throws std::domain_error otherwise).
FockOperator u_disentangled(const FockSpace& space, cplx xi);
/// e^{kappa K+} e^{log(1-|kappa|^2) K3} e^{-conj(kappa) K-}.
FockOperator v_disentangled(const FockSpace& space, cplx zeta);

/// max |a_ij - b_ij| over states i, j with n1 + n2 <= max_total.
double shell_deviation(const FockOperator& a, const FockOperator& b, int max_total);
/// max ||(a - b)|n1, n2>|| over columns with n1 + n2 <= max_total.
double column_deviation(const FockOperator& a, const FockOperator& b, int max_total);

}  // namespace holo
