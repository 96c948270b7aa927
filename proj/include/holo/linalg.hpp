/*
 * linalg.hpp — matrix exponential kernel and friends.
 *
 * Anti-hermitian inputs go through the eigendecomposition of the hermitian
 * matrix iX, which keeps e^X unitary to rounding. Everything else falls back
 * to Pade scaling-and-squaring.
 */
#pragma once

#include <stdexcept>
#include <utility>

#include "holo/fock.hpp"

namespace holo {

class NonFiniteInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// log_unitary was handed a matrix with an eigenvalue too close to -1.
class BranchAmbiguity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

bool all_finite(const Matrix& m);
bool is_anti_hermitian(const Matrix& m, double tol = 0.0);
bool is_unitary(const Matrix& m, double tol);
/// max |U^dagger U - I|.
double unitarity_defect(const Matrix& m);

/// e^X. Throws NonFiniteInput on NaN/inf entries.
Matrix matrix_exp(const Matrix& x);
FockOperator matrix_exp(const FockOperator& x);

/// e^X for X anti-hermitian, via eigendecomposition of iX.
Matrix exp_anti_hermitian(const Matrix& x);
/// e^X by scaling-and-squaring, for any square X.
Matrix exp_general(const Matrix& x);

struct ExpDerivative {
  Matrix value;       // e^X
  Matrix derivative;  // d/dt e^{X + tE} at t = 0
};

/// Frechet derivative of the exponential from the block identity
///   exp([[X, E], [0, X]]) = [[e^X, L(X, E)], [0, e^X]].
ExpDerivative exp_frechet_block(const Matrix& x, const Matrix& e);

/// Same derivative for anti-hermitian X through the divided-difference
/// (Daleckii-Krein) formula in the eigenbasis of iX.
ExpDerivative exp_frechet_eigen(const Matrix& x, const Matrix& e);

/// Principal logarithm of a unitary matrix, returned exactly anti-hermitian.
/// Throws BranchAmbiguity when some eigenphase is within branch_tol of pi and
/// std::invalid_argument when the input is not unitary within unitary_tol.
Matrix log_unitary(const Matrix& u, double unitary_tol = 1e-8, double branch_tol = 1e-8);

}  // namespace holo
