#pragma once

// Dense numerical primitives used by every other module.

#include <vector>

#include "ppmor/common.hpp"

namespace ppmor {

struct EigenPair {
  Complex value;
  CVector vector;  // unit 2-norm
};

// Eigenvalues/eigenvectors of a real square matrix (LAPACK dgeev).
// Sorted by real part ascending, ties by imaginary part ascending.
std::vector<EigenPair> eig(const Matrix& m);

// Eigenvalues only, same ordering as eig().
CVector eigenvalues(const Matrix& m);

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // orthogonal, columns match values
};

// Symmetric eigendecomposition. Rejects inputs with
// ||M - M^T|| > symmetry_tol * ||M||; symmetrizes before factoring.
SymmetricEigen symmetric_eig(const Matrix& m, double symmetry_tol = 1e-10);

// Smallest eigenvalue of the symmetric part of m.
double lambda_min_sym(const Matrix& m);

// Solves A X + X A^T + Q = 0 (Bartels-Stewart on the complex Schur form).
// Throws NumericalError when two eigenvalues of A nearly sum to zero.
Matrix solve_lyapunov(const Matrix& a, const Matrix& q);

struct PivotedCholesky {
  std::vector<Index> permutation;  // permutation[k] = original index of pivot k
  Matrix factor;                   // n x rank lower-trapezoidal, in pivoted order
  Index rank = 0;
  std::vector<double> pivots;      // diagonal of the factor, non-increasing
};

// Greedy diagonal pivoting: P^T M P = L L^T with the largest remaining Schur
// complement diagonal chosen at every step.
// Throws NotPositiveDefinite at the first pivot <= tol * max(diag(M)).
PivotedCholesky pivoted_cholesky(const Matrix& m, double tol = 1e-14);

// Same pivot rule, but stops quietly at the first non-positive pivot and
// reports the rank reached. Remaining indices are appended to the
// permutation in their original order.
PivotedCholesky pivoted_cholesky_partial(const Matrix& m, double tol = 1e-14);

// Singular values, descending.
Vector singular_values(const Matrix& m);
Vector singular_values(const CMatrix& m);

// Orthonormal basis of the invariant subspace of `m` belonging to eigenvalues
// with negative (stable = true) or positive real part, from an ordered real
// Schur form. Throws NumericalError if the subspace dimension differs from
// `expected_dim`.
Matrix ordered_schur_basis(const Matrix& m, bool stable, Index expected_dim);

}  // namespace ppmor
