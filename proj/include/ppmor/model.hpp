#pragma once

// State-space and port-Hamiltonian representations, transfer-function
// evaluation, the xi-shift and minimality diagnostics.

#include <optional>

#include "ppmor/common.hpp"

namespace ppmor {

// Square LTI model x' = A x + B u, y = C x + D u with n states and m ports.
struct StateSpaceModel {
  Matrix A, B, C, D;

  StateSpaceModel() = default;
  // Validates shapes (A n x n, B n x m, C m x n, D m x m) and finiteness.
  StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix d);

  Index n() const { return A.rows(); }
  Index m() const { return D.rows(); }
};

// x' = (J - R) Q x + (G - P) u,  y = (G + P)^T Q x + (N + S) u.
struct PortHamiltonianModel {
  Matrix J, R, Q, G, P, N, S;

  PortHamiltonianModel() = default;
  // Validates shapes and the structural conditions: J, N skew; the
  // dissipation block [[R, P], [P^T, S]] and Q positive semidefinite.
  PortHamiltonianModel(Matrix j, Matrix r, Matrix q, Matrix g, Matrix p, Matrix n, Matrix s,
                       const Tolerances& tol = default_tolerances());

  Index n() const { return J.rows(); }
  Index m() const { return N.rows(); }

  // [[R, P], [P^T, S]]
  Matrix dissipation() const;
  // [[-J, -G], [G^T, N]]
  Matrix interconnection() const;
};

// C (sI - A)^{-1} B + D through an LU solve. Throws PoleError when sI - A is
// numerically singular.
CMatrix evaluate_transfer(const StateSpaceModel& model, Complex s);

// Phi(i w) = Z(i w)^H + Z(i w).
CMatrix evaluate_phi(const StateSpaceModel& model, double omega);

// {A + xi/2 I, B, C, D - xi/2 I}; Z_xi(s) = Z(s - xi/2) - xi/2 I.
StateSpaceModel shift_model(const StateSpaceModel& model, double xi);

// A = (J - R) Q, B = G - P, C = (G + P)^T Q, D = N + S.
StateSpaceModel ph_to_statespace(const PortHamiltonianModel& ph);

struct NormalizedRealization {
  PortHamiltonianModel ph;  // Q = I
  Matrix T;                 // upper-triangular, X = T^T T
};

// Normalized port-Hamiltonian form in the coordinates z = T x, X = T^T T.
// Throws NotPositiveDefinite if X is not positive definite and
// NumericalError (magnitude = violation) if X fails the KYP check.
NormalizedRealization normalize_with_certificate(const StateSpaceModel& model, const Matrix& x,
                                                 const Tolerances& tol = default_tolerances());

struct MinimalityReport {
  double controllability_margin = 0.0;
  double observability_margin = 0.0;
};

// Hautus-test margins: min over eigenvalues lambda of A of
// sigma_min([A - lambda I, B]) and sigma_min([A - lambda I; C]), divided by
// ||[A B]||. Zero means non-minimal.
MinimalityReport minimality_report(const StateSpaceModel& model);

// Evaluates Z on many points in O(n^2) each after a one-off Hessenberg
// reduction of A. Suited for frequency sweeps on large models.
class FrequencyEvaluator {
 public:
  explicit FrequencyEvaluator(const StateSpaceModel& model);

  // Returns nullopt when s is numerically a pole.
  std::optional<CMatrix> operator()(Complex s) const;

  Index n() const { return hess_.rows(); }
  Index m() const { return d_.rows(); }

 private:
  Matrix hess_;  // upper Hessenberg, A = Q H Q^T
  Matrix bq_;    // Q^T B
  Matrix cq_;    // C Q
  Matrix d_;
  double scale_ = 0.0;
};

}  // namespace ppmor
