#pragma once

// KYP machinery: the W(X, M) block matrix, certificate checks, the
// Hamiltonian matrix, strict passivity, extremal Riccati solutions, the shift
// limit Xi and passivity-radius lower bounds.

#include <string>
#include <vector>

#include "ppmor/model.hpp"

namespace ppmor {

enum class CertificateKind { kPassive, kStrictlyPassive };

// Result of checking X against the KYP inequalities.
struct Certificate {
  Matrix X;
  // Strongest property X certifies; nullopt-like `violated` when neither.
  enum class Status { kStrictlyPassive, kPassive, kViolated } status = Status::kViolated;
  double w_margin = 0.0;  // lambda_min(W(X, M))
  double x_margin = 0.0;  // lambda_min(X)
  double scale = 0.0;     // ||W(X, M)||, used for the PSD band
  std::string violation;  // empty unless status == kViolated or the requested kind failed

  // True when X certifies at least `kind`.
  bool certifies(CertificateKind kind) const;
};

struct AREResult {
  Matrix X;
  Matrix F;  // (D^T + D)^{-1} (C - B^T X)
  double residual = 0.0;  // ||Ricc(X)||_F
  CVector closed_loop_spectrum;  // eig(A - B F)
};

struct StrictPassivityReport {
  bool strictly_passive = false;
  enum class Failure { kNone, kUnstable, kFeedthroughSingular, kImaginaryZero } failure = Failure::kNone;
  double stability_abscissa = 0.0;  // max Re eig(A)
  double feedthrough_min = 0.0;     // lambda_min(D^T + D)
  double min_abs_real_zero = 0.0;   // min |Re| over Hamiltonian eigenvalues
  std::string detail;
};

// [[-A^T X - X A, C^T - X B], [C - B^T X, D^T + D]], exactly symmetric.
Matrix kyp_matrix(const StateSpaceModel& model, const Matrix& x);

// Classifies X per the passive / strictly passive KYP conditions, using
// -tol.psd * scale as the PSD boundary. Never throws on a violation.
Certificate verify_certificate(const StateSpaceModel& model, const Matrix& x,
                               const Tolerances& tol = default_tolerances());

// Hamiltonian matrix with K = D^T + D:
// [[A - B K^{-1} C, -B K^{-1} B^T], [C^T K^{-1} C, -(A - B K^{-1} C)^T]].
// Throws InvalidInput if K is singular within tol.pd.
Matrix hamiltonian_matrix(const StateSpaceModel& model, const Tolerances& tol = default_tolerances());

StrictPassivityReport is_strictly_passive(const StateSpaceModel& model,
                                          const Tolerances& tol = default_tolerances());

// Riccati residual -X A - A^T X - (C^T - X B) K^{-1} (C - B^T X).
Matrix riccati_residual(const StateSpaceModel& model, const Matrix& x);

struct ExtremalSolutions {
  AREResult minus;  // from the stable invariant subspace
  AREResult plus;   // from the anti-stable invariant subspace
};

ExtremalSolutions solve_are_extremal(const StateSpaceModel& model,
                                     const Tolerances& tol = default_tolerances());

// Bisection for the supremum of xi keeping shift_model(model, xi) strictly
// passive, over [0, lambda_min(D^T + D)).
double compute_xi_limit(const StateSpaceModel& model, const Tolerances& tol = default_tolerances());

// First grid point k * hi / points (k = 1..points) at which the shifted model
// stops being strictly passive, minus half a step; cross-check for the
// bisection. Returns lambda_min(D^T + D) when no failure is found.
double xi_limit_grid_scan(const StateSpaceModel& model, int points,
                          const Tolerances& tol = default_tolerances());

// Smallest eigenvalue of Phi(i w) over a log grid; coarse diagnostic that
// complements the Hamiltonian test.
double min_phi_on_grid(const StateSpaceModel& model, double w_min, double w_max, int points);

// lambda_min([[R, P], [P^T, S]]) for a normalized (Q = I) model.
double normalized_passivity_radius(const PortHamiltonianModel& ph,
                                   const Tolerances& tol = default_tolerances());

}  // namespace ppmor
