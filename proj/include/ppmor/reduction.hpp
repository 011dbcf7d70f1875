#pragma once

// Projection onto deflating subspaces, the xi-shifted variant with its
// certificate and radius bound, interpolation checks, projection with a given
// certificate and perturbation diagnostics.

#include <optional>
#include <string>
#include <vector>

#include "ppmor/passivity.hpp"
#include "ppmor/spectral.hpp"

namespace ppmor {

struct ReducedModel {
  StateSpaceModel model;       // {A_hat, B_hat, C_hat, D}
  Certificate certificate;     // X_hat = -U^T V (symmetrized), checked against W(X_hat, M_hat)
  double xi = 0.0;
  DeflatingBasis basis;        // basis of the (shifted) pencil
  std::optional<NormalizedRealization> normalized;  // empty when X_hat is too close to the KYP boundary
  std::string normalization_failure;
  double radius_lower_bound = 0.0;  // xi / 2
  double normalized_radius = 0.0;   // lambda_min of the normalized dissipation block, from W(X_hat, M_hat)
  double lmi_margin = 0.0;     // lambda_min(W(X_hat, M_hat) - xi diag(X_hat, I))
  double lmi_scale = 0.0;      // ||W(X_hat, M_hat)||_2
  double condition = 0.0;      // cond(U^T V)
  double asymmetry = 0.0;      // relative asymmetry of -U^T V
  Matrix W_reduced;            // W-block in reduced coordinates: A_hat + B_hat W = R - xi/2 I
};

struct ProjectionOptions {
  VectorNormalization normalization = VectorNormalization::kUnitColumn;
  Tolerances tol = default_tolerances();
};

// xi = 0 projection {(U^T V)^{-1} U^T A V, (U^T V)^{-1} U^T B, C V, D}.
ReducedModel project(const StateSpaceModel& model, const DeflatingBasis& basis,
                     const ProjectionOptions& opts = {});

// Builds the basis on shift_model(model, xi) from `selection` (indices into
// `shifted_zeros`, which must be the spectral zeros of the shifted model) and
// projects the ORIGINAL A. Throws NotPositiveDefinite when X_hat is not
// positive definite, NumericalError for ill-conditioned U^T V and
// InvalidInput when D^T + D - xi I is not positive definite.
ReducedModel project_shifted(const StateSpaceModel& model, double xi, const SpectralZeroSet& shifted_zeros,
                             const std::vector<Index>& selection, const ProjectionOptions& opts = {});

// Greedy selection of `order` zeros followed by project_shifted.
ReducedModel project_shifted(const StateSpaceModel& model, double xi, Index order,
                             const ProjectionOptions& opts = {});

struct InterpolationReport {
  double max_residual = 0.0;
  std::vector<double> right;   // per eigenpair of R, at sigma_j - xi/2
  std::vector<double> left;    // per eigenpair of R, at -sigma_j - xi/2
  double feedthrough = 0.0;    // ||D - D_hat||
  bool repeated_zeros = false; // derivative conditions not checked when set
};

// Relative tangential interpolation residuals of the reduced model against
// the original at the selected (shifted) zeros.
InterpolationReport verify_interpolation(const StateSpaceModel& model, const ReducedModel& reduced);

// Projection with a given strict certificate X and any full-column-rank V:
// X_hat = V^T X V, U = -X V X_hat^{-1}, so U^T V = -I.
ReducedModel project_with_certificate(const StateSpaceModel& model, const Matrix& x, const Matrix& v,
                                      const Tolerances& tol = default_tolerances());

struct RobustnessReport {
  double residual_u = 0.0;  // ||A_xi V + B W - V R||
  double residual_v = 0.0;  // ||A_xi^T U + C^T W + U R||
  double residual_w = 0.0;  // ||B^T U + C V + (D^T + D - xi I) W||
  double asymmetry = 0.0;   // ||X - X^T|| with X = -U^T V
  double certificate_min = 0.0;      // lambda_min(X_s)
  double symmetrized_margin = 0.0;   // lambda_min(W(X_s, M_tilde))
  double perturbation_norm = 0.0;    // ||[[D11, D12], [D12^T, 0]]||_2
  double guaranteed_margin = 0.0;    // xi * lambda_min(diag(X_s, I)) - perturbation_norm
  double normalized_radius = 0.0;    // lambda_min of the normalized dissipation block
  bool bound_check = false;          // symmetrized_margin >= guaranteed_margin (up to roundoff)
  bool certified = false;            // X_s > 0 and guaranteed_margin > 0
  bool passivity_lost = false;       // X_s or W(X_s, M_tilde) not positive definite
  Matrix delta11, delta12;
};

// Diagnostics for a computed (inexact) deflating basis of the xi-shifted
// pencil. Residuals are the s^0 parts of the pencil equation; the s^1 parts
// hold exactly by construction.
RobustnessReport robustness_diagnostics(const StateSpaceModel& model, const Matrix& u, const Matrix& v,
                                        const Matrix& w, const Matrix& r, double xi,
                                        const Tolerances& tol = default_tolerances());

}  // namespace ppmor
