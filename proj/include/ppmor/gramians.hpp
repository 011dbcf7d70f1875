#pragma once

// Hankel singular values and square-root balanced truncation. Balanced
// truncation is a reference method here; it does not preserve passivity.

#include <string>

#include "ppmor/model.hpp"

namespace ppmor {

struct HankelSpectrum {
  Vector values;  // descending, non-negative
};

// sigma_i = sqrt(lambda_i(P Q)) with A P + P A^T + B B^T = 0 and
// A^T Q + Q A + C^T C = 0. Throws InvalidInput for unstable A.
HankelSpectrum hankel_singular_values(const StateSpaceModel& model);

struct BalancedTruncation {
  StateSpaceModel model;
  double error_bound = 0.0;   // 2 * sum_{i > order} sigma_i
  Index order = 0;            // may be below the requested order
  Index requested_order = 0;
  std::string warning;        // set when the order was lowered
  HankelSpectrum hankel;
};

// Lowers the order while sigma_order and sigma_{order+1} are not separated
// (relative gap below gap_tol) or sigma_order is numerically zero.
BalancedTruncation balanced_truncation(const StateSpaceModel& model, Index order, double gap_tol = 1e-8);

}  // namespace ppmor
