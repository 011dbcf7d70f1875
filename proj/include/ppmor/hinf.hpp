#pragma once

// Sigma plots and the H-infinity norm by a level-set Hamiltonian test.

#include <ostream>
#include <vector>

#include "ppmor/model.hpp"

namespace ppmor {

struct SigmaPlot {
  Vector frequencies;      // log-spaced, strictly increasing
  Matrix values;           // points x m, descending per row; NaN on flagged points
  std::vector<bool> pole;  // true where the sample hit a pole
};

SigmaPlot sigma_sample(const StateSpaceModel& model, double w_min, double w_max, int points);

// Header `omega,sigma_1,...,sigma_m`, %.12g values.
void write_sigma_csv(std::ostream& os, const SigmaPlot& plot);

struct HinfOptions {
  double rel_tol = 1e-6;
  int grid_points = 400;
  double w_min = 1e-4;
  double w_max = 1e4;
  int max_iterations = 60;
};

struct HinfResult {
  double value = 0.0;          // attained lower bound, within rel_tol of the norm
  double upper = 0.0;          // level at which the Hamiltonian test found no crossing
  double peak_frequency = 0.0;
  int iterations = 0;
};

// Throws InvalidInput when A is not asymptotically stable.
HinfResult hinf_norm_detailed(const StateSpaceModel& model, const HinfOptions& opts = {});
double hinf_norm(const StateSpaceModel& model, double rel_tol = 1e-6);

// Parallel difference {diag(A, A_hat), [B; B_hat], [C, -C_hat], D - D_hat}.
StateSpaceModel error_system(const StateSpaceModel& model, const StateSpaceModel& reduced);

// ||Z - Z_hat||_inf / ||Z||_inf. `reference_norm` skips recomputing ||Z||_inf
// when positive.
double relative_error(const StateSpaceModel& model, const StateSpaceModel& reduced, double reference_norm = -1.0,
                      const HinfOptions& opts = {});

}  // namespace ppmor
