#pragma once

// Command implementations behind the `ppmor` executable, and the xi-sweep
// engine they share with the tests.

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "ppmor/gramians.hpp"
#include "ppmor/hinf.hpp"
#include "ppmor/reduction.hpp"

namespace ppmor {

struct CellResult {
  Index order = 0;          // requested
  Index achieved_order = 0;
  double xi = 0.0;
  bool probe = false;       // xi > Xi
  bool accepted = false;    // X_hat > 0 and the projection went through
  double relative_error = 0.0;  // NaN unless accepted and the error was computable
  double lmi_margin = 0.0;
  double lmi_scale = 0.0;
  double normalized_radius = 0.0;
  double interpolation = 0.0;
  double certificate_min = 0.0;
  double asymmetry = 0.0;
  double stability_abscissa = 0.0;
  double condition = 0.0;
  double score = 0.0;
  bool repeated_zeros = false;
  std::string status;       // "ok" or the reason for rejection
};

struct SweepConfig {
  std::vector<Index> orders;
  int xi_points = 20;              // equidistant over [0, Xi], endpoints included
  std::vector<double> xi_list;     // overrides xi_points when non-empty
  bool probe_beyond_xi = false;
  double probe_factor = 2.0;       // probes continue with the same step up to probe_factor * Xi
  int jobs = 1;
  bool bounds = true;              // BT / Hankel reference table
  ProjectionOptions projection;
  HinfOptions hinf;
};

struct OrderSummary {
  Index order = 0;
  Index cells = 0;
  Index accepted = 0;
  double min_error = 0.0;  // NaN when nothing was accepted
  double max_error = 0.0;
  double best_xi = 0.0;
  double xi0_error = 0.0;  // NaN when xi = 0 is not on the grid or was rejected
  double max_accepted_xi = 0.0;
};

struct BoundRow {
  Index order = 0;
  double hankel_lower = 0.0;  // sigma_{k+1} / ||Z||_inf
  double bt_error = 0.0;      // ||Z - Z_BT||_inf / ||Z||_inf
  double bt_bound = 0.0;      // 2 sum_{i>k} sigma_i / ||Z||_inf
  Index bt_order = 0;
  double best_error = 0.0;    // best spectral-zero error at this order
  std::string warning;
};

struct SweepResult {
  double xi_limit = 0.0;
  double feedthrough_min = 0.0;
  double hinf = 0.0;
  std::vector<double> xi_grid;
  std::vector<CellResult> cells;  // ordered by order, then xi
  std::vector<OrderSummary> summary;
  std::vector<BoundRow> bounds;
  HankelSpectrum hankel;
};

// Grid over [0, xi_limit] plus optional probes past it; probes stop before
// feedthrough_min, where the shifted Hamiltonian ceases to exist.
std::vector<double> make_xi_grid(double xi_limit, double feedthrough_min, const SweepConfig& config);

// Runs every (order, xi) cell. Cell failures are recorded, never thrown.
// Throws InvalidInput when the model is not strictly passive.
SweepResult run_sweep(const StateSpaceModel& model, const SweepConfig& config);

void write_sweep_csv(std::ostream& os, const SweepResult& result);
void write_summary_csv(std::ostream& os, const SweepResult& result);
void write_bounds_csv(std::ostream& os, const SweepResult& result);

// %.12g, empty for NaN.
std::string csv_number(double x);

// ---- commands ----

struct GenerateOptions {
  std::string kind;  // "rlc" or "random-ph"
  int sections = 100;
  double r = 0.1, l = 1.0, c = 1.0;
  int n = 6, m = 2;
  double lambda_min = 0.5;
  std::uint64_t seed = 7;
  std::string output;
};

struct XiOptions {
  std::string model;
  int grid_points = 200;  // grid-scan cross-check; 0 disables it
  Tolerances tol = default_tolerances();
};

struct ReduceOptions {
  std::string model;
  Index order = 0;
  double xi = 0.0;
  double xi_fraction = -1.0;  // when >= 0, xi = xi_fraction * Xi
  std::string output;         // reduced model (normalized pH realization)
  std::string report;         // JSON report
  ProjectionOptions projection;
  HinfOptions hinf;
};

struct SweepOptions {
  std::string model;
  std::string output_dir = ".";
  SweepConfig config;
};

struct SigmaOptions {
  std::string model;
  std::string model2;
  double w_min = 1e-3, w_max = 1e3;
  int points = 400;
  std::string output_dir = ".";
};

int cmd_generate(const GenerateOptions& opts, std::ostream& out);
int cmd_xi(const XiOptions& opts, std::ostream& out);
int cmd_reduce(const ReduceOptions& opts, std::ostream& out);
int cmd_sweep(const SweepOptions& opts, std::ostream& out);
int cmd_sigma(const SigmaOptions& opts, std::ostream& out);

// Maps InvalidInput to 2 and other failures to 1, printing the message to err.
int run_command(const std::function<int()>& fn, std::ostream& err);

}  // namespace ppmor
