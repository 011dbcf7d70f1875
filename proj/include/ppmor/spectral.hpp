#pragma once

// Spectral zeros, deflating bases and the greedy zero selection.

#include <vector>

#include "ppmor/model.hpp"

namespace ppmor {

enum class HalfPlane { kLeft, kImaginary, kRight };

// Eigenpairs of the Hamiltonian matrix. Eigenvectors are split as [v; u]
// with H [v; u] = [v; u] lambda.
struct SpectralZeroSet {
  CVector zeros;                  // sorted by (Re, Im)
  CMatrix vectors;                // 2n x 2n, unit columns
  std::vector<HalfPlane> half_plane;
  std::vector<Index> conjugate;   // index of the conjugate partner (self for real zeros)

  Index size() const { return zeros.size(); }
  std::vector<Index> right_half_plane() const;
  std::vector<Index> count_by_half_plane() const;  // {left, imaginary, right}
};

enum class VectorNormalization {
  kUnitColumn,  // ||[v; u]|| = 1
  kUnitV,       // ||v|| = 1
};

// Real basis of a deflating subspace of the system pencil:
//   A V + B W = V R,  A^T U + C^T W = -U R,  B^T U + C V + (D^T + D) W = 0.
struct DeflatingBasis {
  Matrix U, V, W, R;
  CVector zero_list;            // selected zeros, in column order (pairs as a+bi, a-bi)
  std::vector<Index> selection; // indices into the SpectralZeroSet

  Index order() const { return V.cols(); }
};

struct DeflatingResiduals {
  double a = 0.0;  // ||A V + B W - V R||
  double b = 0.0;  // ||A^T U + C^T W + U R||
  double c = 0.0;  // ||B^T U + C V + (D^T + D) W||
  double scale = 0.0;  // (||A|| + ||B|| + ||C|| + ||D||) * ||[U; V; W]||
  double total() const { return a + b + c; }
};

struct GramMatrix {
  Matrix X;          // symmetrized -U^T V
  double asymmetry;  // ||(-U^T V) - (-U^T V)^T|| / ||U^T V||
};

// Eigen-decomposition of hamiltonian_matrix(model), tagged by half plane.
SpectralZeroSet spectral_zeros(const StateSpaceModel& model, const Tolerances& tol = default_tolerances());

// Realified basis for a self-conjugate selection of right-half-plane zeros.
// A conjugate pair a +- bi contributes columns (Re z, Im z) and the R-block
// [[a, b], [-b, a]]; a real zero contributes one column and a 1x1 block.
// With `refine`, a basis whose -U^T V is asymmetric beyond kRefineAsymmetry is
// rebuilt from eigenpairs polished by extended-precision Newton steps.
inline constexpr double kRefineAsymmetry = 1e-12;
DeflatingBasis assemble_deflating_basis(const StateSpaceModel& model, const SpectralZeroSet& zeros,
                                        const std::vector<Index>& selection,
                                        VectorNormalization normalization = VectorNormalization::kUnitColumn,
                                        bool refine = true);

DeflatingResiduals deflating_residuals(const StateSpaceModel& model, const DeflatingBasis& basis);

GramMatrix gram_matrix(const DeflatingBasis& basis);

struct GreedySelection {
  std::vector<Index> selection;  // zero indices in greedy order; conjugates adjacent
  Index achieved_order = 0;      // size of the selection (<= requested)
  double score = 0.0;            // lambda_min of the selected principal submatrix of X
  Index cholesky_rank = 0;       // pivots taken before the full X stopped being positive
  SpectralZeroSet zeros;         // spectral zeros of the shifted model
  StateSpaceModel shifted;       // shift_model(model, xi)
};

// Pivoted-Cholesky ranking of all right-half-plane zeros of
// shift_model(model, xi); prefixes of it give the greedy selections.
struct ZeroRanking {
  SpectralZeroSet zeros;
  StateSpaceModel shifted;
  Matrix X;                            // -U^T V of the full realified basis
  std::vector<Index> column_order;     // pivot order of the columns of X
  std::vector<Index> column_group;     // column -> group
  std::vector<Index> group_rep;        // group -> zero index with Im >= 0
  std::vector<Index> group_size;       // 1 (real zero) or 2 (conjugate pair)
  std::vector<Index> group_first_col;
  Index cholesky_rank = 0;
};

ZeroRanking rank_spectral_zeros(const StateSpaceModel& model, double xi,
                                VectorNormalization normalization = VectorNormalization::kUnitColumn,
                                const Tolerances& tol = default_tolerances());

// Throws NumericalError when fewer than `order` right-half-plane zeros exist.
GreedySelection select_from_ranking(const ZeroRanking& ranking, Index order);

// Greedy ordering of the right-half-plane zeros of shift_model(model, xi):
// pivoted Cholesky on X = -U^T V of the full realified basis, then the
// leading self-conjugate subset of size order. A complex zero brings its
// conjugate along; if the pair does not fit it is skipped.
GreedySelection greedy_select(const StateSpaceModel& model, Index order, double xi,
                              VectorNormalization normalization = VectorNormalization::kUnitColumn,
                              const Tolerances& tol = default_tolerances());

// The self-conjugacy post-processing on its own: walks `column_order` (indices
// into the realified columns) and groups columns by zero via `column_zero`.
std::vector<Index> self_conjugate_prefix(const std::vector<Index>& column_order,
                                         const std::vector<Index>& column_zero,
                                         const std::vector<Index>& zero_size, Index order);

}  // namespace ppmor
