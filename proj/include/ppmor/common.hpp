#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ppmor {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;
using Index = Eigen::Index;

// Invalid input: wrong shapes, non-finite entries, violated preconditions.
// Maps to CLI exit code 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not produce a trustworthy answer.
// Maps to CLI exit code 1.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double magnitude = 0.0)
      : std::runtime_error(what), magnitude_(magnitude) {}

  // Residual, violation size or similar diagnostic number, when one exists.
  double magnitude() const noexcept { return magnitude_; }

 private:
  double magnitude_;
};

// A Cholesky-type factorization met a non-positive pivot.
class NotPositiveDefinite : public NumericalError {
 public:
  NotPositiveDefinite(const std::string& what, Index pivot_index, double pivot)
      : NumericalError(what, pivot), pivot_index_(pivot_index) {}

  // Zero-based step at which the factorization broke down.
  Index pivot_index() const noexcept { return pivot_index_; }

 private:
  Index pivot_index_;
};

// Evaluation point coincides with a pole.
class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Tolerances shared across modules. All are relative to the norm of the
// quantity being tested unless noted otherwise.
struct Tolerances {
  double symmetry = 1e-10;   // ||M - M^T|| <= symmetry * ||M||
  double skew = 1e-12;       // J = -J^T, N = -N^T
  double psd = 1e-10;        // lambda_min >= -psd * scale counts as PSD
  double stability = 1e-9;   // Re(lambda(A)) < -stability * ||A||
  double imaginary = 1e-9;   // |Re(lambda(H))| <= imaginary * ||A|| is on the axis
  double pd = 1e-12;         // lambda_min(D + D^T) > pd * (1 + ||D||)
  double lmi = 1e-8;         // accepted reduced-model LMI band
  double max_condition = 1e12;  // refuse projections with cond(U^T V) above this
  double xi_abs = 1e-8;      // absolute bisection tolerance for Xi
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

bool all_finite(const Matrix& m);

// Throws InvalidInput naming `what` when m has NaN/Inf entries.
void require_finite(const Matrix& m, const std::string& what);

// Spectral norm (largest singular value); 0 for empty matrices.
double norm2(const Matrix& m);

}  // namespace ppmor
