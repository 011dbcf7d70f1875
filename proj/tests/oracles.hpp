#pragma once

// Reference computations used by the tests. They avoid the library's own
// fast paths: transfer functions by explicit inversion, norms by dense grids.

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "ppmor/model.hpp"

namespace oracle {

using ppmor::CMatrix;
using ppmor::Complex;
using ppmor::Index;
using ppmor::Matrix;
using ppmor::StateSpaceModel;

// M1 = {-1, 1, 1, 1}, Z(s) = 1 + 1/(s+1)
inline StateSpaceModel m1() {
  return StateSpaceModel(Matrix::Constant(1, 1, -1.0), Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0),
                         Matrix::Constant(1, 1, 1.0));
}

inline Matrix gaussian(Index r, Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = nd(rng);
  return m;
}

inline CMatrix transfer(const StateSpaceModel& m, Complex s) {
  const Index n = m.n();
  CMatrix z = m.D.cast<Complex>();
  if (n == 0) return z;
  CMatrix r = s * CMatrix::Identity(n, n) - m.A.cast<Complex>();
  return z + m.C.cast<Complex>() * r.inverse() * m.B.cast<Complex>();
}

inline double sigma_max(const CMatrix& z) {
  return Eigen::JacobiSVD<CMatrix>(z).singularValues()(0);
}

// max sigma_max(Z(i w)) over w = 0 and a log grid.
inline double grid_peak(const StateSpaceModel& m, int points, double w_min = 1e-4, double w_max = 1e4) {
  double best = sigma_max(transfer(m, Complex(0.0, 0.0)));
  const double a = std::log10(w_min), b = std::log10(w_max);
  for (int k = 0; k < points; ++k) {
    const double w = std::pow(10.0, a + (b - a) * k / (points - 1));
    best = std::max(best, sigma_max(transfer(m, Complex(0.0, w))));
  }
  return best;
}

struct PassiveCase {
  StateSpaceModel model;
  Matrix certificate;  // strict KYP certificate of `model`
};

// Strictly passive model with a known certificate: a port-Hamiltonian
// dissipation block with smallest eigenvalue >= `margin`, then a random
// similarity transform so the realization is not normalized.
inline PassiveCase random_strictly_passive_case(Index n, Index m, std::uint64_t seed, double margin = 0.3) {
  std::mt19937_64 rng(seed);
  const Index k = n + m;
  Matrix g = gaussian(k, k, rng);
  Matrix w = g * g.transpose() / static_cast<double>(k);
  w.diagonal().array() += margin;
  Matrix h = gaussian(k, k, rng);
  const Matrix v = 0.5 * (h - h.transpose());
  // S-matrix [[-A, -B], [C, D]] = w + v
  const Matrix s = w + v;
  Matrix a = -s.topLeftCorner(n, n);
  Matrix b = -s.topRightCorner(n, m);
  Matrix c = s.bottomLeftCorner(m, n);
  Matrix d = s.bottomRightCorner(m, m);
  Matrix t = gaussian(n, n, rng);
  t.diagonal().array() += 3.0;
  const Matrix ti = t.inverse();
  return {StateSpaceModel(ti * a * t, ti * b, c * t, d), t.transpose() * t};
}

inline StateSpaceModel random_strictly_passive(Index n, Index m, std::uint64_t seed, double margin = 0.3) {
  return random_strictly_passive_case(n, m, seed, margin).model;
}

}  // namespace oracle
