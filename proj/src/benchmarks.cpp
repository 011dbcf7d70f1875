#include "ppmor/benchmarks.hpp"

#include <cmath>
#include <numbers>

#include "ppmor/numkernel.hpp"
#include "ppmor/passivity.hpp"

namespace ppmor {

double GaussianStream::uniform() {
  // 53 random bits, shifted off zero
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Matrix GaussianStream::matrix(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = next();
  }
  return m;
}

StateSpaceModel rlc_ladder(int sections, double r, double l, double c) {
  if (sections < 1) throw InvalidInput("rlc_ladder: sections must be >= 1");
  if (!(r > 0.0) || !(l > 0.0) || !(c > 0.0) || !std::isfinite(r) || !std::isfinite(l) || !std::isfinite(c)) {
    throw InvalidInput("rlc_ladder: component values must be positive and finite");
  }
  const Index nn = sections;
  const Index n = 2 * nn;
  Matrix a = Matrix::Zero(n, n);
  for (Index k = 0; k < nn; ++k) {
    const Index v = k;
    const Index i = nn + k;
    // C v_k' = i_{k-1} - i_k  (i_0 = u)
    a(v, i) -= 1.0 / c;
    if (k > 0) a(v, i - 1) += 1.0 / c;
    // L i_k' = v_k - v_{k+1} - R i_k  (v_{N+1} = 0)
    a(i, v) += 1.0 / l;
    if (k + 1 < nn) a(i, v + 1) -= 1.0 / l;
    a(i, i) -= r / l;
  }
  Matrix b = Matrix::Zero(n, 1);
  b(0, 0) = 1.0 / c;
  Matrix cm = Matrix::Zero(1, n);
  cm(0, 0) = 1.0;
  Matrix d(1, 1);
  d(0, 0) = r;
  StateSpaceModel model(a, b, cm, d);
  const StrictPassivityReport rep = is_strictly_passive(model);
  if (!rep.strictly_passive) throw NumericalError("rlc_ladder: generated model is not strictly passive: " + rep.detail);
  return model;
}

PortHamiltonianModel random_ph(int n, int m, double lambda_min_w, std::uint64_t seed) {
  if (n < 1 || m < 1) throw InvalidInput("random_ph: n and m must be >= 1");
  if (!(lambda_min_w > 0.0) || !std::isfinite(lambda_min_w)) throw InvalidInput("random_ph: lambda_min_W must be > 0");
  GaussianStream rng(seed);
  const Index k = n + m;
  const Matrix g = rng.matrix(k, k);
  Matrix w = 0.5 * (g + g.transpose());
  const SymmetricEigen es = symmetric_eig(w);
  Vector lam = es.values;
  lam.array() += lambda_min_w - lam(0);
  lam(0) = lambda_min_w;
  w = es.vectors * lam.asDiagonal() * es.vectors.transpose();
  w = 0.5 * (w + w.transpose()).eval();

  const Matrix h = rng.matrix(k, k);
  const Matrix v = 0.5 * (h - h.transpose());
  // v = [[-J, -G], [G^T, N]]
  return PortHamiltonianModel(-v.topLeftCorner(n, n), w.topLeftCorner(n, n), Matrix::Identity(n, n),
                              -v.topRightCorner(n, m), w.topRightCorner(n, m), v.bottomRightCorner(m, m),
                              w.bottomRightCorner(m, m));
}

}  // namespace ppmor
