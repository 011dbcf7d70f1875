#include "ppmor/gramians.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "ppmor/numkernel.hpp"

namespace ppmor {

namespace {

// L with L L^T = G, from the eigendecomposition; negative rounding-level
// eigenvalues are clipped.
Matrix square_root_factor(const Matrix& g) {
  const SymmetricEigen es = symmetric_eig(0.5 * (g + g.transpose()), 1e-8);
  const Vector root = es.values.cwiseMax(0.0).cwiseSqrt();
  return es.vectors * root.asDiagonal();
}

void require_stable(const StateSpaceModel& model, const char* who) {
  const CVector lam = eigenvalues(model.A);
  for (Index i = 0; i < lam.size(); ++i) {
    if (!(lam(i).real() < 0.0)) throw InvalidInput(std::string(who) + ": A is not asymptotically stable");
  }
}

struct Factors {
  Matrix lp, lq;
  Eigen::JacobiSVD<Matrix> svd;
};

Factors balance(const StateSpaceModel& model) {
  const Matrix p = solve_lyapunov(model.A, model.B * model.B.transpose());
  const Matrix q = solve_lyapunov(model.A.transpose(), model.C.transpose() * model.C);
  Factors f;
  f.lp = square_root_factor(p);
  f.lq = square_root_factor(q);
  f.svd.compute(f.lq.transpose() * f.lp, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return f;
}

}  // namespace

HankelSpectrum hankel_singular_values(const StateSpaceModel& model) {
  HankelSpectrum h;
  if (model.n() == 0) return h;
  require_stable(model, "hankel_singular_values");
  h.values = balance(model).svd.singularValues();
  return h;
}

BalancedTruncation balanced_truncation(const StateSpaceModel& model, Index order, double gap_tol) {
  const Index n = model.n();
  if (order < 0 || order > n) throw InvalidInput("balanced_truncation: order must lie in [0, n]");
  BalancedTruncation bt;
  bt.requested_order = order;
  if (n == 0) {
    bt.model = model;
    return bt;
  }
  require_stable(model, "balanced_truncation");
  const Factors f = balance(model);
  const Vector& s = f.svd.singularValues();
  bt.hankel.values = s;

  Index k = order;
  const double floor = 1e-14 * std::max(s(0), 1e-300);
  while (k > 0 && k < n && (s(k - 1) - s(k) <= gap_tol * s(k - 1) || s(k - 1) <= floor)) --k;
  while (k > 0 && k == n && s(k - 1) <= floor) --k;
  if (k != order) {
    bt.warning = "order lowered from " + std::to_string(order) + " to " + std::to_string(k) +
                 " (Hankel singular values not separated)";
  }
  bt.order = k;
  bt.error_bound = 2.0 * s.tail(n - k).sum();

  if (k == 0) {
    bt.model = StateSpaceModel(Matrix(0, 0), Matrix(0, model.m()), Matrix(model.m(), 0), model.D);
    return bt;
  }
  const Vector inv_root = s.head(k).cwiseSqrt().cwiseInverse();
  const Matrix tl = inv_root.asDiagonal() * f.svd.matrixU().leftCols(k).transpose() * f.lq.transpose();
  const Matrix tr = f.lp * f.svd.matrixV().leftCols(k) * inv_root.asDiagonal();
  bt.model = StateSpaceModel(tl * model.A * tr, tl * model.B, model.C * tr, model.D);
  return bt;
}

}  // namespace ppmor
