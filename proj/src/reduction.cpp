#include "ppmor/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>

#include "ppmor/numkernel.hpp"

namespace ppmor {

namespace {

double condition_number(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  const Vector s = singular_values(m);
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

// Petrov-Galerkin projection with the original A. Returns the reduced model
// and cond(U^T V).
StateSpaceModel galerkin(const StateSpaceModel& model, const Matrix& u, const Matrix& v, double max_condition,
                         double& condition) {
  const Matrix utv = u.transpose() * v;
  condition = condition_number(utv);
  if (!(condition <= max_condition)) {
    throw NumericalError("projection: U^T V is ill-conditioned (cond " + std::to_string(condition) +
                             "); the model may have nearly uncontrollable or unobservable modes",
                         condition);
  }
  // (U^T V)^{-1} U^T depends only on range(U)
  const Matrix qu = Eigen::HouseholderQR<Matrix>(u).householderQ() * Matrix::Identity(u.rows(), u.cols());
  const Eigen::PartialPivLU<Matrix> lu(qu.transpose() * v);
  const Matrix ahat = lu.solve(qu.transpose() * model.A * v);
  const Matrix bhat = lu.solve(qu.transpose() * model.B);
  return StateSpaceModel(ahat, bhat, model.C * v, model.D);
}

// Smallest eigenvalue of diag(T^{-T}, I) W diag(T^{-1}, I) / 2 with X = T^T T.
double normalized_dissipation_min(const Matrix& kyp, const Matrix& x) {
  const Index n = x.rows();
  if (n == 0) return 0.5 * lambda_min_sym(kyp);
  const Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  const Matrix tt = llt.matrixL();
  const auto lower = tt.triangularView<Eigen::Lower>();
  Matrix scaled = kyp;
  scaled.topRows(n) = lower.solve(kyp.topRows(n));
  scaled.leftCols(n) = lower.solve(Matrix(scaled.leftCols(n).transpose())).transpose();
  return 0.5 * lambda_min_sym(0.5 * (scaled + scaled.transpose()));
}

void attach_normalization(ReducedModel& out, const Matrix& kyp, const Tolerances& tol) {
  out.normalized_radius = normalized_dissipation_min(kyp, out.certificate.X);
  try {
    out.normalized = normalize_with_certificate(out.model, out.certificate.X, tol);
  } catch (const std::exception& e) {
    out.normalized.reset();
    out.normalization_failure = e.what();
  }
}

// Same deflating subspace with orthonormal V: [U; V; W] S^{-1}, R -> S R S^{-1}
// where V = Q S.
DeflatingBasis orthonormal_v(DeflatingBasis b) {
  if (b.order() == 0) return b;
  const Index k = b.order();
  const Eigen::HouseholderQR<Matrix> qr(b.V);
  const Matrix s = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const auto st = s.transpose().triangularView<Eigen::Lower>();
  b.V = qr.householderQ() * Matrix::Identity(b.V.rows(), k);
  b.U = st.solve(b.U.transpose()).transpose();
  b.W = st.solve(b.W.transpose()).transpose();
  b.R = st.solve((s * b.R).transpose()).transpose();
  return b;
}

ReducedModel finish(const StateSpaceModel& model, DeflatingBasis assembled, double xi, const ProjectionOptions& opts) {
  const Tolerances& tol = opts.tol;
  ReducedModel out;
  out.xi = xi;
  const Matrix raw = -assembled.U.transpose() * assembled.V;
  const double rn = raw.norm();
  out.asymmetry = rn > 0 ? (raw - raw.transpose()).norm() / rn : 0.0;

  DeflatingBasis basis = orthonormal_v(std::move(assembled));
  out.model = galerkin(model, basis.U, basis.V, tol.max_condition, out.condition);
  const Matrix xr = -basis.U.transpose() * basis.V;
  const Matrix xhat = 0.5 * (xr + xr.transpose());
  pivoted_cholesky(xhat);  // throws NotPositiveDefinite with the failing pivot

  out.certificate = verify_certificate(out.model, xhat, tol);
  const Matrix w = kyp_matrix(out.model, out.certificate.X);
  const Index n = xhat.rows();
  const Index m = model.m();
  Matrix shifted = w;
  shifted.topLeftCorner(n, n) -= xi * out.certificate.X;
  shifted.bottomRightCorner(m, m).diagonal().array() -= xi;
  out.lmi_margin = lambda_min_sym(shifted);
  out.lmi_scale = norm2(w);
  out.radius_lower_bound = 0.5 * xi;
  out.W_reduced = basis.W;
  out.basis = std::move(basis);

  attach_normalization(out, w, tol);
  return out;
}

}  // namespace

ReducedModel project(const StateSpaceModel& model, const DeflatingBasis& basis, const ProjectionOptions& opts) {
  return finish(model, basis, 0.0, opts);
}

ReducedModel project_shifted(const StateSpaceModel& model, double xi, const SpectralZeroSet& shifted_zeros,
                             const std::vector<Index>& selection, const ProjectionOptions& opts) {
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw InvalidInput("project_shifted: xi must be finite and >= 0");
  const StateSpaceModel shifted = shift_model(model, xi);
  const Matrix k = shifted.D + shifted.D.transpose();
  if (shifted.m() > 0 && !(lambda_min_sym(k) > opts.tol.pd * (1.0 + norm2(shifted.D)))) {
    throw InvalidInput("project_shifted: D^T + D - xi I is not positive definite at xi = " + std::to_string(xi));
  }
  DeflatingBasis basis = assemble_deflating_basis(shifted, shifted_zeros, selection, opts.normalization);
  return finish(model, std::move(basis), xi, opts);
}

ReducedModel project_shifted(const StateSpaceModel& model, double xi, Index order, const ProjectionOptions& opts) {
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw InvalidInput("project_shifted: xi must be finite and >= 0");
  const StateSpaceModel shifted = shift_model(model, xi);
  if (shifted.m() > 0 &&
      !(lambda_min_sym(shifted.D + shifted.D.transpose()) > opts.tol.pd * (1.0 + norm2(shifted.D)))) {
    throw InvalidInput("project_shifted: D^T + D - xi I is not positive definite at xi = " + std::to_string(xi));
  }
  const GreedySelection sel = greedy_select(model, order, xi, opts.normalization, opts.tol);
  return project_shifted(model, xi, sel.zeros, sel.selection, opts);
}

InterpolationReport verify_interpolation(const StateSpaceModel& model, const ReducedModel& reduced) {
  InterpolationReport rep;
  const DeflatingBasis& basis = reduced.basis;
  const double xi = reduced.xi;
  rep.feedthrough = (model.D - reduced.model.D).norm();
  rep.max_residual = rep.feedthrough;

  const Index k = basis.zero_list.size();
  for (Index i = 0; i < k; ++i) {
    for (Index j = i + 1; j < k; ++j) {
      const Complex a = basis.zero_list(i);
      const Complex b = basis.zero_list(j);
      if (std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a))) rep.repeated_zeros = true;
    }
  }
  if (basis.R.size() == 0) return rep;

  const CMatrix wc = basis.W.cast<Complex>();
  const auto relative = [](const CVector& full, const CVector& red) {
    const double den = full.norm();
    const double num = (full - red).norm();
    return den > std::numeric_limits<double>::min() ? num / den : num;
  };
  const FrequencyEvaluator full(model);
  const auto transfer = [&](Complex s) {
    const auto z = full(s);
    return z ? *z : evaluate_transfer(model, s);
  };
  for (const EigenPair& p : eig(basis.R)) {
    const CVector dir = wc * p.vector;
    const Complex right_pt = p.value - 0.5 * xi;
    const Complex left_pt = -p.value - 0.5 * xi;
    const CVector zr = transfer(right_pt) * dir;
    const CVector zr_hat = evaluate_transfer(reduced.model, right_pt) * dir;
    const CVector zl = transfer(left_pt).transpose() * dir;
    const CVector zl_hat = evaluate_transfer(reduced.model, left_pt).transpose() * dir;
    rep.right.push_back(relative(zr, zr_hat));
    rep.left.push_back(relative(zl, zl_hat));
    rep.max_residual = std::max({rep.max_residual, rep.right.back(), rep.left.back()});
  }
  return rep;
}

ReducedModel project_with_certificate(const StateSpaceModel& model, const Matrix& x, const Matrix& v,
                                      const Tolerances& tol) {
  const Index n = model.n();
  if (v.rows() != n || v.cols() < 1 || v.cols() > n) {
    throw InvalidInput("project_with_certificate: V must be n x k with 1 <= k <= n");
  }
  require_finite(v, "V");
  const Certificate full = verify_certificate(model, x, tol);
  if (!full.certifies(CertificateKind::kStrictlyPassive)) {
    throw InvalidInput("project_with_certificate: X is not a strict certificate" +
                       (full.violation.empty() ? std::string() : ": " + full.violation));
  }
  const Vector s = singular_values(v);
  if (!(s(s.size() - 1) > 1e-12 * s(0))) {
    throw InvalidInput("project_with_certificate: V is rank deficient");
  }
  const Matrix xs = full.X;
  const Matrix xhat = v.transpose() * xs * v;
  const Eigen::LLT<Matrix> llt(0.5 * (xhat + xhat.transpose()));
  const Matrix u = -(xs * v) * llt.solve(Matrix::Identity(v.cols(), v.cols()));

  ReducedModel out;
  out.model = galerkin(model, u, v, tol.max_condition, out.condition);
  out.basis.U = u;
  out.basis.V = v;
  out.asymmetry = 0.0;
  out.certificate = verify_certificate(out.model, 0.5 * (xhat + xhat.transpose()), tol);
  const Matrix w = kyp_matrix(out.model, out.certificate.X);
  out.lmi_margin = lambda_min_sym(w);
  out.lmi_scale = norm2(w);
  attach_normalization(out, w, tol);
  return out;
}

RobustnessReport robustness_diagnostics(const StateSpaceModel& model, const Matrix& u, const Matrix& v,
                                        const Matrix& w, const Matrix& r, double xi, const Tolerances& tol) {
  const Index n = model.n();
  const Index m = model.m();
  const Index k = r.rows();
  if (u.rows() != n || v.rows() != n || u.cols() != k || v.cols() != k || w.rows() != m || w.cols() != k ||
      r.cols() != k) {
    throw InvalidInput("robustness_diagnostics: inconsistent dimensions");
  }
  RobustnessReport rep;
  const StateSpaceModel ms = shift_model(model, xi);
  const Matrix kxi = ms.D + ms.D.transpose();
  rep.residual_u = (ms.A * v + ms.B * w - v * r).norm();
  rep.residual_v = (ms.A.transpose() * u + ms.C.transpose() * w + u * r).norm();
  rep.residual_w = (ms.B.transpose() * u + ms.C * v + kxi * w).norm();

  const Matrix xt = -u.transpose() * v;
  rep.asymmetry = (xt - xt.transpose()).norm();
  const Matrix xs = 0.5 * (xt + xt.transpose());
  rep.certificate_min = lambda_min_sym(xs);

  StateSpaceModel red;
  try {
    double cond = 0.0;
    red = galerkin(model, u, v, tol.max_condition, cond);
  } catch (const NumericalError&) {
    rep.passivity_lost = true;
    rep.symmetrized_margin = -std::numeric_limits<double>::infinity();
    rep.guaranteed_margin = -std::numeric_limits<double>::infinity();
    rep.normalized_radius = -std::numeric_limits<double>::infinity();
    return rep;
  }

  const Matrix kyp_full = kyp_matrix(red, xs);
  rep.symmetrized_margin = lambda_min_sym(kyp_full);

  // E = W(X_s, M_tilde_xi) - [-W^T; I] K_xi [-W, I]; zero for an exact basis.
  Matrix stack(k + m, m);
  stack << -w.transpose(), Matrix::Identity(m, m);
  const Matrix e = kyp_matrix(shift_model(red, xi), xs) - stack * kxi * stack.transpose();
  rep.delta11 = e.topLeftCorner(k, k);
  rep.delta12 = e.topRightCorner(k, m);
  rep.perturbation_norm = norm2(e);
  rep.guaranteed_margin = xi * std::min(rep.certificate_min, 1.0) - rep.perturbation_norm;
  const double roundoff = 1e-12 * std::max(1.0, norm2(kyp_full));
  rep.bound_check = rep.symmetrized_margin >= rep.guaranteed_margin - roundoff;
  rep.normalized_radius = rep.certificate_min > 0 ? normalized_dissipation_min(kyp_full, xs)
                                                  : -std::numeric_limits<double>::infinity();
  rep.certified = rep.certificate_min > 0 && rep.guaranteed_margin > 0;
  rep.passivity_lost = !(rep.certificate_min > 0) || !(rep.symmetrized_margin > 0);
  return rep;
}

}  // namespace ppmor
