#include "ppmor/passivity.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "ppmor/numkernel.hpp"

namespace ppmor {

bool Certificate::certifies(CertificateKind kind) const {
  if (status == Status::kViolated) return false;
  if (kind == CertificateKind::kStrictlyPassive) return status == Status::kStrictlyPassive;
  return true;
}

Matrix kyp_matrix(const StateSpaceModel& model, const Matrix& x) {
  const Index n = model.n();
  const Index m = model.m();
  if (x.rows() != n || x.cols() != n) {
    throw InvalidInput("kyp_matrix: X is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                       ", model has n = " + std::to_string(n));
  }
  Matrix w(n + m, n + m);
  const Matrix xa = x * model.A;
  w.topLeftCorner(n, n) = -xa.transpose() - xa;
  w.topRightCorner(n, m) = model.C.transpose() - x * model.B;
  w.bottomLeftCorner(m, n) = model.C - model.B.transpose() * x;
  w.bottomRightCorner(m, m) = model.D.transpose() + model.D;
  // (a + b) / 2 == (b + a) / 2 bitwise, so the result is exactly symmetric.
  const Matrix wt = w.transpose();
  return 0.5 * (w + wt);
}

Certificate verify_certificate(const StateSpaceModel& model, const Matrix& x, const Tolerances& tol) {
  Certificate cert;
  cert.X = 0.5 * (x + x.transpose());
  const double xnorm = x.norm();
  if ((x - x.transpose()).norm() > tol.symmetry * std::max(xnorm, 1e-300)) {
    cert.violation = "X is not symmetric";
    return cert;
  }
  const Matrix w = kyp_matrix(model, cert.X);
  cert.scale = std::max(w.norm(), std::numeric_limits<double>::min());
  cert.w_margin = lambda_min_sym(w);
  cert.x_margin = model.n() > 0 ? lambda_min_sym(cert.X) : std::numeric_limits<double>::infinity();

  const double band = tol.psd * cert.scale;
  const bool x_pd = cert.x_margin > tol.psd * std::max(xnorm, std::numeric_limits<double>::min());
  if (!x_pd) {
    cert.violation = "X is not positive definite (lambda_min " + std::to_string(cert.x_margin) + ")";
    return cert;
  }
  if (cert.w_margin < -band) {
    cert.violation = "W(X, M) is not positive semidefinite (lambda_min " + std::to_string(cert.w_margin) + ")";
    return cert;
  }
  cert.status = cert.w_margin > band ? Certificate::Status::kStrictlyPassive : Certificate::Status::kPassive;
  return cert;
}

namespace {

double feedthrough_lambda_min(const StateSpaceModel& model) {
  if (model.m() == 0) return std::numeric_limits<double>::infinity();
  return lambda_min_sym(model.D + model.D.transpose());
}

double pd_threshold(const StateSpaceModel& model, const Tolerances& tol) {
  return tol.pd * (1.0 + norm2(model.D));
}

}  // namespace

Matrix hamiltonian_matrix(const StateSpaceModel& model, const Tolerances& tol) {
  const Index n = model.n();
  const Matrix k = model.D + model.D.transpose();
  const double kmin = feedthrough_lambda_min(model);
  if (!(kmin > pd_threshold(model, tol))) {
    throw InvalidInput("hamiltonian_matrix: D^T + D is not positive definite (lambda_min " + std::to_string(kmin) +
                       ")");
  }
  Eigen::LLT<Matrix> kllt(k);
  const Matrix kinv_c = kllt.solve(model.C);
  const Matrix kinv_bt = kllt.solve(model.B.transpose());
  const Matrix af = model.A - model.B * kinv_c;
  Matrix h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = af;
  const Matrix g = model.B * kinv_bt;
  const Matrix q = model.C.transpose() * kinv_c;
  // exactly symmetric off-diagonal blocks keep H exactly Hamiltonian
  h.topRightCorner(n, n) = -0.5 * (g + g.transpose());
  h.bottomLeftCorner(n, n) = 0.5 * (q + q.transpose());
  h.bottomRightCorner(n, n) = -af.transpose();
  return h;
}

StrictPassivityReport is_strictly_passive(const StateSpaceModel& model, const Tolerances& tol) {
  StrictPassivityReport rep;
  const Index n = model.n();
  const double anorm = n > 0 ? norm2(model.A) : 0.0;

  rep.stability_abscissa = -std::numeric_limits<double>::infinity();
  if (n > 0) {
    const CVector lam = eigenvalues(model.A);
    for (Index i = 0; i < lam.size(); ++i) rep.stability_abscissa = std::max(rep.stability_abscissa, lam(i).real());
  }
  rep.feedthrough_min = feedthrough_lambda_min(model);
  rep.min_abs_real_zero = std::numeric_limits<double>::infinity();

  if (n > 0 && !(rep.stability_abscissa < -tol.stability * anorm)) {
    rep.failure = StrictPassivityReport::Failure::kUnstable;
    rep.detail = "A is not asymptotically stable (max Re eig = " + std::to_string(rep.stability_abscissa) + ")";
    return rep;
  }
  if (!(rep.feedthrough_min > pd_threshold(model, tol))) {
    rep.failure = StrictPassivityReport::Failure::kFeedthroughSingular;
    rep.detail = "D^T + D is not positive definite (lambda_min = " + std::to_string(rep.feedthrough_min) + ")";
    return rep;
  }
  if (n > 0) {
    const CVector zeros = eigenvalues(hamiltonian_matrix(model, tol));
    for (Index i = 0; i < zeros.size(); ++i) {
      rep.min_abs_real_zero = std::min(rep.min_abs_real_zero, std::abs(zeros(i).real()));
    }
    if (!(rep.min_abs_real_zero > tol.imaginary * anorm)) {
      rep.failure = StrictPassivityReport::Failure::kImaginaryZero;
      rep.detail = "spectral zero on the imaginary axis (min |Re| = " + std::to_string(rep.min_abs_real_zero) + ")";
      return rep;
    }
  }
  rep.strictly_passive = true;
  return rep;
}

Matrix riccati_residual(const StateSpaceModel& model, const Matrix& x) {
  const Matrix k = model.D + model.D.transpose();
  const Matrix g = model.C - model.B.transpose() * x;
  const Matrix xa = x * model.A;
  Matrix r = -xa - xa.transpose() - g.transpose() * k.llt().solve(g);
  return r;
}

namespace {

AREResult are_from_subspace(const StateSpaceModel& model, const Matrix& h, bool stable) {
  const Index n = model.n();
  const Matrix basis = ordered_schur_basis(h, stable, n);
  const Matrix v = basis.topRows(n);
  const Matrix u = basis.bottomRows(n);
  // basis spans [I; -X]
  const Eigen::PartialPivLU<Matrix> lu(v.transpose());
  const double rc = lu.rcond();
  if (!(rc > 1e-14)) {
    throw NumericalError("solve_are_extremal: V-block of the invariant subspace is singular (rcond " +
                             std::to_string(rc) + ")",
                         rc);
  }
  AREResult res;
  const Matrix x = -(lu.solve(u.transpose())).transpose();
  res.X = 0.5 * (x + x.transpose());
  const Matrix k = model.D + model.D.transpose();
  res.F = k.llt().solve(model.C - model.B.transpose() * res.X);
  res.residual = riccati_residual(model, res.X).norm();
  res.closed_loop_spectrum = eigenvalues(model.A - model.B * res.F);
  return res;
}

}  // namespace

ExtremalSolutions solve_are_extremal(const StateSpaceModel& model, const Tolerances& tol) {
  const Matrix h = hamiltonian_matrix(model, tol);
  const double anorm = model.n() > 0 ? norm2(model.A) : 0.0;
  const CVector zeros = eigenvalues(h);
  for (Index i = 0; i < zeros.size(); ++i) {
    if (std::abs(zeros(i).real()) <= tol.imaginary * anorm) {
      throw NumericalError("solve_are_extremal: Hamiltonian has imaginary-axis eigenvalues, no dichotomy",
                           std::abs(zeros(i).real()));
    }
  }
  ExtremalSolutions out;
  out.minus = are_from_subspace(model, h, true);
  out.plus = are_from_subspace(model, h, false);
  return out;
}

double compute_xi_limit(const StateSpaceModel& model, const Tolerances& tol) {
  const StrictPassivityReport base = is_strictly_passive(model, tol);
  if (!base.strictly_passive) throw InvalidInput("compute_xi_limit: model is not strictly passive: " + base.detail);
  double lo = 0.0;
  double hi = base.feedthrough_min;
  while (hi - lo > tol.xi_abs) {
    const double mid = 0.5 * (lo + hi);
    if (is_strictly_passive(shift_model(model, mid), tol).strictly_passive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double xi_limit_grid_scan(const StateSpaceModel& model, int points, const Tolerances& tol) {
  if (points < 1) throw InvalidInput("xi_limit_grid_scan: points must be >= 1");
  const double hi = feedthrough_lambda_min(model);
  const double step = hi / points;
  for (int k = 1; k <= points; ++k) {
    const double xi = k * step;
    if (!is_strictly_passive(shift_model(model, xi), tol).strictly_passive) return xi - 0.5 * step;
  }
  return hi;
}

double min_phi_on_grid(const StateSpaceModel& model, double w_min, double w_max, int points) {
  if (!(w_min > 0.0) || !(w_max > w_min) || points < 2) throw InvalidInput("min_phi_on_grid: bad grid");
  const FrequencyEvaluator eval(model);
  double best = std::numeric_limits<double>::infinity();
  const double lmin = std::log10(w_min);
  const double lmax = std::log10(w_max);
  for (int k = 0; k < points; ++k) {
    const double w = std::pow(10.0, lmin + (lmax - lmin) * k / (points - 1));
    const auto z = eval(Complex(0.0, w));
    if (!z) return -std::numeric_limits<double>::infinity();
    CMatrix phi = z->adjoint() + *z;
    phi = 0.5 * (phi + phi.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(phi, Eigen::EigenvaluesOnly);
    best = std::min(best, es.eigenvalues()(0));
  }
  return best;
}

double normalized_passivity_radius(const PortHamiltonianModel& ph, const Tolerances& tol) {
  const Index n = ph.n();
  const double defect = (ph.Q - Matrix::Identity(n, n)).norm();
  if (defect > tol.symmetry * std::max(1.0, ph.Q.norm())) {
    throw InvalidInput("normalized_passivity_radius: model is not normalized (||Q - I|| = " +
                       std::to_string(defect) + ")");
  }
  return lambda_min_sym(ph.dissipation());
}

}  // namespace ppmor
