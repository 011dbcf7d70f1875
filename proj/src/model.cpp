#include "ppmor/model.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "ppmor/numkernel.hpp"
#include "ppmor/passivity.hpp"

namespace ppmor {

namespace {

std::string shape(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

void expect_shape(const Matrix& m, Index rows, Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw InvalidInput(std::string(name) + " is " + shape(m) + ", expected " + std::to_string(rows) + "x" +
                       std::to_string(cols));
  }
}

}  // namespace

StateSpaceModel::StateSpaceModel(Matrix a, Matrix b, Matrix c, Matrix d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
  const Index n = A.rows();
  const Index m = D.rows();
  expect_shape(A, n, n, "A");
  expect_shape(D, m, m, "D");
  expect_shape(B, n, m, "B");
  expect_shape(C, m, n, "C");
  require_finite(A, "A");
  require_finite(B, "B");
  require_finite(C, "C");
  require_finite(D, "D");
}

PortHamiltonianModel::PortHamiltonianModel(Matrix j, Matrix r, Matrix q, Matrix g, Matrix p, Matrix n,
                                           Matrix s, const Tolerances& tol)
    : J(std::move(j)), R(std::move(r)), Q(std::move(q)), G(std::move(g)), P(std::move(p)), N(std::move(n)),
      S(std::move(s)) {
  const Index nx = J.rows();
  const Index m = N.rows();
  expect_shape(J, nx, nx, "J");
  expect_shape(R, nx, nx, "R");
  expect_shape(Q, nx, nx, "Q");
  expect_shape(G, nx, m, "G");
  expect_shape(P, nx, m, "P");
  expect_shape(N, m, m, "N");
  expect_shape(S, m, m, "S");
  for (const auto* mat : {&J, &R, &Q, &G, &P, &N, &S}) require_finite(*mat, "port-Hamiltonian block");

  const auto check_skew = [&](const Matrix& x, const char* name) {
    if (x.size() == 0) return;
    const double defect = (x + x.transpose()).norm();
    if (defect > tol.skew * std::max(1.0, x.norm())) {
      throw InvalidInput(std::string(name) + " is not skew-symmetric (defect " + std::to_string(defect) + ")");
    }
  };
  check_skew(J, "J");
  check_skew(N, "N");

  const auto check_psd = [&](const Matrix& x, const char* name) {
    if (x.size() == 0) return;
    if ((x - x.transpose()).norm() > tol.symmetry * std::max(1.0, x.norm())) {
      throw InvalidInput(std::string(name) + " is not symmetric");
    }
    const double lmin = lambda_min_sym(x);
    if (lmin < -tol.psd * std::max(1.0, x.norm())) {
      throw InvalidInput(std::string(name) + " is not positive semidefinite (lambda_min " +
                         std::to_string(lmin) + ")");
    }
  };
  check_psd(dissipation(), "[[R, P], [P^T, S]]");
  check_psd(Q, "Q");
}

Matrix PortHamiltonianModel::dissipation() const {
  const Index nx = n();
  const Index nm = m();
  Matrix w(nx + nm, nx + nm);
  w << R, P, P.transpose(), S;
  return w;
}

Matrix PortHamiltonianModel::interconnection() const {
  const Index nx = n();
  const Index nm = m();
  Matrix v(nx + nm, nx + nm);
  v << -J, -G, G.transpose(), N;
  return v;
}

CMatrix evaluate_transfer(const StateSpaceModel& model, Complex s) {
  const Index n = model.n();
  CMatrix z = model.D.cast<Complex>();
  if (n == 0) return z;
  CMatrix resolvent = -model.A.cast<Complex>();
  resolvent.diagonal().array() += s;
  Eigen::PartialPivLU<CMatrix> lu(resolvent);
  const double rc = lu.rcond();
  if (!(rc > 1e-15)) {
    throw PoleError("evaluate_transfer: s = (" + std::to_string(s.real()) + ", " + std::to_string(s.imag()) +
                        ") is a pole of the model",
                    rc);
  }
  z.noalias() += model.C.cast<Complex>() * lu.solve(model.B.cast<Complex>());
  return z;
}

CMatrix evaluate_phi(const StateSpaceModel& model, double omega) {
  const CMatrix z = evaluate_transfer(model, Complex(0.0, omega));
  const CMatrix phi = z.adjoint() + z;
  return 0.5 * (phi + phi.adjoint());
}

StateSpaceModel shift_model(const StateSpaceModel& model, double xi) {
  StateSpaceModel out = model;
  out.A.diagonal().array() += 0.5 * xi;
  out.D.diagonal().array() -= 0.5 * xi;
  return out;
}

StateSpaceModel ph_to_statespace(const PortHamiltonianModel& ph) {
  return StateSpaceModel((ph.J - ph.R) * ph.Q, ph.G - ph.P, (ph.G + ph.P).transpose() * ph.Q, ph.N + ph.S);
}

NormalizedRealization normalize_with_certificate(const StateSpaceModel& model, const Matrix& x,
                                                 const Tolerances& tol) {
  const Index n = model.n();
  const Index m = model.m();
  if (x.rows() != n || x.cols() != n) throw InvalidInput("certificate has shape " + shape(x));
  require_finite(x, "certificate");

  const Matrix xs = 0.5 * (x + x.transpose());
  Eigen::LLT<Matrix> llt(xs);
  if (n > 0 && (llt.info() != Eigen::Success || !(lambda_min_sym(xs) > 0.0))) {
    throw NotPositiveDefinite("normalize_with_certificate: X is not positive definite", 0, lambda_min_sym(xs));
  }
  const Certificate cert = verify_certificate(model, xs, tol);
  if (!cert.certifies(CertificateKind::kPassive)) {
    throw NumericalError("normalize_with_certificate: X violates the KYP inequality (lambda_min W = " +
                             std::to_string(cert.w_margin) + ")",
                         -cert.w_margin);
  }

  NormalizedRealization out;
  out.T = n > 0 ? Matrix(llt.matrixU()) : Matrix(0, 0);
  const Matrix tt = out.T.transpose();
  const auto lower = tt.triangularView<Eigen::Lower>();
  // A_T = T A T^{-1}, B_T = T B, C_T = C T^{-1}
  const Matrix ta = out.T * model.A;
  const Matrix at = n > 0 ? Matrix(lower.solve(ta.transpose()).transpose()) : Matrix(0, 0);
  const Matrix bt = out.T * model.B;
  const Matrix ct = n > 0 ? Matrix(lower.solve(model.C.transpose()).transpose()) : Matrix(m, 0);

  Matrix smat(n + m, n + m);
  smat << -at, -bt, ct, model.D;
  const Matrix skew = 0.5 * (smat - smat.transpose());
  const Matrix sym = 0.5 * (smat + smat.transpose());

  // skew = [[-J, -G], [G^T, N]], sym = [[R, P], [P^T, S]]
  Matrix j = -skew.topLeftCorner(n, n);
  Matrix nn = skew.bottomRightCorner(m, m);
  j = 0.5 * (j - j.transpose());
  nn = 0.5 * (nn - nn.transpose());
  out.ph = PortHamiltonianModel(j, sym.topLeftCorner(n, n), Matrix::Identity(n, n), -skew.topRightCorner(n, m),
                                sym.topRightCorner(n, m), nn, sym.bottomRightCorner(m, m), tol);
  return out;
}

MinimalityReport minimality_report(const StateSpaceModel& model) {
  const Index n = model.n();
  const Index m = model.m();
  MinimalityReport rep;
  if (n == 0) {
    rep.controllability_margin = std::numeric_limits<double>::infinity();
    rep.observability_margin = std::numeric_limits<double>::infinity();
    return rep;
  }
  Matrix ab(n, n + m);
  ab << model.A, model.B;
  const double scale = std::max(norm2(ab), 1e-300);
  const CVector lambdas = eigenvalues(model.A);
  double ctrb = std::numeric_limits<double>::infinity();
  double obsv = std::numeric_limits<double>::infinity();
  const CMatrix a = model.A.cast<Complex>();
  for (Index k = 0; k < lambdas.size(); ++k) {
    CMatrix shifted = a;
    shifted.diagonal().array() -= lambdas(k);
    CMatrix hc(n, n + m);
    hc << shifted, model.B.cast<Complex>();
    CMatrix ho(n + m, n);
    ho << shifted, model.C.cast<Complex>();
    ctrb = std::min(ctrb, singular_values(hc)(n - 1));
    obsv = std::min(obsv, singular_values(ho)(n - 1));
  }
  rep.controllability_margin = ctrb / scale;
  rep.observability_margin = obsv / scale;
  return rep;
}

FrequencyEvaluator::FrequencyEvaluator(const StateSpaceModel& model) : d_(model.D) {
  const Index n = model.n();
  if (n == 0) {
    hess_.resize(0, 0);
    bq_.resize(0, model.m());
    cq_.resize(model.m(), 0);
    return;
  }
  Eigen::HessenbergDecomposition<Matrix> hd(model.A);
  hess_ = hd.matrixH();
  const Matrix q = hd.matrixQ();
  bq_ = q.transpose() * model.B;
  cq_ = model.C * q;
  scale_ = std::max(hess_.cwiseAbs().maxCoeff(), 1e-300);
}

std::optional<CMatrix> FrequencyEvaluator::operator()(Complex s) const {
  const Index n = hess_.rows();
  CMatrix z = d_.cast<Complex>();
  if (n == 0) return z;
  // Gaussian elimination with adjacent-row pivoting on the Hessenberg system
  // (sI - H) Y = Q^T B.
  CMatrix m = -hess_.cast<Complex>();
  m.diagonal().array() += s;
  CMatrix rhs = bq_.cast<Complex>();
  const double tiny = 1e-15 * std::max(scale_, std::abs(s));
  for (Index k = 0; k + 1 < n; ++k) {
    if (std::abs(m(k + 1, k)) > std::abs(m(k, k))) {
      m.row(k).tail(n - k).swap(m.row(k + 1).tail(n - k));
      rhs.row(k).swap(rhs.row(k + 1));
    }
    if (std::abs(m(k, k)) <= tiny) return std::nullopt;
    const Complex l = m(k + 1, k) / m(k, k);
    if (l != Complex(0.0)) {
      m.row(k + 1).tail(n - k) -= l * m.row(k).tail(n - k);
      rhs.row(k + 1) -= l * rhs.row(k);
    }
  }
  if (std::abs(m(n - 1, n - 1)) <= tiny) return std::nullopt;
  const CMatrix y = m.triangularView<Eigen::Upper>().solve(rhs);
  z.noalias() += cq_.cast<Complex>() * y;
  return z;
}

}  // namespace ppmor
