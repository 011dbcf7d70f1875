#include "ppmor/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <lapacke.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ppmor {

bool all_finite(const Matrix& m) { return m.allFinite(); }

void require_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw InvalidInput(what + " has non-finite entries");
}

double norm2(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

namespace {

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw InvalidInput(std::string(who) + ": matrix is " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()) + ", expected square");
  }
}

bool eig_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

struct GeevOutput {
  Vector wr, wi;
  Matrix vr;
};

GeevOutput run_geev(const Matrix& m, bool vectors) {
  const Index n = m.rows();
  GeevOutput out;
  out.wr.resize(n);
  out.wi.resize(n);
  if (vectors) out.vr.resize(n, n);
  if (n == 0) return out;
  Matrix a = m;
  double dummy = 0.0;
  const lapack_int info = LAPACKE_dgeev(
      LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', static_cast<lapack_int>(n), a.data(),
      static_cast<lapack_int>(n), out.wr.data(), out.wi.data(), &dummy, 1,
      vectors ? out.vr.data() : &dummy, vectors ? static_cast<lapack_int>(n) : 1);
  if (info != 0) {
    throw NumericalError("eig: QR iteration failed to converge (dgeev info=" +
                             std::to_string(info) + ")",
                         static_cast<double>(info));
  }
  return out;
}

}  // namespace

std::vector<EigenPair> eig(const Matrix& m) {
  require_square(m, "eig");
  require_finite(m, "eig input");
  const Index n = m.rows();
  GeevOutput g = run_geev(m, true);

  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    EigenPair p;
    p.value = Complex(g.wr(j), g.wi(j));
    if (g.wi(j) == 0.0) {
      p.vector = g.vr.col(j).cast<Complex>();
    } else if (g.wi(j) > 0.0) {
      // dgeev stores (re, im) in consecutive columns for the +imag member.
      p.vector = g.vr.col(j).cast<Complex>() + Complex(0, 1) * g.vr.col(j + 1).cast<Complex>();
    } else {
      p.vector = g.vr.col(j - 1).cast<Complex>() - Complex(0, 1) * g.vr.col(j).cast<Complex>();
    }
    const double nrm = p.vector.norm();
    if (nrm > 0) p.vector /= nrm;
    pairs.push_back(std::move(p));
  }
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return eig_less(a.value, b.value); });
  return pairs;
}

CVector eigenvalues(const Matrix& m) {
  require_square(m, "eigenvalues");
  require_finite(m, "eigenvalues input");
  GeevOutput g = run_geev(m, false);
  std::vector<Complex> vals(static_cast<std::size_t>(m.rows()));
  for (Index j = 0; j < m.rows(); ++j) vals[static_cast<std::size_t>(j)] = Complex(g.wr(j), g.wi(j));
  std::stable_sort(vals.begin(), vals.end(), eig_less);
  CVector out(m.rows());
  for (Index j = 0; j < m.rows(); ++j) out(j) = vals[static_cast<std::size_t>(j)];
  return out;
}

SymmetricEigen symmetric_eig(const Matrix& m, double symmetry_tol) {
  require_square(m, "symmetric_eig");
  require_finite(m, "symmetric_eig input");
  SymmetricEigen out;
  if (m.rows() == 0) return out;
  const double scale = m.norm();
  const double asym = (m - m.transpose()).norm();
  if (asym > symmetry_tol * std::max(scale, 1e-300)) {
    throw InvalidInput("symmetric_eig: asymmetry " + std::to_string(asym) +
                       " exceeds tolerance (relative " + std::to_string(asym / scale) + ")");
  }
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric_eig: solver did not converge");
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

double lambda_min_sym(const Matrix& m) {
  if (m.rows() == 0) return std::numeric_limits<double>::infinity();
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
  require_square(a, "solve_lyapunov");
  require_square(q, "solve_lyapunov");
  if (a.rows() != q.rows()) throw InvalidInput("solve_lyapunov: A and Q sizes differ");
  require_finite(a, "Lyapunov A");
  require_finite(q, "Lyapunov Q");
  const Index n = a.rows();
  if (n == 0) return Matrix(0, 0);

  Eigen::ComplexSchur<CMatrix> schur(a.cast<Complex>());
  if (schur.info() != Eigen::Success) throw NumericalError("solve_lyapunov: Schur form failed");
  const CMatrix& t = schur.matrixT();
  const CMatrix& u = schur.matrixU();
  // T Y + Y T^H = -F with F = U^H Q U; columns solved right to left.
  const CMatrix f = u.adjoint() * q.cast<Complex>() * u;
  const double scale = std::max(t.cwiseAbs().maxCoeff(), 1e-300);
  CMatrix y = CMatrix::Zero(n, n);
  for (Index j = n - 1; j >= 0; --j) {
    CVector rhs = -f.col(j);
    for (Index k = j + 1; k < n; ++k) rhs -= std::conj(t(j, k)) * y.col(k);
    CMatrix lhs = t;
    lhs.diagonal().array() += std::conj(t(j, j));
    for (Index i = 0; i < n; ++i) {
      if (std::abs(lhs(i, i)) <= 1e-14 * scale) {
        throw NumericalError("solve_lyapunov: eigenvalues of A sum to ~0 (singular Lyapunov operator)",
                             std::abs(lhs(i, i)));
      }
    }
    y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  const Matrix x = (u * y * u.adjoint()).real();
  return 0.5 * (x + x.transpose());
}

namespace {

PivotedCholesky pivoted_cholesky_impl(const Matrix& m, double tol, bool quiet) {
  require_square(m, "pivoted_cholesky");
  require_finite(m, "pivoted_cholesky input");
  const Index n = m.rows();
  PivotedCholesky out;
  out.permutation.resize(static_cast<std::size_t>(n));
  std::iota(out.permutation.begin(), out.permutation.end(), Index{0});
  if (n == 0) {
    out.factor.resize(0, 0);
    return out;
  }
  const Matrix sym = 0.5 * (m + m.transpose());
  std::vector<Index>& perm = out.permutation;
  Vector diag = sym.diagonal();
  const double threshold = tol * std::max(diag.cwiseAbs().maxCoeff(), 1e-300);
  Matrix l = Matrix::Zero(n, n);  // rows indexed by original index

  Index k = 0;
  for (; k < n; ++k) {
    Index best = k;
    for (Index i = k + 1; i < n; ++i) {
      if (diag(perm[static_cast<std::size_t>(i)]) > diag(perm[static_cast<std::size_t>(best)])) best = i;
    }
    const Index piv = perm[static_cast<std::size_t>(best)];
    const double d = diag(piv);
    if (!(d > threshold)) {
      if (quiet) break;
      throw NotPositiveDefinite("pivoted_cholesky: non-positive pivot at step " + std::to_string(k), k, d);
    }
    std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(best)]);
    const double lkk = std::sqrt(d);
    l(piv, k) = lkk;
    out.pivots.push_back(lkk);
    for (Index i = k + 1; i < n; ++i) {
      const Index r = perm[static_cast<std::size_t>(i)];
      double s = sym(r, piv);
      for (Index c = 0; c < k; ++c) s -= l(r, c) * l(piv, c);
      l(r, k) = s / lkk;
      diag(r) -= l(r, k) * l(r, k);
    }
  }
  out.rank = k;
  if (quiet && k < n) {
    // Unpivoted tail keeps its original relative order.
    std::sort(perm.begin() + k, perm.end());
  }
  out.factor.resize(n, out.rank);
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < out.rank; ++c) out.factor(i, c) = l(perm[static_cast<std::size_t>(i)], c);
  }
  return out;
}

}  // namespace

PivotedCholesky pivoted_cholesky(const Matrix& m, double tol) { return pivoted_cholesky_impl(m, tol, false); }

PivotedCholesky pivoted_cholesky_partial(const Matrix& m, double tol) {
  return pivoted_cholesky_impl(m, tol, true);
}

Vector singular_values(const Matrix& m) {
  if (m.size() == 0) return Vector(0);
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues();
}

Vector singular_values(const CMatrix& m) {
  if (m.size() == 0) return Vector(0);
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues();
}

namespace {
lapack_logical select_stable(const double* re, const double* /*im*/) { return *re < 0.0; }
lapack_logical select_antistable(const double* re, const double* /*im*/) { return *re > 0.0; }
}  // namespace

Matrix ordered_schur_basis(const Matrix& m, bool stable, Index expected_dim) {
  require_square(m, "ordered_schur_basis");
  require_finite(m, "ordered_schur_basis input");
  const Index n = m.rows();
  if (n == 0) return Matrix(0, 0);
  Matrix a = m;
  Matrix vs(n, n);
  Vector wr(n), wi(n);
  lapack_int sdim = 0;
  const lapack_int info =
      LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', stable ? select_stable : select_antistable,
                    static_cast<lapack_int>(n), a.data(), static_cast<lapack_int>(n), &sdim, wr.data(),
                    wi.data(), vs.data(), static_cast<lapack_int>(n));
  if (info != 0) {
    throw NumericalError("ordered Schur form failed (dgees info=" + std::to_string(info) + ")",
                         static_cast<double>(info));
  }
  if (sdim != expected_dim) {
    throw NumericalError("invariant subspace has dimension " + std::to_string(sdim) + ", expected " +
                             std::to_string(expected_dim),
                         static_cast<double>(sdim));
  }
  return vs.leftCols(sdim);
}

}  // namespace ppmor
