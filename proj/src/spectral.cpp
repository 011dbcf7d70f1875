#include "ppmor/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <set>

#include <Eigen/Cholesky>

#include "ppmor/numkernel.hpp"
#include "ppmor/passivity.hpp"

namespace ppmor {

std::vector<Index> SpectralZeroSet::right_half_plane() const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i) {
    if (half_plane[static_cast<std::size_t>(i)] == HalfPlane::kRight) out.push_back(i);
  }
  return out;
}

std::vector<Index> SpectralZeroSet::count_by_half_plane() const {
  std::vector<Index> counts(3, 0);
  for (HalfPlane h : half_plane) {
    if (h == HalfPlane::kLeft) ++counts[0];
    if (h == HalfPlane::kImaginary) ++counts[1];
    if (h == HalfPlane::kRight) ++counts[2];
  }
  return counts;
}

SpectralZeroSet spectral_zeros(const StateSpaceModel& model, const Tolerances& tol) {
  const Matrix h = hamiltonian_matrix(model, tol);
  const std::vector<EigenPair> pairs = eig(h);
  const Index k = static_cast<Index>(pairs.size());
  const double band = tol.imaginary * (model.n() > 0 ? norm2(model.A) : 0.0);

  SpectralZeroSet set;
  set.zeros.resize(k);
  set.vectors.resize(h.rows(), k);
  set.half_plane.resize(static_cast<std::size_t>(k));
  set.conjugate.resize(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    const EigenPair& p = pairs[static_cast<std::size_t>(i)];
    set.zeros(i) = p.value;
    set.vectors.col(i) = p.vector;
    const double re = p.value.real();
    set.half_plane[static_cast<std::size_t>(i)] =
        std::abs(re) <= band ? HalfPlane::kImaginary : (re > 0 ? HalfPlane::kRight : HalfPlane::kLeft);
  }
  for (Index i = 0; i < k; ++i) {
    const Complex z = set.zeros(i);
    if (z.imag() == 0.0) {
      set.conjugate[static_cast<std::size_t>(i)] = i;
      continue;
    }
    // dgeev returns exact conjugates; fall back to the nearest one.
    Index best = i;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < k; ++j) {
      if (j == i) continue;
      const double dist = std::abs(set.zeros(j) - std::conj(z));
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    set.conjugate[static_cast<std::size_t>(i)] = best;
  }
  return set;
}

namespace {

using LComplex = std::complex<long double>;

// Newton steps on H x = lambda x with the largest component of x fixed; the
// residual is accumulated in long double, the correction solved in double.
void refine_eigenpair(const Matrix& h, Complex& lambda, CVector& x) {
  const Index n2 = h.rows();
  Index k = 0;
  x.cwiseAbs().maxCoeff(&k);
  x /= x(k);
  const auto residual = [&](const CVector& y, Complex lam) {
    CVector r(n2);
    for (Index i = 0; i < n2; ++i) {
      LComplex acc = -LComplex(lam) * LComplex(y(i));
      for (Index j = 0; j < n2; ++j) acc += static_cast<long double>(h(i, j)) * LComplex(y(j));
      r(i) = Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    }
    return r;
  };
  CVector r = residual(x, lambda);
  for (int it = 0; it < 3; ++it) {
    CMatrix m = h.cast<Complex>();
    m.diagonal().array() -= lambda;
    m.col(k) = -x;
    const CVector step = m.partialPivLu().solve(-r);
    if (!step.allFinite()) return;
    CVector x1 = x + step;
    x1(k) = 1.0;
    const Complex l1 = lambda + step(k);
    const CVector r1 = residual(x1, l1);
    if (!(r1.norm() < r.norm())) break;
    x = x1;
    lambda = l1;
    r = r1;
  }
}

DeflatingBasis assemble(const StateSpaceModel& model, const SpectralZeroSet& zeros, const std::vector<Index>& selection,
                        VectorNormalization normalization, const Matrix* refine_with) {
  const Index n = model.n();
  const Index order = static_cast<Index>(selection.size());
  DeflatingBasis basis;
  basis.selection = selection;
  Matrix cols(2 * n, order);
  basis.R = Matrix::Zero(order, order);
  basis.zero_list.resize(order);
  std::set<Index> done;
  Index c = 0;
  for (Index idx : selection) {
    if (done.count(idx)) continue;
    const Index partner = zeros.conjugate[static_cast<std::size_t>(idx)];
    const Index rep = zeros.zeros(idx).imag() >= 0.0 ? idx : partner;
    CVector z = zeros.vectors.col(rep);
    Complex lam = zeros.zeros(rep);
    if (refine_with) {
      refine_eigenpair(*refine_with, lam, z);
      if (partner == idx) {
        lam = lam.real();
        z = z.real().cast<Complex>();
      }
      z /= z.norm();
    }
    if (normalization == VectorNormalization::kUnitV) {
      const double vn = z.head(n).norm();
      if (vn > 0) z /= vn;
    }
    if (partner == idx) {
      cols.col(c) = z.real();
      basis.R(c, c) = lam.real();
      basis.zero_list(c) = Complex(lam.real(), 0.0);
      ++c;
    } else {
      cols.col(c) = z.real();
      cols.col(c + 1) = z.imag();
      basis.R(c, c) = lam.real();
      basis.R(c, c + 1) = lam.imag();
      basis.R(c + 1, c) = -lam.imag();
      basis.R(c + 1, c + 1) = lam.real();
      basis.zero_list(c) = lam;
      basis.zero_list(c + 1) = std::conj(lam);
      c += 2;
    }
    done.insert(idx);
    done.insert(partner);
  }
  basis.V = cols.topRows(n);
  basis.U = cols.bottomRows(n);
  const Matrix k = model.D + model.D.transpose();
  basis.W = -k.llt().solve(model.B.transpose() * basis.U + model.C * basis.V);
  return basis;
}

}  // namespace

DeflatingBasis assemble_deflating_basis(const StateSpaceModel& model, const SpectralZeroSet& zeros,
                                        const std::vector<Index>& selection, VectorNormalization normalization,
                                        bool refine) {
  for (Index idx : selection) {
    if (idx < 0 || idx >= zeros.size()) throw InvalidInput("deflating basis: zero index out of range");
  }
  std::set<Index> chosen;
  for (Index idx : selection) {
    if (!chosen.insert(idx).second) throw InvalidInput("deflating basis: duplicate zero index");
    const HalfPlane hp = zeros.half_plane[static_cast<std::size_t>(idx)];
    if (hp == HalfPlane::kImaginary) throw InvalidInput("deflating basis: imaginary-axis zero selected");
    if (hp != HalfPlane::kRight) throw InvalidInput("deflating basis: left-half-plane zero selected");
  }
  for (Index idx : selection) {
    if (!chosen.count(zeros.conjugate[static_cast<std::size_t>(idx)])) {
      throw InvalidInput("deflating basis: selection is not self-conjugate");
    }
  }
  DeflatingBasis basis = assemble(model, zeros, selection, normalization, nullptr);
  if (refine && basis.order() > 0 && gram_matrix(basis).asymmetry > kRefineAsymmetry) {
    const Matrix h = hamiltonian_matrix(model);
    basis = assemble(model, zeros, selection, normalization, &h);
  }
  return basis;
}

DeflatingResiduals deflating_residuals(const StateSpaceModel& model, const DeflatingBasis& basis) {
  DeflatingResiduals r;
  const Matrix& a = model.A;
  r.a = (a * basis.V + model.B * basis.W - basis.V * basis.R).norm();
  r.b = (a.transpose() * basis.U + model.C.transpose() * basis.W + basis.U * basis.R).norm();
  r.c = (model.B.transpose() * basis.U + model.C * basis.V + (model.D + model.D.transpose()) * basis.W).norm();
  const double basis_norm = std::sqrt(basis.U.squaredNorm() + basis.V.squaredNorm() + basis.W.squaredNorm());
  r.scale = (a.norm() + model.B.norm() + model.C.norm() + model.D.norm() + basis.R.norm()) * basis_norm;
  return r;
}

GramMatrix gram_matrix(const DeflatingBasis& basis) {
  const Matrix raw = -basis.U.transpose() * basis.V;
  GramMatrix g;
  const double nrm = raw.norm();
  g.asymmetry = nrm > 0 ? (raw - raw.transpose()).norm() / nrm : 0.0;
  g.X = 0.5 * (raw + raw.transpose());
  return g;
}

std::vector<Index> self_conjugate_prefix(const std::vector<Index>& column_order,
                                         const std::vector<Index>& column_group,
                                         const std::vector<Index>& group_size, Index order) {
  std::vector<Index> picked;
  std::set<Index> seen;
  Index count = 0;
  for (Index col : column_order) {
    if (count == order) break;
    const Index g = column_group[static_cast<std::size_t>(col)];
    if (!seen.insert(g).second) continue;
    const Index sz = group_size[static_cast<std::size_t>(g)];
    if (count + sz <= order) {
      picked.push_back(g);
      count += sz;
    }
  }
  return picked;
}

ZeroRanking rank_spectral_zeros(const StateSpaceModel& model, double xi, VectorNormalization normalization,
                                const Tolerances& tol) {
  ZeroRanking rk;
  rk.shifted = shift_model(model, xi);
  rk.zeros = spectral_zeros(rk.shifted, tol);
  const std::vector<Index> right = rk.zeros.right_half_plane();
  if (right.empty()) return rk;

  // Realified columns of the full right-half-plane basis, grouped per zero.
  const DeflatingBasis full = assemble_deflating_basis(rk.shifted, rk.zeros, right, normalization);
  std::set<Index> done;
  Index col = 0;
  for (Index idx : right) {
    if (done.count(idx)) continue;
    const Index partner = rk.zeros.conjugate[static_cast<std::size_t>(idx)];
    const Index rep = rk.zeros.zeros(idx).imag() >= 0.0 ? idx : partner;
    const Index sz = partner == idx ? 1 : 2;
    const Index g = static_cast<Index>(rk.group_rep.size());
    rk.group_rep.push_back(rep);
    rk.group_size.push_back(sz);
    rk.group_first_col.push_back(col);
    for (Index s = 0; s < sz; ++s) rk.column_group.push_back(g);
    col += sz;
    done.insert(idx);
    done.insert(partner);
  }
  rk.X = gram_matrix(full).X;
  const PivotedCholesky pc = pivoted_cholesky_partial(rk.X);
  rk.column_order = pc.permutation;
  rk.cholesky_rank = pc.rank;
  return rk;
}

GreedySelection select_from_ranking(const ZeroRanking& rk, Index order) {
  if (order < 1) throw InvalidInput("greedy_select: order must be >= 1");
  const std::size_t available = rk.zeros.right_half_plane().size();
  if (static_cast<Index>(available) < order) {
    throw NumericalError("greedy_select: only " + std::to_string(available) +
                             " right-half-plane spectral zeros, order " + std::to_string(order) + " requested",
                         static_cast<double>(available));
  }
  GreedySelection out;
  out.shifted = rk.shifted;
  out.zeros = rk.zeros;
  out.cholesky_rank = rk.cholesky_rank;
  const std::vector<Index> groups = self_conjugate_prefix(rk.column_order, rk.column_group, rk.group_size, order);
  std::vector<Index> cols;
  for (Index g : groups) {
    const Index rep = rk.group_rep[static_cast<std::size_t>(g)];
    out.selection.push_back(rep);
    const Index partner = rk.zeros.conjugate[static_cast<std::size_t>(rep)];
    if (partner != rep) out.selection.push_back(partner);
    for (Index s = 0; s < rk.group_size[static_cast<std::size_t>(g)]; ++s) {
      cols.push_back(rk.group_first_col[static_cast<std::size_t>(g)] + s);
    }
  }
  out.achieved_order = static_cast<Index>(out.selection.size());
  const Index k = static_cast<Index>(cols.size());
  Matrix sub(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) sub(i, j) = rk.X(cols[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
  }
  out.score = k > 0 ? lambda_min_sym(sub) : 0.0;
  return out;
}

GreedySelection greedy_select(const StateSpaceModel& model, Index order, double xi,
                              VectorNormalization normalization, const Tolerances& tol) {
  if (order < 1) throw InvalidInput("greedy_select: order must be >= 1");
  return select_from_ranking(rank_spectral_zeros(model, xi, normalization, tol), order);
}

}  // namespace ppmor
