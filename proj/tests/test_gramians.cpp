#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "ppmor/gramians.hpp"
#include "ppmor/hinf.hpp"
#include "ppmor/numkernel.hpp"

using namespace ppmor;

namespace {

Matrix scalar(double x) { return Matrix::Constant(1, 1, x); }

// A X + X A^T + Q = 0 through the Kronecker form.
Matrix kron_lyapunov(const Matrix& a, const Matrix& q) {
  const Index n = a.rows();
  Matrix k = Matrix::Zero(n * n, n * n);
  const Matrix id = Matrix::Identity(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      k.block(i * n, j * n, n, n) += a(i, j) * id;
      k.block(i * n, j * n, n, n) += (i == j ? 1.0 : 0.0) * a;
    }
  const Vector x = k.fullPivLu().solve(-Eigen::Map<const Vector>(q.data(), n * n));
  return Eigen::Map<const Matrix>(x.data(), n, n);
}

Vector oracle_hankel(const StateSpaceModel& m) {
  const Matrix p = kron_lyapunov(m.A, m.B * m.B.transpose());
  const Matrix q = kron_lyapunov(m.A.transpose(), m.C.transpose() * m.C);
  Eigen::EigenSolver<Matrix> es(p * q);
  Vector s = es.eigenvalues().real().cwiseMax(0.0).cwiseSqrt();
  std::sort(s.data(), s.data() + s.size(), std::greater<double>());
  return s;
}

StateSpaceModel random_stable(Index n, Index m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix a = oracle::gaussian(n, n, rng);
  a.diagonal().array() -= Eigen::EigenSolver<Matrix>(a).eigenvalues().real().maxCoeff() + 0.3;
  return StateSpaceModel(a, oracle::gaussian(n, m, rng), oracle::gaussian(m, n, rng), oracle::gaussian(m, m, rng));
}

}  // namespace

TEST_CASE("hankel singular values: scalar cases") {
  CHECK(hankel_singular_values(StateSpaceModel(scalar(-1), scalar(1), scalar(1), scalar(0))).values(0) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(hankel_singular_values(oracle::m1()).values(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(hankel_singular_values(StateSpaceModel(scalar(1), scalar(1), scalar(1), scalar(0))), InvalidInput);
}

TEST_CASE("hankel singular values match the Kronecker oracle") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const StateSpaceModel m = random_stable(7, 2, seed);
    const Vector h = hankel_singular_values(m).values;
    const Vector o = oracle_hankel(m);
    CHECK((h - o).norm() <= 1e-9 * o(0));
    for (Index i = 1; i < h.size(); ++i) CHECK(h(i) <= h(i - 1));
  }
}

TEST_CASE("two decoupled copies double every Hankel value") {
  const StateSpaceModel one = random_stable(3, 1, 4);
  Matrix a = Matrix::Zero(6, 6), b = Matrix::Zero(6, 2), c = Matrix::Zero(2, 6);
  a.topLeftCorner(3, 3) = one.A;
  a.bottomRightCorner(3, 3) = one.A;
  b.block(0, 0, 3, 1) = one.B;
  b.block(3, 1, 3, 1) = one.B;
  c.block(0, 0, 1, 3) = one.C;
  c.block(1, 3, 1, 3) = one.C;
  const StateSpaceModel two(a, b, c, Matrix::Identity(2, 2));
  const Vector s1 = hankel_singular_values(one).values;
  const Vector s2 = hankel_singular_values(two).values;
  for (Index i = 0; i < 3; ++i) {
    CHECK(s2(2 * i) == doctest::Approx(s1(i)).epsilon(1e-10));
    CHECK(s2(2 * i + 1) == doctest::Approx(s1(i)).epsilon(1e-10));
  }

  // truncating inside a multiplicity-2 pair lowers the order
  const BalancedTruncation bt = balanced_truncation(two, 1);
  CHECK(bt.order == 0);
  CHECK(bt.requested_order == 1);
  CHECK_FALSE(bt.warning.empty());
}

TEST_CASE("balanced truncation: trivial orders") {
  const BalancedTruncation z = balanced_truncation(oracle::m1(), 0);
  CHECK(z.order == 0);
  CHECK(z.error_bound == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(z.model.D(0, 0) == 1.0);
  // Z - D = 1 / (s + 1)
  CHECK(std::abs(hinf_norm(error_system(oracle::m1(), z.model)) - 1.0) <= 1e-6);

  const StateSpaceModel m = random_stable(6, 2, 3);
  const BalancedTruncation full = balanced_truncation(m, 6);
  CHECK(full.order == 6);
  CHECK(full.error_bound == 0.0);
  CHECK(hinf_norm(error_system(m, full.model)) <= 1e-8 * hinf_norm(m));
  CHECK_THROWS_AS(balanced_truncation(m, 7), InvalidInput);
}

TEST_CASE("balanced truncation error lies between the Hankel bounds") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const StateSpaceModel m = random_stable(10, 2, seed);
    const Vector s = hankel_singular_values(m).values;
    for (Index k = 1; k < 10; ++k) {
      const BalancedTruncation bt = balanced_truncation(m, k);
      REQUIRE(bt.order == k);
      CHECK(eigenvalues(bt.model.A).real().maxCoeff() < 0);
      const double err = hinf_norm(error_system(m, bt.model));
      CHECK(err >= s(k) * (1 - 1e-6));
      CHECK(err <= 2 * s.tail(10 - k).sum() + 1e-6 * s(0));
      CHECK(bt.error_bound == doctest::Approx(2 * s.tail(10 - k).sum()));
    }
  }
}
