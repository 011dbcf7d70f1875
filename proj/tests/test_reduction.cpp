#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "ppmor/benchmarks.hpp"
#include "ppmor/numkernel.hpp"
#include "ppmor/reduction.hpp"

using namespace ppmor;

namespace {

Matrix scalar(double x) { return Matrix::Constant(1, 1, x); }

double grid_mismatch(const StateSpaceModel& a, const StateSpaceModel& b) {
  double worst = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double w = i == 0 ? 0.0 : std::pow(10.0, -3 + 6.0 * i / 60);
    const CMatrix za = oracle::transfer(a, Complex(0, w));
    worst = std::max(worst, (za - oracle::transfer(b, Complex(0, w))).norm() / za.norm());
  }
  return worst;
}

double min_distance(const CVector& from, const CVector& to) {
  double worst = 0.0;
  for (Index i = 0; i < from.size(); ++i) {
    double d = 1e300;
    for (Index j = 0; j < to.size(); ++j) d = std::min(d, std::abs(from(i) - to(j)));
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace

TEST_CASE("full-order reduction of M1 reproduces M1") {
  const StateSpaceModel m = oracle::m1();
  const SpectralZeroSet z = spectral_zeros(m);
  const ReducedModel r = project(m, assemble_deflating_basis(m, z, {1}, VectorNormalization::kUnitV));
  CHECK(std::abs(r.model.A(0, 0) + 1.0) < 1e-14);
  CHECK(std::abs(r.model.B(0, 0) * r.model.C(0, 0) - 1.0) < 1e-14);
  CHECK(r.model.D(0, 0) == 1.0);
  const InterpolationReport ip = verify_interpolation(m, r);
  CHECK(ip.max_residual < 1e-14);
  CHECK(ip.feedthrough == 0.0);
  // xi = 0 yields X_plus, which is passive but not strict
  CHECK(std::abs(r.certificate.X(0, 0) - 3 - 2 * std::sqrt(2.0)) < 1e-13);
  CHECK(r.certificate.status == Certificate::Status::kPassive);
}

TEST_CASE("M1 at xi = 1") {
  const StateSpaceModel m = oracle::m1();
  const StateSpaceModel s = shift_model(m, 1.0);
  CHECK(s.A(0, 0) == -0.5);
  CHECK(s.D(0, 0) == 0.5);
  const ReducedModel r = project_shifted(m, 1.0, 1);
  CHECK(r.xi == 1.0);
  CHECK(r.radius_lower_bound == 0.5);
  CHECK(r.certificate.X(0, 0) > 0);
  CHECK(r.certificate.status == Certificate::Status::kStrictlyPassive);
  CHECK(r.lmi_margin >= -1e-12 * r.lmi_scale);
  const double xhat = r.certificate.X(0, 0);
  CHECK(r.certificate.w_margin >= 1.0 * std::min(xhat, 1.0) - 1e-12);
  // the only spectral zero of the shifted model is sqrt(1.25); R - xi/2 is a pole-free shift
  CHECK(std::abs(r.basis.R(0, 0) - std::sqrt(1.25)) < 1e-14);
  CHECK(std::abs(r.model.A(0, 0) + 1.0) < 1e-14);
  CHECK(grid_mismatch(m, r.model) < 1e-14);
  CHECK(r.normalized_radius >= r.radius_lower_bound - 1e-12);
  CHECK(verify_interpolation(m, r).max_residual < 1e-14);
}

TEST_CASE("boundary certificate: the reduction survives a failed normalization") {
  // n = 10, cond(V) ~ 1e11; X_hat = X_plus sits on the KYP boundary
  const StateSpaceModel m = oracle::random_strictly_passive(10, 1, 39);
  const ReducedModel r = project_shifted(m, 0.0, 10);
  CHECK(grid_mismatch(m, r.model) <= 1e-6);
  CHECK(std::abs(r.lmi_margin) <= 1e-6 * r.lmi_scale);
  if (r.normalized) {
    CHECK(r.normalization_failure.empty());
  } else {
    CHECK_FALSE(r.normalization_failure.empty());
  }

  const ReducedModel s = project_shifted(oracle::m1(), 1.0, 1);
  REQUIRE(s.normalized.has_value());
  CHECK(s.normalized_radius == doctest::Approx(lambda_min_sym(s.normalized->ph.dissipation())).epsilon(1e-12));
}

TEST_CASE("xi = 0 shifted projection equals the plain projection") {
  const StateSpaceModel m = oracle::random_strictly_passive(6, 2, 3);
  const GreedySelection g = greedy_select(m, 4, 0.0);
  const ReducedModel a = project(m, assemble_deflating_basis(m, g.zeros, g.selection));
  const ReducedModel b = project_shifted(m, 0.0, g.zeros, g.selection);
  CHECK((a.model.A - b.model.A).norm() == 0.0);
  CHECK((a.model.B - b.model.B).norm() == 0.0);
  CHECK(a.lmi_margin == b.lmi_margin);
}

TEST_CASE("full-order reduction matches the original transfer function") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const StateSpaceModel m = oracle::random_strictly_passive(7, 2, seed);
    const ReducedModel r = project_shifted(m, 0.0, 7);
    CHECK(grid_mismatch(m, r.model) <= 1e-8);
  }
}

TEST_CASE("shifted reductions: certificate, LMI, stability, interpolation, spectrum") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const StateSpaceModel m = ph_to_statespace(random_ph(8, 2, 0.5, seed));
    const double xi_limit = compute_xi_limit(m);
    for (double frac : {0.0, 0.25, 0.5, 0.9}) {
      const double xi = frac * xi_limit;
      ReducedModel r;
      try {
        r = project_shifted(m, xi, 4);
      } catch (const NotPositiveDefinite&) {
        FAIL("X_hat not positive definite inside (0, Xi)");
      }
      CHECK(r.certificate.x_margin > 0);
      CHECK(r.lmi_margin >= -1e-8 * r.lmi_scale);
      CHECK(eigenvalues(r.model.A).real().maxCoeff() < 0);
      CHECK(r.asymmetry <= 1e-9);
      const InterpolationReport ip = verify_interpolation(m, r);
      CHECK(ip.max_residual <= 1e-8);
      CHECK(ip.feedthrough == 0.0);
      // spectrum of A_hat + B_hat W equals the selected zeros shifted by -xi/2
      const Matrix closed = r.model.A + r.model.B * r.W_reduced;
      CVector target = r.basis.zero_list;
      target.array() -= 0.5 * xi;
      CHECK(min_distance(eigenvalues(closed), target) <= 1e-9 * (1 + closed.norm()));
      CHECK(r.normalized_radius >= r.radius_lower_bound - 1e-8 * r.lmi_scale);
    }
  }
}

TEST_CASE("interpolation conditions match an explicit-inverse oracle") {
  const StateSpaceModel m = oracle::random_strictly_passive(6, 2, 12);
  const double xi = 0.5 * compute_xi_limit(m);
  const ReducedModel r = project_shifted(m, xi, 3);
  for (const EigenPair& p : eig(r.basis.R)) {
    const CVector dir = r.basis.W.cast<Complex>() * p.vector;
    const Complex sr = p.value - 0.5 * xi;
    const CVector a = oracle::transfer(m, sr) * dir;
    CHECK((a - oracle::transfer(r.model, sr) * dir).norm() <= 1e-9 * a.norm());
    const Complex sl = -p.value - 0.5 * xi;
    const CVector b = oracle::transfer(m, sl).transpose() * dir;
    CHECK((b - oracle::transfer(r.model, sl).transpose() * dir).norm() <= 1e-9 * b.norm());
  }
}

TEST_CASE("project_shifted rejects xi beyond the feedthrough bound") {
  CHECK_THROWS_AS(project_shifted(oracle::m1(), 2.0, 1), InvalidInput);
  CHECK_THROWS_AS(project_shifted(oracle::m1(), -0.1, 1), InvalidInput);
}

TEST_CASE("project_with_certificate") {
  const ReducedModel r1 = project_with_certificate(oracle::m1(), scalar(1), scalar(1));
  CHECK(std::abs(r1.certificate.X(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(r1.basis.U(0, 0) + 1.0) < 1e-15);
  CHECK(std::abs(r1.model.A(0, 0) + 1.0) < 1e-15);
  CHECK(std::abs(r1.model.B(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(r1.model.C(0, 0) - 1.0) < 1e-15);

  const oracle::PassiveCase pc = oracle::random_strictly_passive_case(6, 2, 5);
  const ReducedModel full = project_with_certificate(pc.model, pc.certificate, Matrix::Identity(6, 6));
  CHECK((full.certificate.X - pc.certificate).norm() <= 1e-13 * pc.certificate.norm());
  CHECK(grid_mismatch(pc.model, full.model) <= 1e-10);

  CHECK_THROWS_AS(project_with_certificate(oracle::m1(), scalar(-1), scalar(1)), InvalidInput);
  CHECK_THROWS_AS(project_with_certificate(pc.model, pc.certificate, Matrix::Zero(6, 2)), InvalidInput);
}

TEST_CASE("project_with_certificate preserves strict passivity for any V") {
  std::mt19937_64 rng(99);
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const oracle::PassiveCase pc = oracle::random_strictly_passive_case(8, 2, seed);
    const Matrix v = oracle::gaussian(8, 4, rng);
    const ReducedModel r = project_with_certificate(pc.model, pc.certificate, v);
    // U^T V = -I by construction
    CHECK((r.basis.U.transpose() * v + Matrix::Identity(4, 4)).norm() <= 1e-10 * r.certificate.X.norm());
    if (verify_certificate(r.model, r.certificate.X).certifies(CertificateKind::kStrictlyPassive)) ++ok;
  }
  CHECK(ok == 100);
}

TEST_CASE("robustness_diagnostics: exact basis") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const StateSpaceModel m = ph_to_statespace(random_ph(6, 2, 0.5, seed));
    const double xi = 0.5 * compute_xi_limit(m);
    const ReducedModel r = project_shifted(m, xi, 4);
    const DeflatingBasis& b = r.basis;
    const RobustnessReport rep = robustness_diagnostics(m, b.U, b.V, b.W, b.R, xi);
    CHECK(rep.residual_u <= 1e-10);
    CHECK(rep.residual_v <= 1e-10);
    CHECK(rep.residual_w <= 1e-10);
    const double lam = std::min(rep.certificate_min, 1.0);
    CHECK(rep.symmetrized_margin >= xi * lam - 1e-8);
    CHECK(rep.perturbation_norm <= 1e-11 * r.lmi_scale);
    CHECK(rep.bound_check);
    CHECK(rep.certified);
    CHECK_FALSE(rep.passivity_lost);
  }
}

TEST_CASE("robustness_diagnostics: injected noise") {
  std::mt19937_64 rng(2024);
  int small_ok = 0, large_flagged = 0, large_lost = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const StateSpaceModel m = ph_to_statespace(random_ph(6, 2, 0.5, seed));
    const double xi = 0.5 * compute_xi_limit(m);
    const ReducedModel r = project_shifted(m, xi, 4);
    const DeflatingBasis& b = r.basis;
    for (double eps : {1e-6, 1e-1}) {
      const auto noisy = [&](const Matrix& x) {
        const Matrix g = oracle::gaussian(x.rows(), x.cols(), rng);
        return Matrix(x + eps * x.norm() * g / g.norm());
      };
      const RobustnessReport rep = robustness_diagnostics(m, noisy(b.U), noisy(b.V), noisy(b.W), b.R, xi);
      CHECK(rep.bound_check);
      if (rep.certified) CHECK_FALSE(rep.passivity_lost);
      if (eps == 1e-6) {
        if (rep.symmetrized_margin > 0 && !rep.passivity_lost) ++small_ok;
      } else {
        if (!rep.certified) ++large_flagged;
        if (rep.passivity_lost) ++large_lost;
      }
    }
  }
  MESSAGE("1e-1 noise: " << large_flagged << " uncertified, " << large_lost << " lost passivity, of 20");
  CHECK(small_ok == 20);
  CHECK(large_flagged == 20);
}

TEST_CASE("robustness_diagnostics validates dimensions") {
  const Matrix z = Matrix::Zero(2, 1);
  CHECK_THROWS_AS(robustness_diagnostics(oracle::m1(), z, z, z, scalar(1), 0.5), InvalidInput);
}
