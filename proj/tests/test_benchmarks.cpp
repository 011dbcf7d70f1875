#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "ppmor/benchmarks.hpp"
#include "ppmor/model_io.hpp"
#include "ppmor/passivity.hpp"
#include "ppmor/spectral.hpp"

using namespace ppmor;

TEST_CASE("GaussianStream is deterministic and roughly standard normal") {
  GaussianStream a(7), b(7), c(8);
  const Matrix ma = a.matrix(50, 40);
  CHECK(ma == b.matrix(50, 40));
  CHECK(ma != c.matrix(50, 40));
  GaussianStream big(1);
  double sum = 0, sq = 0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double x = big.next();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / count) < 0.01);
  CHECK(std::abs(sq / count - 1.0) < 0.02);
}

TEST_CASE("rlc_ladder: one section") {
  const StateSpaceModel m = rlc_ladder(1, 1.0, 1.0, 1.0);
  CHECK(m.n() == 2);
  CHECK(m.m() == 1);
  CHECK(m.D(0, 0) == 1.0);
  CHECK(is_strictly_passive(m).strictly_passive);
  // v' = -i + u, i' = v - i, y = v + u:  Z(s) = (s + 1) / (s^2 + s + 1) + 1
  for (double w : {0.0, 0.5, 2.0}) {
    const Complex s(0, w);
    CHECK(std::abs(oracle::transfer(m, s)(0, 0) - ((s + 1.0) / (s * s + s + 1.0) + 1.0)) < 1e-14);
  }
  const SpectralZeroSet z = spectral_zeros(m);
  CHECK(z.count_by_half_plane() == std::vector<Index>{2, 0, 2});
  for (Index i = 0; i < z.size(); ++i) {
    double d = 1e300;
    for (Index j = 0; j < z.size(); ++j) d = std::min(d, std::abs(z.zeros(i) + z.zeros(j)));
    CHECK(d < 1e-12);
  }
}

TEST_CASE("rlc_ladder: default benchmark") {
  const StateSpaceModel m = rlc_ladder(100);
  CHECK(m.n() == 200);
  CHECK(m.m() == 1);
  CHECK(m.D(0, 0) == doctest::Approx(0.1));
  const StrictPassivityReport r = is_strictly_passive(m);
  CHECK(r.strictly_passive);
  CHECK(r.feedthrough_min == doctest::Approx(0.2));
}

TEST_CASE("rlc_ladder: parameter sweep stays strictly passive") {
  for (int sections : {1, 2, 5, 20})
    for (double r : {0.05, 1.0, 3.0})
      for (double l : {0.5, 2.0})
        for (double c : {0.5, 2.0}) CHECK(is_strictly_passive(rlc_ladder(sections, r, l, c)).strictly_passive);
  CHECK_THROWS_AS(rlc_ladder(0), InvalidInput);
  CHECK_THROWS_AS(rlc_ladder(3, -1.0), InvalidInput);
  CHECK_THROWS_AS(rlc_ladder(3, 1.0, 0.0), InvalidInput);
}

TEST_CASE("random_ph: structure and radius") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const PortHamiltonianModel p = random_ph(6, 2, 0.5, seed);
    CHECK((p.J + p.J.transpose()).norm() == 0.0);
    CHECK((p.N + p.N.transpose()).norm() == 0.0);
    CHECK(p.Q == Matrix::Identity(6, 6));
    CHECK(std::abs(normalized_passivity_radius(p) - 0.5) <= 1e-10);
    CHECK(is_strictly_passive(ph_to_statespace(p)).strictly_passive);
    // X = I certifies the normalized model
    CHECK(verify_certificate(ph_to_statespace(p), Matrix::Identity(6, 6)).certifies(CertificateKind::kStrictlyPassive));
  }
  CHECK(std::abs(normalized_passivity_radius(random_ph(3, 1, 1.0, 2)) - 1.0) <= 1e-10);
  CHECK_THROWS_AS(random_ph(0, 1, 0.5, 1), InvalidInput);
  CHECK_THROWS_AS(random_ph(2, 1, 0.0, 1), InvalidInput);
}

TEST_CASE("random_ph: same seed gives identical bytes") {
  const PortHamiltonianModel a = random_ph(6, 2, 0.5, 7);
  const PortHamiltonianModel b = random_ph(6, 2, 0.5, 7);
  const std::string da = dump_model(ph_to_statespace(a), &a);
  CHECK(da == dump_model(ph_to_statespace(b), &b));
  const PortHamiltonianModel c = random_ph(6, 2, 0.5, 8);
  CHECK(da != dump_model(ph_to_statespace(c), &c));
}
