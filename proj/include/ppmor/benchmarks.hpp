#pragma once

// Deterministic test systems: a passive RLC ladder and random normalized
// port-Hamiltonian models.

#include <cstdint>
#include <random>

#include "ppmor/model.hpp"

namespace ppmor {

// SISO ladder driven by a current source at node 1. Each section has a shunt
// capacitor C and a series branch of inductor L and resistor R; the last
// branch closes to ground. The port voltage is read across node 1 plus a
// series input resistor R, so D = R. States: capacitor voltages v_1..v_N,
// then inductor currents i_1..i_N (n = 2 * sections).
// Throws InvalidInput for non-positive values and NumericalError if the
// result fails the strict passivity check.
StateSpaceModel rlc_ladder(int sections, double r = 0.1, double l = 1.0, double c = 1.0);

// Normalized (Q = I) random port-Hamiltonian model. The dissipation block
// [[R, P], [P^T, S]] is a Gaussian symmetric matrix translated so its
// smallest eigenvalue is lambda_min_w; the interconnection block is the skew
// part of a Gaussian matrix. Deterministic for a given seed on every platform
// (mt19937_64 + Box-Muller).
PortHamiltonianModel random_ph(int n, int m, double lambda_min_w, std::uint64_t seed);

// Gaussian samples from mt19937_64 with a fixed Box-Muller transform
// (std::normal_distribution is implementation-defined).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}
  double next();
  // Filled column by column.
  Matrix matrix(Index rows, Index cols);

 private:
  double uniform();  // in (0, 1)
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ppmor
