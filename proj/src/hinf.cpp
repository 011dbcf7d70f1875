#include "ppmor/hinf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include "ppmor/numkernel.hpp"

namespace ppmor {

namespace {

double sigma_max(const CMatrix& z) {
  if (z.size() == 0) return 0.0;
  if (z.size() == 1) return std::abs(z(0, 0));
  return Eigen::JacobiSVD<CMatrix>(z).singularValues()(0);
}

Vector log_grid(double w_min, double w_max, int points) {
  Vector w(points);
  const double a = std::log10(w_min);
  const double b = std::log10(w_max);
  for (int k = 0; k < points; ++k) w(k) = std::pow(10.0, a + (b - a) * k / (points - 1));
  return w;
}

// Level-set Hamiltonian for gamma > sigma_max(D), R = gamma^2 I - D^T D:
// [[A + B R^{-1} D^T C, B R^{-1} B^T], [-C^T (I + D R^{-1} D^T) C, -(A + B R^{-1} D^T C)^T]].
Matrix level_set_hamiltonian(const StateSpaceModel& model, double gamma) {
  const Index n = model.n();
  Matrix r = -model.D.transpose() * model.D;
  r.diagonal().array() += gamma * gamma;
  const Eigen::LLT<Matrix> llt(r);
  const Matrix rinv_dtc = llt.solve(model.D.transpose() * model.C);
  const Matrix rinv_bt = llt.solve(model.B.transpose());
  const Matrix ac = model.A + model.B * rinv_dtc;
  Matrix inner = model.D * llt.solve(model.D.transpose());
  inner.diagonal().array() += 1.0;
  Matrix h(2 * n, 2 * n);
  h.topLeftCorner(n, n) = ac;
  h.topRightCorner(n, n) = model.B * rinv_bt;
  h.bottomLeftCorner(n, n) = -model.C.transpose() * inner * model.C;
  h.bottomRightCorner(n, n) = -ac.transpose();
  return h;
}

}  // namespace

SigmaPlot sigma_sample(const StateSpaceModel& model, double w_min, double w_max, int points) {
  if (!(w_min > 0.0) || !(w_max > w_min) || points < 2) {
    throw InvalidInput("sigma_sample: need 0 < w_min < w_max and points >= 2");
  }
  SigmaPlot plot;
  plot.frequencies = log_grid(w_min, w_max, points);
  plot.values.resize(points, model.m());
  plot.pole.assign(static_cast<std::size_t>(points), false);
  const FrequencyEvaluator eval(model);
  for (int k = 0; k < points; ++k) {
    const auto z = eval(Complex(0.0, plot.frequencies(k)));
    if (!z) {
      plot.pole[static_cast<std::size_t>(k)] = true;
      plot.values.row(k).setConstant(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    if (model.m() == 1) {
      plot.values(k, 0) = std::abs((*z)(0, 0));
    } else if (model.m() > 0) {
      plot.values.row(k) = Eigen::JacobiSVD<CMatrix>(*z).singularValues().transpose();
    }
  }
  return plot;
}

void write_sigma_csv(std::ostream& os, const SigmaPlot& plot) {
  os << "omega";
  for (Index j = 0; j < plot.values.cols(); ++j) os << ",sigma_" << (j + 1);
  os << "\n";
  char buf[64];
  for (Index k = 0; k < plot.frequencies.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.12g", plot.frequencies(k));
    os << buf;
    for (Index j = 0; j < plot.values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.12g", plot.values(k, j));
      os << ',' << buf;
    }
    os << "\n";
  }
}

HinfResult hinf_norm_detailed(const StateSpaceModel& model, const HinfOptions& opts) {
  if (!(opts.rel_tol > 0.0) || opts.grid_points < 2) throw InvalidInput("hinf_norm: bad options");
  HinfResult res;
  const double d_norm = norm2(model.D);
  if (model.n() == 0 || model.m() == 0) {
    res.value = res.upper = d_norm;
    res.peak_frequency = std::numeric_limits<double>::infinity();
    return res;
  }
  const CVector poles = eigenvalues(model.A);
  for (Index i = 0; i < poles.size(); ++i) {
    if (!(poles(i).real() < 0.0)) throw InvalidInput("hinf_norm: A is not asymptotically stable");
  }

  const FrequencyEvaluator eval(model);
  double lo = d_norm;
  res.peak_frequency = std::numeric_limits<double>::infinity();
  const auto probe = [&](double w) {
    const auto z = eval(Complex(0.0, w));
    if (!z) return;
    const double s = sigma_max(*z);
    if (s > lo) {
      lo = s;
      res.peak_frequency = w;
    }
  };
  probe(0.0);
  const Vector grid = log_grid(opts.w_min, opts.w_max, opts.grid_points);
  for (Index k = 0; k < grid.size(); ++k) probe(grid(k));
  if (lo == 0.0) return res;

  // Work on Z / lo so that the level sets stay near 1.
  const double unit = lo;
  const StateSpaceModel scaled(model.A, model.B, model.C / unit, model.D / unit);
  lo = 1.0;
  const auto probe_scaled = [&](double w) {
    const auto z = eval(Complex(0.0, w));
    if (!z) return;
    const double s = sigma_max(*z) / unit;
    if (s > lo) {
      lo = s;
      res.peak_frequency = w;
    }
  };
  const auto finish = [&](double upper) {
    res.value = lo * unit;
    res.upper = upper * unit;
    return res;
  };

  for (int it = 0; it < opts.max_iterations; ++it) {
    res.iterations = it + 1;
    const double gamma = lo * (1.0 + opts.rel_tol);
    const Matrix h = level_set_hamiltonian(scaled, gamma);
    const CVector lam = eigenvalues(h);
    const double band = 1e-6 * std::max(1.0, h.lpNorm<Eigen::Infinity>());
    std::vector<double> crossings;
    for (Index i = 0; i < lam.size(); ++i) {
      if (std::abs(lam(i).real()) <= band) crossings.push_back(lam(i).imag());
    }
    if (crossings.empty()) return finish(gamma);
    std::sort(crossings.begin(), crossings.end());
    const double before = lo;
    for (std::size_t i = 0; i + 1 < crossings.size(); ++i) probe_scaled(std::abs(0.5 * (crossings[i] + crossings[i + 1])));
    for (double c : crossings) probe_scaled(std::abs(c));
    if (lo < gamma * (1.0 - 1e-12)) {
      // Midpoints missed the level set: refine locally around each crossing.
      for (double c : crossings) {
        const double w0 = std::abs(c);
        if (w0 == 0.0) continue;
        for (int k = -100; k <= 100; ++k) probe_scaled(w0 * std::pow(1.05, k / 100.0));
      }
    }
    if (!(lo > before)) {
      // No progress: the detected crossings are rounding artefacts.
      return finish(gamma);
    }
  }
  return finish(lo * (1.0 + opts.rel_tol));
}

double hinf_norm(const StateSpaceModel& model, double rel_tol) {
  HinfOptions opts;
  opts.rel_tol = rel_tol;
  return hinf_norm_detailed(model, opts).value;
}

StateSpaceModel error_system(const StateSpaceModel& model, const StateSpaceModel& reduced) {
  if (model.m() != reduced.m()) throw InvalidInput("error_system: port counts differ");
  const Index n = model.n();
  const Index k = reduced.n();
  const Index m = model.m();
  Matrix a = Matrix::Zero(n + k, n + k);
  a.topLeftCorner(n, n) = model.A;
  a.bottomRightCorner(k, k) = reduced.A;
  Matrix b(n + k, m);
  b << model.B, reduced.B;
  Matrix c(m, n + k);
  c << model.C, -reduced.C;
  return StateSpaceModel(a, b, c, model.D - reduced.D);
}

double relative_error(const StateSpaceModel& model, const StateSpaceModel& reduced, double reference_norm,
                      const HinfOptions& opts) {
  const double ref = reference_norm > 0.0 ? reference_norm : hinf_norm_detailed(model, opts).value;
  if (!(ref > 0.0)) throw NumericalError("relative_error: reference model has zero H-infinity norm");
  return hinf_norm_detailed(error_system(model, reduced), opts).value / ref;
}

}  // namespace ppmor
