#include "ppmor/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "json.hpp"
#include "ppmor/benchmarks.hpp"
#include "ppmor/model_io.hpp"
#include "ppmor/numkernel.hpp"

namespace ppmor {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

double abscissa(const Matrix& a) {
  if (a.rows() == 0) return -std::numeric_limits<double>::infinity();
  const CVector lam = eigenvalues(a);
  double best = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < lam.size(); ++i) best = std::max(best, lam(i).real());
  return best;
}

CellResult run_cell(const StateSpaceModel& model, const ZeroRanking& ranking, Index order, double xi,
                    double reference_norm, const SweepConfig& config) {
  CellResult cell;
  cell.order = order;
  cell.xi = xi;
  cell.relative_error = kNaN;
  try {
    const GreedySelection sel = select_from_ranking(ranking, order);
    cell.achieved_order = sel.achieved_order;
    cell.score = sel.score;
    const ReducedModel red = project_shifted(model, xi, ranking.zeros, sel.selection, config.projection);
    cell.accepted = true;
    cell.lmi_margin = red.lmi_margin;
    cell.lmi_scale = red.lmi_scale;
    cell.normalized_radius = red.normalized_radius;
    cell.certificate_min = red.certificate.x_margin;
    cell.asymmetry = red.asymmetry;
    cell.condition = red.condition;
    cell.stability_abscissa = abscissa(red.model.A);
    cell.status = "ok";
    try {
      const InterpolationReport ip = verify_interpolation(model, red);
      cell.interpolation = ip.max_residual;
      cell.repeated_zeros = ip.repeated_zeros;
    } catch (const std::exception& e) {
      cell.interpolation = kNaN;
      cell.status = std::string("interpolation check failed: ") + e.what();
    }
    try {
      cell.relative_error = relative_error(model, red.model, reference_norm, config.hinf);
    } catch (const std::exception& e) {
      cell.status = std::string("error norm failed: ") + e.what();
    }
  } catch (const NotPositiveDefinite& e) {
    cell.status = "X_hat not positive definite (pivot " + std::to_string(e.pivot_index()) + ")";
  } catch (const std::exception& e) {
    cell.status = e.what();
  }
  return cell;
}

}  // namespace

std::string csv_number(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<double> make_xi_grid(double xi_limit, double feedthrough_min, const SweepConfig& config) {
  std::vector<double> grid;
  if (!config.xi_list.empty()) {
    grid = config.xi_list;
    for (double x : grid) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidInput("xi values must be finite and >= 0");
    }
    return grid;
  }
  if (config.xi_points < 1) throw InvalidInput("xi grid needs at least one point");
  if (config.xi_points == 1) return {0.0};
  const double step = xi_limit / (config.xi_points - 1);
  for (int k = 0; k < config.xi_points; ++k) grid.push_back(k == config.xi_points - 1 ? xi_limit : k * step);
  if (config.probe_beyond_xi && step > 0.0) {
    for (int k = config.xi_points;; ++k) {
      const double x = k * step;
      if (x > config.probe_factor * xi_limit * (1.0 + 1e-12) || !(x < feedthrough_min)) break;
      grid.push_back(x);
    }
  }
  return grid;
}

SweepResult run_sweep(const StateSpaceModel& model, const SweepConfig& config) {
  for (Index k : config.orders) {
    if (k < 1 || k >= model.n()) {
      throw InvalidInput("sweep order " + std::to_string(k) + " outside [1, n - 1] with n = " +
                         std::to_string(model.n()));
    }
  }
  const Tolerances& tol = config.projection.tol;
  SweepResult res;
  const StrictPassivityReport sp = is_strictly_passive(model, tol);
  if (!sp.strictly_passive) throw InvalidInput("model is not strictly passive: " + sp.detail);
  res.feedthrough_min = sp.feedthrough_min;
  res.xi_limit = compute_xi_limit(model, tol);
  res.hinf = hinf_norm_detailed(model, config.hinf).value;
  res.xi_grid = make_xi_grid(res.xi_limit, res.feedthrough_min, config);

  const std::size_t nx = res.xi_grid.size();
  const std::size_t no = config.orders.size();
  std::vector<CellResult> by_xi(nx * no);
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= nx) return;
      const double xi = res.xi_grid[i];
      ZeroRanking ranking;
      std::string failure;
      try {
        ranking = rank_spectral_zeros(model, xi, config.projection.normalization, tol);
      } catch (const std::exception& e) {
        failure = e.what();
      }
      for (std::size_t o = 0; o < no; ++o) {
        CellResult cell;
        if (failure.empty()) {
          cell = run_cell(model, ranking, config.orders[o], xi, res.hinf, config);
        } else {
          cell.order = config.orders[o];
          cell.xi = xi;
          cell.relative_error = kNaN;
          cell.status = failure;
        }
        cell.probe = xi > res.xi_limit;
        by_xi[i * no + o] = std::move(cell);
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(nx)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t o = 0; o < no; ++o) {
    OrderSummary s;
    s.order = config.orders[o];
    s.min_error = s.max_error = s.xi0_error = kNaN;
    for (std::size_t i = 0; i < nx; ++i) {
      const CellResult& c = by_xi[i * no + o];
      res.cells.push_back(c);
      ++s.cells;
      if (!c.accepted) continue;
      ++s.accepted;
      s.max_accepted_xi = std::max(s.max_accepted_xi, c.xi);
      if (std::isnan(c.relative_error)) continue;
      if (std::isnan(s.min_error) || c.relative_error < s.min_error) {
        s.min_error = c.relative_error;
        s.best_xi = c.xi;
      }
      if (std::isnan(s.max_error) || c.relative_error > s.max_error) s.max_error = c.relative_error;
      if (c.xi == 0.0) s.xi0_error = c.relative_error;
    }
    res.summary.push_back(s);
  }

  if (config.bounds) {
    res.hankel = hankel_singular_values(model);
    const Vector& sv = res.hankel.values;
    for (std::size_t o = 0; o < no; ++o) {
      const Index k = config.orders[o];
      BoundRow row;
      row.order = k;
      row.hankel_lower = (k < sv.size() ? sv(k) : 0.0) / res.hinf;
      row.best_error = res.summary[o].min_error;
      try {
        const BalancedTruncation bt = balanced_truncation(model, k);
        row.bt_order = bt.order;
        row.bt_bound = bt.error_bound / res.hinf;
        row.warning = bt.warning;
        row.bt_error = relative_error(model, bt.model, res.hinf, config.hinf);
      } catch (const std::exception& e) {
        row.bt_error = kNaN;
        row.warning = e.what();
      }
      res.bounds.push_back(row);
    }
  }
  return res;
}

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << "order,xi,relative_error,accepted,lmi_margin,xi_over_Xi,probe,achieved_order,lmi_scale,normalized_radius,"
        "interpolation_residual,certificate_min,stability_abscissa,condition,asymmetry,score,status\n";
  for (const CellResult& c : r.cells) {
    const bool acc = c.accepted;
    os << c.order << ',' << csv_number(c.xi) << ',' << csv_number(acc ? c.relative_error : kNaN) << ','
       << (acc ? "true" : "false") << ',' << csv_number(acc ? c.lmi_margin : kNaN) << ','
       << csv_number(r.xi_limit > 0 ? c.xi / r.xi_limit : kNaN) << ',' << (c.probe ? "true" : "false") << ','
       << c.achieved_order << ',' << csv_number(acc ? c.lmi_scale : kNaN) << ','
       << csv_number(acc ? c.normalized_radius : kNaN) << ',' << csv_number(acc ? c.interpolation : kNaN) << ','
       << csv_number(acc ? c.certificate_min : kNaN) << ',' << csv_number(acc ? c.stability_abscissa : kNaN) << ','
       << csv_number(acc ? c.condition : kNaN) << ',' << csv_number(acc ? c.asymmetry : kNaN) << ','
       << csv_number(c.score) << ',' << sanitize(c.status) << "\n";
  }
}

void write_summary_csv(std::ostream& os, const SweepResult& r) {
  os << "order,cells,accepted,min_error,max_error,best_xi,xi0_error,max_accepted_xi\n";
  for (const OrderSummary& s : r.summary) {
    os << s.order << ',' << s.cells << ',' << s.accepted << ',' << csv_number(s.min_error) << ','
       << csv_number(s.max_error) << ',' << csv_number(std::isnan(s.min_error) ? kNaN : s.best_xi) << ','
       << csv_number(s.xi0_error) << ',' << csv_number(s.accepted ? s.max_accepted_xi : kNaN) << "\n";
  }
}

void write_bounds_csv(std::ostream& os, const SweepResult& r) {
  os << "order,hankel_lower,best_error,bt_error,bt_bound,bt_order,note\n";
  for (const BoundRow& b : r.bounds) {
    os << b.order << ',' << csv_number(b.hankel_lower) << ',' << csv_number(b.best_error) << ','
       << csv_number(b.bt_error) << ',' << csv_number(b.bt_bound) << ',' << b.bt_order << ',' << sanitize(b.warning)
       << "\n";
  }
}

int run_command(const std::function<int()>& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_generate(const GenerateOptions& opts, std::ostream& out) {
  StateSpaceModel model;
  std::string path = opts.output;
  if (opts.kind == "rlc") {
    model = rlc_ladder(opts.sections, opts.r, opts.l, opts.c);
    if (path.empty()) path = "rlc.json";
    write_model_file(path, model);
  } else if (opts.kind == "random-ph") {
    const PortHamiltonianModel ph = random_ph(opts.n, opts.m, opts.lambda_min, opts.seed);
    model = ph_to_statespace(ph);
    if (path.empty()) path = "random_ph.json";
    write_model_file(path, model, &ph);
  } else {
    throw InvalidInput("unknown benchmark kind '" + opts.kind + "' (expected rlc or random-ph)");
  }
  const StrictPassivityReport sp = is_strictly_passive(model);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", sp.feedthrough_min);
  out << "wrote " << path << "\n"
      << "n = " << model.n() << "\n"
      << "m = " << model.m() << "\n"
      << "strictly passive: " << (sp.strictly_passive ? "yes" : "no") << "\n"
      << "lambda_min(D^T + D) = " << buf << "\n";
  return 0;
}

int cmd_xi(const XiOptions& opts, std::ostream& out) {
  const StateSpaceModel model = read_model_file(opts.model).model;
  const StrictPassivityReport sp = is_strictly_passive(model, opts.tol);
  if (!sp.strictly_passive) throw InvalidInput("model is not strictly passive: " + sp.detail);
  const double xi = compute_xi_limit(model, opts.tol);
  char buf[128];
  std::snprintf(buf, sizeof buf, "Xi = %.6f\n", xi);
  out << buf;
  std::snprintf(buf, sizeof buf, "bracket: (0, %.6f]\n", sp.feedthrough_min);
  out << buf;
  if (opts.grid_points > 0) {
    std::snprintf(buf, sizeof buf, "grid scan (%d points): %.6f\n", opts.grid_points,
                  xi_limit_grid_scan(model, opts.grid_points, opts.tol));
    out << buf;
  }
  return 0;
}

int cmd_reduce(const ReduceOptions& opts, std::ostream& out) {
  const StateSpaceModel model = read_model_file(opts.model).model;
  if (opts.order < 1 || opts.order >= model.n()) {
    throw InvalidInput("order must satisfy 1 <= order < n = " + std::to_string(model.n()));
  }
  const Tolerances& tol = opts.projection.tol;
  const StrictPassivityReport sp = is_strictly_passive(model, tol);
  if (!sp.strictly_passive) throw InvalidInput("model is not strictly passive: " + sp.detail);
  const double xi_limit = compute_xi_limit(model, tol);
  const double xi = opts.xi_fraction >= 0.0 ? opts.xi_fraction * xi_limit : opts.xi;
  if (!(xi >= 0.0)) throw InvalidInput("xi must be >= 0");

  const ReducedModel red = project_shifted(model, xi, opts.order, opts.projection);
  const InterpolationReport ip = verify_interpolation(model, red);
  const double err = relative_error(model, red.model, -1.0, opts.hinf);

  if (!opts.output.empty()) {
    if (red.normalized) {
      const PortHamiltonianModel& ph = red.normalized->ph;
      write_model_file(opts.output, ph_to_statespace(ph), &ph);
    } else {
      write_model_file(opts.output, red.model);
    }
  }

  nlohmann::ordered_json rep;
  rep["order"] = red.model.n();
  rep["requested_order"] = opts.order;
  rep["xi"] = xi;
  rep["Xi"] = xi_limit;
  rep["relative_error"] = err;
  rep["interpolation_residual"] = ip.max_residual;
  rep["repeated_zeros"] = ip.repeated_zeros;
  rep["lmi_margin"] = red.lmi_margin;
  rep["lmi_scale"] = red.lmi_scale;
  rep["radius_lower_bound"] = red.radius_lower_bound;
  rep["normalized_radius"] = red.normalized_radius;
  rep["certificate_min"] = red.certificate.x_margin;
  rep["condition"] = red.condition;
  if (!red.normalized) rep["normalization_failure"] = red.normalization_failure;
  nlohmann::ordered_json zeros = nlohmann::ordered_json::array();
  for (Index i = 0; i < red.basis.zero_list.size(); ++i) {
    zeros.push_back({red.basis.zero_list(i).real(), red.basis.zero_list(i).imag()});
  }
  rep["selected_zeros"] = zeros;
  const std::string text = rep.dump(2) + "\n";
  if (!opts.report.empty()) {
    std::ofstream f(opts.report);
    if (!f) throw InvalidInput("cannot write report " + opts.report);
    f << text;
  } else {
    out << text;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "order %lld, xi = %.6g, relative error %.6e, LMI margin %.3e\n",
                static_cast<long long>(red.model.n()), xi, err, red.lmi_margin);
  out << buf;
  if (!red.normalized) out << "warning: no normalized realization (" << red.normalization_failure << ")\n";
  return 0;
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out) {
  const StateSpaceModel model = read_model_file(opts.model).model;
  SweepConfig config = opts.config;
  if (config.orders.empty()) throw InvalidInput("sweep needs at least one order");
  const SweepResult res = run_sweep(model, config);
  std::filesystem::create_directories(opts.output_dir);
  const auto write = [&](const char* name, void (*fn)(std::ostream&, const SweepResult&)) {
    const std::string path = (std::filesystem::path(opts.output_dir) / name).string();
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot write " + path);
    fn(f, res);
  };
  write("sweep.csv", write_sweep_csv);
  write("summary.csv", write_summary_csv);
  if (config.bounds) write("bounds.csv", write_bounds_csv);
  std::size_t accepted = 0;
  for (const CellResult& c : res.cells) accepted += c.accepted ? 1 : 0;
  char buf[256];
  std::snprintf(buf, sizeof buf, "Xi = %.6f, ||Z||_inf = %.6g, %zu of %zu cells accepted\n", res.xi_limit, res.hinf,
                accepted, res.cells.size());
  out << buf;
  return 0;
}

int cmd_sigma(const SigmaOptions& opts, std::ostream& out) {
  const StateSpaceModel model = read_model_file(opts.model).model;
  std::filesystem::create_directories(opts.output_dir);
  const auto dump = [&](const StateSpaceModel& m, const char* name) {
    const std::string path = (std::filesystem::path(opts.output_dir) / name).string();
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot write " + path);
    write_sigma_csv(f, sigma_sample(m, opts.w_min, opts.w_max, opts.points));
    out << "wrote " << path << "\n";
  };
  dump(model, "sigma.csv");
  if (!opts.model2.empty()) {
    const StateSpaceModel other = read_model_file(opts.model2).model;
    const StateSpaceModel err = error_system(model, other);
    dump(err, "error_sigma.csv");
    char buf[128];
    std::snprintf(buf, sizeof buf, "||Z1 - Z2||_inf = %.9g\n", hinf_norm(err));
    out << buf;
  }
  return 0;
}

}  // namespace ppmor
