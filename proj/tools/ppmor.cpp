// ppmor: passivity-preserving model reduction from the command line.

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ppmor/cli.hpp"

namespace {

std::string in_dir(const std::string& dir, const std::string& path, const std::string& fallback) {
  const std::string p = path.empty() ? fallback : path;
  if (std::filesystem::path(p).is_absolute() || dir.empty()) return p;
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / p).string();
}

std::vector<long long> split_integers(const std::string& spec, char sep) {
  std::vector<long long> out;
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, sep)) {
    std::size_t used = 0;
    try {
      out.push_back(std::stoll(tok, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw ppmor::InvalidInput("bad integer '" + tok + "' in '" + spec + "'");
  }
  return out;
}

// "2,4,6" or "first:last[:step]"
std::vector<ppmor::Index> parse_orders(const std::string& spec) {
  std::vector<ppmor::Index> out;
  if (spec.find(':') == std::string::npos) {
    for (long long k : split_integers(spec, ',')) out.push_back(k);
    return out;
  }
  const std::vector<long long> r = split_integers(spec, ':');
  if (r.size() < 2 || r.size() > 3 || (r.size() == 3 && r[2] < 1) || r[1] < r[0]) {
    throw ppmor::InvalidInput("bad order range '" + spec + "'");
  }
  const long long step = r.size() == 3 ? r[2] : 1;
  for (long long k = r[0]; k <= r[1]; k += step) out.push_back(k);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Passivity-preserving model order reduction by shifted spectral-zero interpolation"};
  app.require_subcommand(1);
  app.fallthrough();

  ppmor::Tolerances tol = ppmor::default_tolerances();
  int jobs = 1;
  std::string output_dir;
  std::uint64_t seed = 7;
  app.add_option("--tol-psd", tol.psd, "relative PSD band for certificate checks");
  app.add_option("--tol-lmi", tol.lmi, "accepted LMI band for reduced models");
  app.add_option("--tol-condition", tol.max_condition, "largest accepted cond(U^T V)");
  app.add_option("--tol-xi", tol.xi_abs, "absolute bisection tolerance for Xi");
  app.add_option("--tol-imaginary", tol.imaginary, "relative band for imaginary-axis spectral zeros");
  app.add_option("--tol-stability", tol.stability, "relative stability margin");
  app.add_option("--jobs", jobs, "worker threads for the sweep")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", output_dir, "directory for generated files");
  app.add_option("--seed", seed, "seed for random benchmarks");

  ppmor::GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "write a benchmark model file");
  generate->add_option("kind", gen.kind, "rlc | random-ph")->required()->check(CLI::IsMember({"rlc", "random-ph"}));
  generate->add_option("--sections", gen.sections, "RLC sections (n = 2 * sections)");
  generate->add_option("--R", gen.r, "RLC resistance");
  generate->add_option("--L", gen.l, "RLC inductance");
  generate->add_option("--C", gen.c, "RLC capacitance");
  generate->add_option("--n", gen.n, "random-ph state dimension");
  generate->add_option("--m", gen.m, "random-ph port count");
  generate->add_option("--lambda-min", gen.lambda_min, "smallest eigenvalue of the dissipation block");
  generate->add_option("-o,--output", gen.output, "model file");

  ppmor::XiOptions xo;
  auto* xi = app.add_subcommand("xi", "compute the shift limit Xi");
  xi->add_option("model", xo.model, "model file")->required();
  xi->add_option("--grid", xo.grid_points, "grid-scan cross-check points (0 disables)");

  ppmor::ReduceOptions ro;
  auto* reduce = app.add_subcommand("reduce", "reduce one model at one shift");
  reduce->add_option("model", ro.model, "model file")->required();
  reduce->add_option("--order", ro.order, "reduced order")->required();
  auto* xi_opt = reduce->add_option("--xi", ro.xi, "shift");
  reduce->add_option("--xi-fraction", ro.xi_fraction, "shift as a fraction of Xi")->excludes(xi_opt);
  reduce->add_option("-o,--output", ro.output, "reduced model file");
  reduce->add_option("--report", ro.report, "JSON report file");

  ppmor::SweepOptions so;
  std::string orders = "2:20:2";
  std::vector<double> xi_list;
  auto* sweep = app.add_subcommand("sweep", "reduce over a grid of orders and shifts");
  sweep->add_option("model", so.model, "model file")->required();
  sweep->add_option("--orders", orders, "list '2,4,6' or range 'first:last:step'");
  sweep->add_option("--xi-points", so.config.xi_points, "equidistant shifts over [0, Xi]");
  sweep->add_option("--xi", xi_list, "explicit shifts (overrides --xi-points)")->delimiter(',');
  sweep->add_flag("--probe-beyond-xi", so.config.probe_beyond_xi, "continue the grid past Xi");
  sweep->add_option("--probe-factor", so.config.probe_factor, "probe up to this multiple of Xi");
  sweep->add_flag("!--no-bounds", so.config.bounds, "skip the balanced-truncation reference table");

  ppmor::SigmaOptions sg;
  auto* sigma = app.add_subcommand("sigma", "singular value plot (and error plot for two models)");
  sigma->add_option("model", sg.model, "model file")->required();
  sigma->add_option("model2", sg.model2, "second model; adds the error-system plot");
  sigma->add_option("--w-min", sg.w_min, "lowest frequency");
  sigma->add_option("--w-max", sg.w_max, "highest frequency");
  sigma->add_option("--points", sg.points, "log-spaced samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  return ppmor::run_command(
      [&]() -> int {
        if (*generate) {
          gen.seed = seed;
          gen.output = in_dir(output_dir, gen.output, gen.kind == "rlc" ? "rlc.json" : "random_ph.json");
          return ppmor::cmd_generate(gen, std::cout);
        }
        if (*xi) {
          xo.tol = tol;
          return ppmor::cmd_xi(xo, std::cout);
        }
        if (*reduce) {
          ro.projection.tol = tol;
          if (!ro.output.empty()) ro.output = in_dir(output_dir, ro.output, ro.output);
          if (!ro.report.empty()) ro.report = in_dir(output_dir, ro.report, ro.report);
          return ppmor::cmd_reduce(ro, std::cout);
        }
        if (*sweep) {
          so.config.orders = parse_orders(orders);
          so.config.xi_list = xi_list;
          so.config.jobs = jobs;
          so.config.projection.tol = tol;
          so.output_dir = output_dir.empty() ? "." : output_dir;
          return ppmor::cmd_sweep(so, std::cout);
        }
        sg.output_dir = output_dir.empty() ? "." : output_dir;
        return ppmor::cmd_sigma(sg, std::cout);
      },
      std::cerr);
}
