#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "padisno/errors.hpp"
#include "padisno/experiments.hpp"

namespace padisno::cli {

namespace fs = std::filesystem;
namespace ex = padisno::experiments;

namespace {

struct Overrides {
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
};

ex::ExperimentConfig resolve(const Overrides& o) {
  ex::ExperimentConfig c = o.config_path.empty() ? ex::ExperimentConfig{} : ex::load_config(o.config_path);
  if (!o.output_dir.empty()) c.output_dir = o.output_dir;
  if (o.seed) c.seed = *o.seed;
  return c;
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  }
}

int cmd_solve(const Overrides& o, std::ostream& out) {
  const ex::ExperimentConfig c = resolve(o);
  const ex::SolverSetup setup = ex::make_setup(c);
  const Trajectory traj = run(setup.x0, setup.config, setup.objective);
  const auto cert = diagnostics::check_descent(traj, setup.objective);
  make_dir(c.output_dir);
  const fs::path csv = fs::path(c.output_dir) / "trajectory.csv";
  ex::write_trajectory_csv(csv, traj, cert);
  out << "problem " << ex::to_string(c.problem) << ", " << to_string(setup.config.variant) << ", s = "
      << ex::format_double(setup.config.step_size) << '\n'
      << "termination " << to_string(traj.termination) << " after " << traj.back().n << " iterations\n"
      << "final fg_value " << ex::format_double(traj.back().fg_value) << '\n'
      << "descent violations " << cert.violations.size() << " (burn-in N = " << cert.burn_in_N << ")\n"
      << "wrote " << csv.string() << '\n';
  return traj.termination == Termination::MaxIters ? kNotConverged : kOk;
}

int cmd_fig1(const std::string& output_dir, double tol, int max_iters, unsigned threads, std::ostream& out) {
  const auto cells = ex::run_fig1(tol, max_iters, threads);
  ex::write_fig1(output_dir, cells);
  bool all = true;
  out << "alpha,beta,iters_to_tol,stayed_in_D,descent_violations\n";
  for (const auto& cell : cells) {
    all = all && cell.iters_to_tol.has_value();
    out << (cell.fista_reference ? "fista " : "") << cell.alpha << ',' << cell.beta << ','
        << (cell.iters_to_tol ? std::to_string(*cell.iters_to_tol) : std::string("-")) << ','
        << (cell.stayed_in_D ? "true" : "false") << ',' << cell.descent_violations << '\n';
  }
  out << "wrote " << cells.size() << " trajectories and summary.csv to " << output_dir << '\n';
  return all ? kOk : kNotConverged;
}

int cmd_restore(const Overrides& o, bool table, std::ostream& out) {
  const ex::ExperimentConfig c = resolve(o);
  const imaging::Image original =
      c.input_image ? imaging::pgm_read(*c.input_image) : imaging::synthetic_image(imaging::Pattern::Composite, 64);
  ex::RestoreOptions opts;
  opts.alpha = c.alpha;
  opts.beta = c.beta;
  opts.step_override = c.step_override;
  opts.allow_unsafe_step = c.allow_unsafe_step;
  opts.iterations = c.max_iters.value_or(ex::kRestoreIters);
  opts.seed = c.seed;
  const imaging::Image observed = ex::make_observation(original, opts);
  const fs::path dir = c.output_dir;
  make_dir(dir);

  if (table) {
    const std::pair<double, double> pairs[] = {{0.0, 0.0}, {-0.4, -2.5}, {-0.4, 2.5}, {0.4, -2.5}, {0.4, 2.5}};
    std::ofstream csv(dir / "table.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + (dir / "table.csv").string());
    csv << "alpha,beta,step,isnr\n";
    out << "alpha beta isnr(" << opts.iterations << ")\n";
    for (const auto& [a, b] : pairs) {
      ex::RestoreOptions run_opts = opts;
      run_opts.alpha = a;
      run_opts.beta = b;
      run_opts.step_override.reset();
      const ex::RestoreResult r = ex::run_restore(original, observed, run_opts);
      csv << ex::format_double(a) << ',' << ex::format_double(b) << ',' << ex::format_double(r.step) << ','
          << ex::format_double(r.isnr.back()) << '\n';
      out << a << ' ' << b << ' ' << r.isnr.back() << '\n';
    }
    out << "wrote " << (dir / "table.csv").string() << '\n';
    return kOk;
  }

  const ex::RestoreResult r = ex::run_restore(original, observed, opts);
  ex::write_isnr_csv(dir / "isnr.csv", r.isnr);
  imaging::pgm_write(r.observed, dir / "observed.pgm");
  imaging::pgm_write(r.estimate, dir / "restored.pgm");
  out << "alpha " << opts.alpha << ", beta " << opts.beta << ", s = " << ex::format_double(r.step) << '\n'
      << "isnr(" << opts.iterations << ") = " << r.isnr.back() << " dB\n"
      << "wrote isnr.csv, observed.pgm, restored.pgm to " << dir.string() << '\n';
  return kOk;
}

int cmd_rates(const std::string& csv, double target, int first_index, std::ostream& out) {
  const auto report = ex::rates_from_csv(csv, target, first_index);
  out << ex::to_json(report).dump(2) << '\n';
  return kOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inertial forward-backward solvers and experiments"};
  app.require_subcommand(1);

  Overrides solve_o;
  auto* solve = app.add_subcommand("solve", "Run one configured problem and write trajectory.csv");
  solve->add_option("--config", solve_o.config_path, "JSON run configuration")->required();
  solve->add_option("--output-dir", solve_o.output_dir, "Overrides output_dir");
  solve->add_option("--seed", solve_o.seed, "Overrides seed");

  std::string fig1_dir = "fig1";
  double fig1_tol = 1e-12;
  int fig1_iters = 50000;
  unsigned fig1_threads = 0;
  auto* fig1 = app.add_subcommand("fig1", "Toy problem over the alpha x beta grid");
  fig1->add_option("--output-dir", fig1_dir, "Directory for per-cell CSVs and summary.csv");
  fig1->add_option("--tol", fig1_tol, "Distance to the minimizer counted as converged")->check(CLI::PositiveNumber);
  fig1->add_option("--max-iters", fig1_iters, "Iteration cap per cell")->check(CLI::NonNegativeNumber);
  fig1->add_option("--threads", fig1_threads, "Worker threads (0 = hardware concurrency)");

  Overrides restore_o;
  bool restore_table = false;
  auto* restore = app.add_subcommand("restore", "Deblur and denoise an image with the wavelet l0 model");
  restore->add_option("--config", restore_o.config_path, "JSON run configuration");
  restore->add_option("--output-dir", restore_o.output_dir, "Overrides output_dir");
  restore->add_option("--seed", restore_o.seed, "Overrides seed");
  restore->add_flag("--table", restore_table, "Run the five reference (alpha, beta) pairs and write table.csv");

  std::string rates_csv;
  double rates_target = 0.0;
  int rates_first = 1;
  auto* rates = app.add_subcommand("rates", "Classify the convergence rate of a trajectory CSV");
  rates->add_option("--csv", rates_csv, "trajectory.csv from solve")->required();
  rates->add_option("--target", rates_target, "Reference objective value");
  rates->add_option("--first-index", rates_first, "First iteration used in the fit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve) return cmd_solve(solve_o, out);
    if (*fig1) return cmd_fig1(fig1_dir, fig1_tol, fig1_iters, fig1_threads, out);
    if (*restore) return cmd_restore(restore_o, restore_table, out);
    if (*rates) return cmd_rates(rates_csv, rates_target, rates_first, out);
  } catch (const StepSizeError& e) {
    err << "error: " << e.what() << '\n';
    return kStepGate;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const OracleError& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  }
  return kUsage;
}

}  // namespace padisno::cli
