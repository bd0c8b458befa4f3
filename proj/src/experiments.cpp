#include "padisno/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "padisno/errors.hpp"

namespace padisno::experiments {

using nlohmann::json;

std::string_view to_string(Problem p) {
  switch (p) {
    case Problem::Toy2d: return "toy2d";
    case Problem::Restore: return "restore";
    case Problem::StronglyConvex: return "strongly_convex";
  }
  return "unknown";
}

Problem problem_from_string(std::string_view s) {
  if (s == "toy2d") return Problem::Toy2d;
  if (s == "restore") return Problem::Restore;
  if (s == "strongly_convex") return Problem::StronglyConvex;
  throw ParameterError("unknown problem '" + std::string(s) + "'");
}

namespace {

const char* const kConfigKeys[] = {"problem",  "variant", "alpha", "beta",        "step_override", "allow_unsafe_step",
                                   "max_iters", "tol",    "seed",  "input_image", "output_dir"};

template <class T>
T get_as(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config key '") + key + "': " + e.what());
  }
}

double get_number(const json& doc, const char* key) {
  if (!doc.at(key).is_number()) {
    throw ParameterError(std::string("config key '") + key + "' must be a number");
  }
  return doc.at(key).get<double>();
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw ParameterError("config must be a JSON object");
  }
  for (const auto& item : doc.items()) {
    const bool known =
        std::find(std::begin(kConfigKeys), std::end(kConfigKeys), item.key()) != std::end(kConfigKeys);
    if (!known) {
      throw ParameterError("unknown config key '" + item.key() + "'");
    }
  }
  ExperimentConfig c;
  if (doc.contains("problem")) c.problem = problem_from_string(get_as<std::string>(doc, "problem"));
  if (doc.contains("variant") && !doc["variant"].is_null()) {
    c.variant = variant_from_string(get_as<std::string>(doc, "variant"));
  }
  if (doc.contains("alpha")) c.alpha = get_number(doc, "alpha");
  if (doc.contains("beta")) c.beta = get_number(doc, "beta");
  if (doc.contains("step_override") && !doc["step_override"].is_null()) {
    c.step_override = get_number(doc, "step_override");
  }
  if (doc.contains("allow_unsafe_step")) {
    if (!doc["allow_unsafe_step"].is_boolean()) {
      throw ParameterError("config key 'allow_unsafe_step' must be a boolean");
    }
    c.allow_unsafe_step = doc["allow_unsafe_step"].get<bool>();
  }
  if (doc.contains("max_iters") && !doc["max_iters"].is_null()) {
    if (!doc["max_iters"].is_number_integer()) {
      throw ParameterError("config key 'max_iters' must be an integer");
    }
    c.max_iters = doc["max_iters"].get<int>();
  }
  if (doc.contains("tol")) c.tol = get_number(doc, "tol");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw ParameterError("config key 'seed' must be a nonnegative integer");
    }
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("input_image") && !doc["input_image"].is_null()) {
    c.input_image = get_as<std::string>(doc, "input_image");
  }
  if (doc.contains("output_dir")) c.output_dir = get_as<std::string>(doc, "output_dir");
  return c;
}

json to_json(const ExperimentConfig& c) {
  json doc;
  doc["problem"] = std::string(to_string(c.problem));
  doc["variant"] = c.variant ? json(std::string(to_string(*c.variant))) : json(nullptr);
  doc["alpha"] = c.alpha;
  doc["beta"] = c.beta;
  doc["step_override"] = c.step_override ? json(*c.step_override) : json(nullptr);
  doc["allow_unsafe_step"] = c.allow_unsafe_step;
  doc["max_iters"] = c.max_iters ? json(*c.max_iters) : json(nullptr);
  doc["tol"] = c.tol;
  doc["seed"] = c.seed;
  doc["input_image"] = c.input_image ? json(*c.input_image) : json(nullptr);
  doc["output_dir"] = c.output_dir;
  return doc;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("malformed config JSON: ") + e.what());
  }
  return config_from_json(doc);
}

Vector toy_start() {
  Vector x(2);
  x << 0.5, -0.5;
  return x;
}

double toy_step(double alpha, double beta) { return kToyStepScale * (1.0 - std::abs(alpha)) / (2.0 * std::abs(beta) + 1.0); }

double restore_step(double alpha, double beta) {
  return 0.999 * max_step_size(Variant::Padisno, false, alpha, beta, kRestoreLipschitz);
}

namespace {

imaging::Image load_or_synthesize(const ExperimentConfig& c) {
  if (c.input_image) {
    return imaging::pgm_read(*c.input_image);
  }
  return imaging::synthetic_image(imaging::Pattern::Composite, 64);
}

CompositeObjective restore_objective(const imaging::Image& observed, const RestoreOptions& o) {
  const imaging::HaarTransform wavelet(observed.rows, observed.cols, 4);
  const imaging::BlurOperator blur = o.blur ? imaging::BlurOperator::gaussian(observed.rows, observed.cols)
                                            : imaging::BlurOperator::identity(observed.rows, observed.cols);
  return CompositeObjective{oracles::wavelet_l0(o.lambda, wavelet), make_log_misfit(blur, observed.pixels),
                            std::nullopt};
}

SolverConfig restore_solver_config(const RestoreOptions& o) {
  SolverConfig cfg;
  cfg.variant = Variant::Padisno;
  cfg.schedule = InertialSchedule::constant(o.alpha, o.beta);
  cfg.allow_unsafe_step = o.allow_unsafe_step;
  cfg.step_size = o.step_override ? *o.step_override : restore_step(o.alpha, o.beta);
  cfg.max_iters = o.iterations;
  cfg.tol_displacement = 0.0;
  return cfg;
}

RestoreOptions restore_options(const ExperimentConfig& c) {
  RestoreOptions o;
  o.alpha = c.alpha;
  o.beta = c.beta;
  o.step_override = c.step_override;
  o.allow_unsafe_step = c.allow_unsafe_step;
  o.iterations = c.max_iters.value_or(kRestoreIters);
  o.seed = c.seed;
  return o;
}

}  // namespace

SolverSetup make_setup(const ExperimentConfig& c) {
  SolverSetup setup;
  SolverConfig& cfg = setup.config;
  cfg.allow_unsafe_step = c.allow_unsafe_step;
  cfg.tol_displacement = c.tol;
  switch (c.problem) {
    case Problem::Toy2d: {
      setup.objective = make_toy2d();
      setup.x0 = toy_start();
      cfg.variant = c.variant.value_or(Variant::CPadisno);
      cfg.schedule = InertialSchedule::ramped(c.alpha, c.beta);
      cfg.step_size = c.step_override.value_or(toy_step(c.alpha, c.beta));
      cfg.max_iters = c.max_iters.value_or(50000);
      break;
    }
    case Problem::StronglyConvex: {
      setup.objective = make_strongly_convex_test(kStronglyConvexDim, kStronglyConvexMu);
      setup.x0 = Vector::Zero(kStronglyConvexDim);
      cfg.variant = c.variant.value_or(Variant::CPadisno);
      cfg.schedule = InertialSchedule::constant(c.alpha, c.beta);
      if (c.step_override) {
        cfg.step_size = *c.step_override;
      } else {
        cfg.step_size =
            0.5 * max_step_size(cfg.variant, false, c.alpha, c.beta, setup.objective.smooth.lipschitz);
      }
      cfg.max_iters = c.max_iters.value_or(50000);
      break;
    }
    case Problem::Restore: {
      const RestoreOptions o = restore_options(c);
      const imaging::Image original = load_or_synthesize(c);
      const imaging::Image observed = make_observation(original, o);
      setup.objective = restore_objective(observed, o);
      setup.x0 = observed.pixels;
      cfg = restore_solver_config(o);
      if (c.variant) {
        cfg.variant = *c.variant;
      }
      cfg.tol_displacement = c.tol;
      break;
    }
  }
  if (setup.objective.known_minimum) {
    cfg.target_value = setup.objective.known_minimum->value;
  }
  return setup;
}

// ---------------------------------------------------------------- CSV

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const diagnostics::DescentCertificate& cert) {
  if (traj.records.empty()) {
    throw ParameterError("cannot write an empty trajectory");
  }
  const Eigen::Index dim = traj.records.front().x.size();
  out << "n";
  for (Eigen::Index i = 1; i <= dim; ++i) {
    out << ",x" << i;
  }
  out << ",fg_value,displacement,delta_n,lyapunov\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const IterateRecord& r = traj.records[k];
    out << r.n;
    for (Eigen::Index i = 0; i < dim; ++i) {
      out << ',' << format_double(r.x[i]);
    }
    out << ',' << format_double(r.fg_value) << ',' << format_double(r.displacement) << ','
        << format_double(cert.delta_seq[k]) << ',' << format_double(cert.lyapunov_seq[k]) << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          const diagnostics::DescentCertificate& cert) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  write_trajectory_csv(out, traj, cert);
}

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw FormatError("CSV has no column '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError("CSV is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != table.header.size()) {
      throw FormatError("CSV line " + std::to_string(lineno) + " has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(table.header.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size()) {
        throw FormatError("CSV line " + std::to_string(lineno) + ": '" + f + "' is not a number");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return read_csv(in);
}

// ---------------------------------------------------------------- fig1

std::vector<double> fig1_alphas() { return {-0.9, -0.5, 0.0, 0.5, 0.6, 0.9}; }

std::vector<double> fig1_betas() {
  return {-2.0, -1.5, -1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
}

Fig1Cell run_fig1_cell(double alpha, double beta, double step, bool allow_unsafe, double tol, int max_iters) {
  const CompositeObjective objective = make_toy2d();
  SolverConfig cfg;
  cfg.variant = Variant::CPadisno;
  cfg.schedule = InertialSchedule::ramped(alpha, beta);
  cfg.step_size = step;
  cfg.allow_unsafe_step = allow_unsafe;
  cfg.max_iters = max_iters;
  cfg.tol_displacement = 0.0;
  cfg.target_value = 0.0;
  cfg.tol_objective = 0.25 * tol * tol;

  Fig1Cell cell;
  cell.alpha = alpha;
  cell.beta = beta;
  cell.step = step;
  cell.trajectory = run(toy_start(), cfg, objective);
  cell.certificate = diagnostics::check_descent(cell.trajectory, objective);
  cell.descent_violations = cell.certificate.violations.size();

  const Box& domain = *objective.smooth.domain_box;
  for (const IterateRecord& r : cell.trajectory.records) {
    const double err = (r.x - objective.known_minimum->point).norm();
    if (!cell.iters_to_tol && err < tol) {
      cell.iters_to_tol = r.n;
    }
    cell.stayed_in_D = cell.stayed_in_D && domain.contains_strictly(r.x);
  }
  cell.final_error = (cell.trajectory.back().x - objective.known_minimum->point).norm();
  return cell;
}

std::vector<Fig1Cell> run_fig1(double tol, int max_iters, unsigned threads) {
  struct Job {
    double alpha;
    double beta;
    double step;
    bool fista;
  };
  std::vector<Job> jobs;
  for (double a : fig1_alphas()) {
    for (double b : fig1_betas()) {
      jobs.push_back({a, b, toy_step(a, b), false});
    }
  }
  jobs.push_back({1.0, 1.0, 1.0 / 14.0, true});

  std::vector<Fig1Cell> cells(jobs.size());
  std::vector<std::exception_ptr> failures(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        cells[i] = run_fig1_cell(jobs[i].alpha, jobs[i].beta, jobs[i].step, jobs[i].fista, tol, max_iters);
        cells[i].fista_reference = jobs[i].fista;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool) {
    t.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return cells;
}

std::string fig1_cell_filename(const Fig1Cell& cell) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%scell_a%g_b%g.csv", cell.fista_reference ? "fista_" : "", cell.alpha, cell.beta);
  return buf;
}

void write_fig1(const std::filesystem::path& dir, const std::vector<Fig1Cell>& cells) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  }
  for (const Fig1Cell& cell : cells) {
    write_trajectory_csv(dir / fig1_cell_filename(cell), cell.trajectory, cell.certificate);
  }
  std::ofstream out(dir / "summary.csv", std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + (dir / "summary.csv").string());
  }
  out << "alpha,beta,iters_to_tol,final_error,stayed_in_D,descent_violations\n";
  for (const Fig1Cell& cell : cells) {
    out << format_double(cell.alpha) << ',' << format_double(cell.beta) << ','
        << (cell.iters_to_tol ? std::to_string(*cell.iters_to_tol) : std::string("-1")) << ','
        << format_double(cell.final_error) << ',' << (cell.stayed_in_D ? "true" : "false") << ','
        << cell.descent_violations << '\n';
  }
}

// ---------------------------------------------------------------- restore

imaging::Image make_observation(const imaging::Image& original, const RestoreOptions& o) {
  imaging::HaarTransform(original.rows, original.cols, 4);  // dimension check
  imaging::Image b = o.blur ? imaging::BlurOperator::gaussian(original.rows, original.cols).apply(original) : original;
  b = imaging::add_gaussian_noise(b, o.gaussian_sigma, o.seed);
  return imaging::add_salt_pepper(b, o.salt_pepper_density, o.seed + 1);
}

RestoreResult run_restore(const imaging::Image& original, const imaging::Image& observed, const RestoreOptions& o) {
  if (original.rows != observed.rows || original.cols != observed.cols) {
    throw ParameterError("restore: original and observation differ in size");
  }
  const CompositeObjective objective = restore_objective(observed, o);
  const SolverConfig cfg = restore_solver_config(o);
  const Trajectory traj = run(observed.pixels, cfg, objective);

  RestoreResult result;
  result.original = original;
  result.observed = observed;
  result.estimate = imaging::Image(original.rows, original.cols, traj.back().x);
  result.termination = traj.termination;
  result.step = cfg.step_size;
  result.isnr.reserve(traj.size());
  for (const IterateRecord& r : traj.records) {
    result.isnr.push_back(imaging::isnr(original, observed, imaging::Image(original.rows, original.cols, r.x)));
  }
  return result;
}

RestoreResult run_restore(const imaging::Image& original, const RestoreOptions& o) {
  return run_restore(original, make_observation(original, o), o);
}

void write_isnr_csv(const std::filesystem::path& path, const std::vector<double>& isnr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "n,isnr\n";
  for (std::size_t n = 0; n < isnr.size(); ++n) {
    out << n << ',' << format_double(isnr[n]) << '\n';
  }
}

// ---------------------------------------------------------------- rates

diagnostics::RateReport rates_from_csv(const std::filesystem::path& path, double target, int first_index) {
  if (!std::isfinite(target)) {
    throw ParameterError("target value must be finite");
  }
  const CsvTable table = read_csv(path);
  const std::size_t n_col = table.column("n");
  const std::size_t fg_col = table.column("fg_value");
  std::vector<double> errors;
  int first = -1;
  for (const auto& row : table.rows) {
    const int n = static_cast<int>(row[n_col]);
    if (n < first_index) continue;
    if (first < 0) first = n;
    const double e = row[fg_col] - target;
    if (!(e >= 0.0)) {
      throw DataError("fg_value - target is negative at n = " + std::to_string(n));
    }
    errors.push_back(e);
  }
  if (first < 0) {
    throw DataError("no rows at or after the requested first index");
  }
  try {
    return diagnostics::fit_rate(errors, first);
  } catch (const ParameterError& e) {
    throw DataError(e.what());
  }
}

json to_json(const diagnostics::RateReport& r) {
  json doc;
  doc["regime"] = std::string(diagnostics::to_string(r.regime));
  doc["fitted_Q"] = r.fitted_Q ? json(*r.fitted_Q) : json(nullptr);
  doc["fitted_theta"] = r.fitted_theta ? json(*r.fitted_theta) : json(nullptr);
  doc["fit_residual"] = r.fit_residual;
  doc["linear_residual"] = r.linear_residual;
  doc["sublinear_residual"] = r.sublinear_residual;
  return doc;
}

}  // namespace padisno::experiments
