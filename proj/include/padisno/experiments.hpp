#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "padisno/diagnostics.hpp"
#include "padisno/imaging.hpp"
#include "padisno/problems.hpp"
#include "padisno/solver.hpp"

namespace padisno::experiments {

enum class Problem { Toy2d, Restore, StronglyConvex };

std::string_view to_string(Problem p);
Problem problem_from_string(std::string_view s);

/// JSON-serializable run description. Optional fields fall back to the
/// per-problem defaults documented in the README.
struct ExperimentConfig {
  Problem problem = Problem::Toy2d;
  std::optional<Variant> variant;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> step_override;
  bool allow_unsafe_step = false;
  std::optional<int> max_iters;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  std::optional<std::string> input_image;
  std::string output_dir = ".";

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ParameterError on unknown keys or ill-typed values.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

// Toy problem defaults.
inline constexpr double kToyStepScale = 7.0 / 50.0;
Vector toy_start();
/// (7/50) (1 - |alpha|) / (2 |beta| + 1)
double toy_step(double alpha, double beta);

// Restoration defaults.
inline constexpr double kRestoreLambda = 1e-5;
inline constexpr double kRestoreLipschitz = 2.0;
inline constexpr double kRestoreGaussianSigma = 1e-3;
inline constexpr double kRestoreSaltPepper = 0.3;
inline constexpr int kRestoreIters = 300;
/// 0.999 times the padisno bound with L = 2.
double restore_step(double alpha, double beta);

// Strongly convex test defaults.
inline constexpr int kStronglyConvexDim = 8;
inline constexpr double kStronglyConvexMu = 0.05;

/// Everything needed to call solver::run.
struct SolverSetup {
  CompositeObjective objective;
  Vector x0;
  SolverConfig config;
};

/// Builds the objective, start point and solver config for any problem. For
/// Restore the observation is synthesized from the seed.
SolverSetup make_setup(const ExperimentConfig& config);

// ---------------------------------------------------------------- CSV

std::string format_double(double v);

/// Header n,x1..xm,fg_value,displacement,delta_n,lyapunov; LF line endings.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const diagnostics::DescentCertificate& cert);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          const diagnostics::DescentCertificate& cert);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------- fig1

std::vector<double> fig1_alphas();
std::vector<double> fig1_betas();

struct Fig1Cell {
  double alpha = 0.0;
  double beta = 0.0;
  double step = 0.0;
  bool fista_reference = false;
  Trajectory trajectory;
  diagnostics::DescentCertificate certificate;
  /// First n with |x_n - x*| < tol, if reached.
  std::optional<int> iters_to_tol;
  double final_error = 0.0;
  bool stayed_in_D = true;
  std::size_t descent_violations = 0;
};

/// One c-padisno run on the toy problem with ramped inertia and stopping on
/// (f+g)(x_n) < tol^2 / 4, which implies |x_n| < tol near the origin.
Fig1Cell run_fig1_cell(double alpha, double beta, double step, bool allow_unsafe, double tol = 1e-12,
                       int max_iters = 50000);

/// The full alpha x beta grid plus the FISTA-like reference (alpha = beta = 1,
/// s = 1/14, unsafe override). Cells run on worker threads; order is fixed.
std::vector<Fig1Cell> run_fig1(double tol = 1e-12, int max_iters = 50000, unsigned threads = 0);

std::string fig1_cell_filename(const Fig1Cell& cell);
/// Writes one trajectory CSV per cell and summary.csv.
void write_fig1(const std::filesystem::path& dir, const std::vector<Fig1Cell>& cells);

// ---------------------------------------------------------------- restore

struct RestoreOptions {
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> step_override;
  bool allow_unsafe_step = false;
  int iterations = kRestoreIters;
  double lambda = kRestoreLambda;
  bool blur = true;
  double gaussian_sigma = kRestoreGaussianSigma;
  double salt_pepper_density = kRestoreSaltPepper;
  std::uint64_t seed = 0;
};

/// Blur, then Gaussian noise (seed), then salt-and-pepper (seed + 1).
imaging::Image make_observation(const imaging::Image& original, const RestoreOptions& options);

struct RestoreResult {
  imaging::Image original;
  imaging::Image observed;
  imaging::Image estimate;
  /// ISNR of x_n for n = 0..iterations (x_0 is the observation, so entry 0 is 0 dB).
  std::vector<double> isnr;
  Termination termination = Termination::MaxIters;
  double step = 0.0;
};

/// Padisno with f = lambda |W x|_0 (4-level Haar) and the log misfit, started
/// at the observation.
RestoreResult run_restore(const imaging::Image& original, const imaging::Image& observed,
                          const RestoreOptions& options);
RestoreResult run_restore(const imaging::Image& original, const RestoreOptions& options);

void write_isnr_csv(const std::filesystem::path& path, const std::vector<double>& isnr);

// ---------------------------------------------------------------- rates

/// Reads fg_value from a trajectory CSV, subtracts target, drops rows with
/// n < first_index and fits the rate. Negative differences raise DataError.
diagnostics::RateReport rates_from_csv(const std::filesystem::path& path, double target, int first_index = 1);
nlohmann::json to_json(const diagnostics::RateReport& report);

}  // namespace padisno::experiments
