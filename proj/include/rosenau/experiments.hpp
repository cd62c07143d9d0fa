#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rosenau/rosenau.hpp"

namespace rosenau::experiments {

/// One solve. `n` is N (park1d), the per-side count (square2d) or N_d
/// (starfish2d).
struct ExperimentConfig {
  std::string problem = "park1d";
  Method method = Method::Fictitious;
  int n = 30;
  /// Boundary count for square resampling and the starfish; defaults to the
  /// size of the outermost interior layer.
  std::optional<int> n_boundary;
  double half_length = 1.0;
  /// Unset means 0.08 / h.
  std::optional<double> epsilon;
  double final_time = 1.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Snapshot times in (0, T]; T is always included.
  std::vector<double> snapshot_times;
};

/// Checks ranges and problem/method compatibility; throws InvalidArgument.
void validate(const ExperimentConfig& cfg);

struct Discretization {
  std::unique_ptr<RosenauSystem> system;
  double epsilon = 0.0;
  /// Node spacing behind the 0.08/h rule (1D: spacing of the method's node
  /// set; square: grid spacing; starfish: mean boundary spacing).
  double spacing = 0.0;
};

Discretization discretize(const ExperimentConfig& cfg);

/// Evaluation points used for 2D errors: the 25 x 25 interior grid of the
/// square, 600 radially uniform points in the starfish.
std::vector<Point> evaluation_points(const ExperimentConfig& cfg);

struct Snapshot {
  double time = 0.0;
  Eigen::VectorXd state;
  Eigen::VectorXd nodal;
  BoundaryResidual residual;
  /// Boundary-condition audit: Dirichlet <= 10 rtol ||F1||, Neumann <=
  /// 100 rtol max(1, ||F2||).
  bool audit_ok = true;
  /// Max error against the exact solution at the physical nodes (1D only).
  std::optional<double> max_error;
};

struct SolveResult {
  ExperimentConfig config;
  double epsilon = 0.0;
  double spacing = 0.0;
  double rcond = 0.0;
  std::vector<Snapshot> snapshots;  // t = 0 first
  IntegrationStats stats;
  double seconds = 0.0;
  std::shared_ptr<const RosenauSystem> system;

  const Snapshot& final() const { return snapshots.back(); }
  bool audit_ok() const;
};

SolveResult solve(const ExperimentConfig& cfg);
/// Integrates an already discretized configuration (the timer excludes the
/// operator assembly).
SolveResult run(Discretization d, const ExperimentConfig& cfg);

/// Max |u_h - u| over the physical nodes at time t (park1d).
double max_nodal_error(const SolveResult& r, const Snapshot& s);

// ---- reference solutions ------------------------------------------------------

struct Reference {
  std::string problem;
  double time = 0.0;
  std::vector<Point> points;
  Eigen::VectorXd values;
};

/// Fictitious solve evaluated at evaluation_points(cfg) at T.
Reference make_reference(const ExperimentConfig& cfg);
void write_reference(const std::filesystem::path& path, const Reference& ref,
                     const ExperimentConfig& cfg);
Reference read_reference(const std::filesystem::path& path);

/// Max error of the solution at T against the reference values.
double reference_error(const SolveResult& r, const Reference& ref);

// ---- studies ------------------------------------------------------------------------

enum class RowStatus { Ok, IllConditioned, BoundaryFailure, IntegrationFailed };
std::string_view to_string(RowStatus s);

struct SweepRow {
  double epsilon = 0.0;
  double max_error = 0.0;  // NaN unless status is Ok
  double rcond = 0.0;
  RowStatus status = RowStatus::Ok;
};

std::vector<SweepRow> sweep_eps(const ExperimentConfig& base, const std::vector<double>& eps,
                                int jobs = 1);

struct ConvergenceRow {
  int n = 0;
  std::size_t nodes = 0;
  double spacing = 0.0;
  double max_error = 0.0;
  RowStatus status = RowStatus::Ok;
};

/// Errors against the exact solution (park1d) or against `ref` (2D).
std::vector<ConvergenceRow> convergence(const ExperimentConfig& base, const std::vector<int>& ns,
                                        const Reference* ref = nullptr, int jobs = 1);

struct NormRow {
  double half_length = 0.0;
  double eps_h = 0.0;
  int n = 0;
  double h = 0.0;  // fill distance, half the node spacing
  double epsilon = 0.0;
  double q_inv = 0.0;
  double b_x = 0.0;
  double psi_x = 0.0;
  RowStatus status = RowStatus::Ok;
};

/// ||Q^-1||, ||B_x||, ||Psi~_x|| (infinity norms) of the 1D fictitious
/// discretization of park1d for every (L, eps h, N) triple.
std::vector<NormRow> matrix_norms(const std::vector<double>& half_lengths,
                                  const std::vector<double>& eps_h, const std::vector<int>& ns,
                                  int jobs = 1);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---- output ------------------------------------------------------------------------

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceRow>& rows);
void write_norms_csv(const std::filesystem::path& path, const std::vector<NormRow>& rows);

/// solve1d outputs: errors_T.csv (per-node error at T), linf.csv (error and
/// boundary residuals per snapshot).
void write_solve1d(const std::filesystem::path& dir, const SolveResult& r);
/// solve2d outputs: field_t<t>.csv per snapshot, summary.csv.
void write_solve2d(const std::filesystem::path& dir, const SolveResult& r);

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::string x_column;
  std::vector<std::string> y_columns;
  bool log_x = false;
  bool log_y = false;
  std::string style = "linespoints";
};

/// gnuplot command file plotting columns of `csv` (written next to it).
void write_gnuplot(const std::filesystem::path& gp, const std::filesystem::path& csv,
                   const PlotSpec& spec);

}  // namespace rosenau::experiments
