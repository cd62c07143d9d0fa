// Command-line front end for the Rosenau RBF solvers and the experiment
// studies. Exit codes: 0 success, 2 invalid configuration, 3 conditioning
// failure, 4 integration failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "rosenau/csv.hpp"
#include "rosenau/errors.hpp"
#include "rosenau/experiments.hpp"

namespace fs = std::filesystem;
namespace ex = rosenau::experiments;
using rosenau::csv::format;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitConditioning = 3;
constexpr int kExitIntegration = 4;

struct CommonOptions {
  std::string problem;
  std::string method = "fictitious";
  int n = 0;
  int n_boundary = 0;
  double half_length = 0.0;
  std::string eps = "auto";
  double final_time = 1.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::string out = "out";
  int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o, const std::string& default_problem) {
  o.problem = default_problem;
  cmd->add_option("--problem", o.problem, "park1d, square2d or starfish2d")
      ->check(CLI::IsMember({"park1d", "square2d", "starfish2d"}))
      ->capture_default_str();
  cmd->add_option("--method", o.method, "fictitious, fictitious-dae or resampling")
      ->check(CLI::IsMember({"fictitious", "fictitious-dae", "resampling"}))
      ->capture_default_str();
  cmd->add_option("--N,--n", o.n, "N (1D), points per side (square) or interior count (starfish)");
  cmd->add_option("--nb", o.n_boundary, "boundary count (square resampling, starfish)");
  cmd->add_option("--L", o.half_length, "half-length of the interval or square");
  cmd->add_option("--eps", o.eps, "shape parameter, or 'auto' for 0.08/h")->capture_default_str();
  cmd->add_option("--T", o.final_time, "final time")->capture_default_str();
  cmd->add_option("--rtol", o.rel_tol, "relative tolerance")->capture_default_str();
  cmd->add_option("--atol", o.abs_tol, "absolute tolerance")->capture_default_str();
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "parallel workers for sweeps")->capture_default_str();
}

std::optional<double> parse_eps(const std::string& s) {
  if (s == "auto") return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw rosenau::InvalidArgument("--eps must be a number or 'auto'");
  return v;
}

// Problem defaults: park1d N=30, L=1; square n=25, L=2; starfish N_d=253.
ex::ExperimentConfig to_config(const CommonOptions& o) {
  ex::ExperimentConfig c;
  c.problem = o.problem;
  c.method = rosenau::parse_method(o.method);
  if (o.problem == "park1d") {
    c.n = o.n ? o.n : 30;
    c.half_length = o.half_length > 0.0 ? o.half_length : 1.0;
  } else if (o.problem == "square2d") {
    c.n = o.n ? o.n : 25;
    c.half_length = o.half_length > 0.0 ? o.half_length : 2.0;
  } else {
    c.n = o.n ? o.n : 253;
    c.half_length = 1.0;
  }
  if (o.n_boundary) c.n_boundary = o.n_boundary;
  c.epsilon = parse_eps(o.eps);
  c.final_time = o.final_time;
  c.rel_tol = o.rel_tol;
  c.abs_tol = o.abs_tol;
  return c;
}

void print_run(const ex::SolveResult& r) {
  std::printf("%s %s n=%d eps=%s rcond=%.3g steps=%zu rejected=%zu time=%.2fs\n",
              r.config.problem.c_str(), std::string(rosenau::to_string(r.config.method)).c_str(),
              r.config.n, format(r.epsilon).c_str(), r.rcond, r.stats.steps,
              r.stats.rejected_steps, r.seconds);
  if (!r.audit_ok()) std::printf("warning: boundary-condition audit failed at some output time\n");
}

std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    v.push_back(std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))));
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RBF solvers for the Rosenau equation"};
  app.require_subcommand(1);

  CommonOptions s1;
  int series = 20;
  auto* solve1d = app.add_subcommand("solve1d", "1D solve of park1d with error report");
  add_common(solve1d, s1, "park1d");
  solve1d->add_option("--series", series, "number of L-infinity samples in (0, T]")
      ->capture_default_str();

  CommonOptions s2;
  std::vector<double> times;
  std::string reference;
  auto* solve2d = app.add_subcommand("solve2d", "2D solve with solution snapshots");
  add_common(solve2d, s2, "square2d");
  solve2d->add_option("--times", times, "snapshot times (default 1,2 square; 0.5,1,2 starfish)")->delimiter(',');
  solve2d->add_option("--reference", reference, "reference CSV from make-reference");

  CommonOptions sw;
  std::vector<double> eps_list;
  double eps_min = 0.01, eps_max = 10.0;
  int eps_count = 31;
  auto* sweep = app.add_subcommand("sweep-eps", "error and rcond versus the shape parameter");
  add_common(sweep, sw, "park1d");
  sweep->add_option("--eps-list", eps_list, "explicit shape parameters")->delimiter(',');
  sweep->add_option("--eps-min", eps_min)->capture_default_str();
  sweep->add_option("--eps-max", eps_max)->capture_default_str();
  sweep->add_option("--eps-count", eps_count, "log-spaced count")->capture_default_str();

  CommonOptions cv;
  std::vector<int> ns;
  std::string cv_reference;
  auto* conv = app.add_subcommand("convergence", "error versus resolution");
  add_common(conv, cv, "park1d");
  conv->add_option("--ns", ns, "resolutions (N, n or N_d)")->required()->delimiter(',');
  conv->add_option("--reference", cv_reference, "reference CSV (2D)");

  std::vector<double> norm_l{5.0, 10.0}, norm_eh{0.4, 0.5, 1.0};
  std::vector<int> norm_n{20, 30, 40, 60, 80, 100};
  std::string norm_out = "out";
  int norm_jobs = 1;
  auto* norms = app.add_subcommand("matrix-norms", "norms of Q^-1, B_x and Psi~_x (1D)");
  norms->add_option("--Ls", norm_l, "half-lengths")->capture_default_str()->delimiter(',');
  norms->add_option("--eps-h", norm_eh, "relative shape parameters eps*h")->capture_default_str()->delimiter(',');
  norms->add_option("--ns", norm_n, "node counts N")->capture_default_str()->delimiter(',');
  norms->add_option("--out", norm_out, "output directory")->capture_default_str();
  norms->add_option("--jobs", norm_jobs, "parallel workers")->capture_default_str();

  CommonOptions mr;
  auto* mkref = app.add_subcommand("make-reference",
                                   "fictitious reference solution at the 2D evaluation points");
  add_common(mkref, mr, "square2d");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*solve1d) {
      auto c = to_config(s1);
      if (c.problem != "park1d") throw rosenau::InvalidArgument("solve1d needs --problem park1d");
      if (series < 1) throw rosenau::InvalidArgument("--series must be positive");
      for (int k = 1; k < series; ++k) c.snapshot_times.push_back(c.final_time * k / series);
      const auto r = ex::solve(c);
      print_run(r);
      const fs::path dir = s1.out;
      ex::write_solve1d(dir, r);
      ex::write_gnuplot(dir / "linf.gp", dir / "linf.csv",
                        {"max error", "t", "max |u - exact|", "t", {"max_error"}, false, true});
      ex::write_gnuplot(dir / "errors_T.gp", dir / "errors_T.csv",
                        {"error at T", "x", "|u - exact|", "x", {"abs_error"}, false, true});
      std::printf("max error at T=%s: %.6e\n", format(c.final_time).c_str(),
                  *r.final().max_error);
    } else if (*solve2d) {
      auto c = to_config(s2);
      if (c.problem == "park1d") throw rosenau::InvalidArgument("solve2d needs a 2D problem");
      if (times.empty()) {
        times = c.problem == "square2d" ? std::vector<double>{1.0, 2.0}
                                        : std::vector<double>{0.5, 1.0, 2.0};
        std::erase_if(times, [&](double t) { return t > c.final_time; });
      }
      c.snapshot_times = times;
      const auto r = ex::solve(c);
      print_run(r);
      ex::write_solve2d(s2.out, r);
      for (const auto& snap : r.snapshots) {
        std::printf("t=%s max|u|=%.6f dirichlet=%.3e neumann=%.3e\n", format(snap.time).c_str(),
                    snap.nodal.cwiseAbs().maxCoeff(), snap.residual.dirichlet,
                    snap.residual.neumann);
      }
      if (!reference.empty()) {
        const auto ref = ex::read_reference(reference);
        std::printf("max error vs reference: %.6e\n", ex::reference_error(r, ref));
      }
    } else if (*sweep) {
      auto c = to_config(sw);
      if (eps_list.empty()) eps_list = logspace(eps_min, eps_max, eps_count);
      const auto rows = ex::sweep_eps(c, eps_list, sw.jobs);
      const fs::path dir = sw.out;
      ex::write_sweep_csv(dir / "sweep_eps.csv", rows);
      ex::write_gnuplot(dir / "sweep_eps.gp", dir / "sweep_eps.csv",
                        {"error versus shape parameter", "eps", "max error", "eps",
                         {"max_error"}, true, true});
      for (const auto& row : rows) {
        std::printf("eps=%-10s error=%-12.4e rcond=%-10.3g %s\n", format(row.epsilon).c_str(),
                    row.max_error, row.rcond, std::string(ex::to_string(row.status)).c_str());
      }
    } else if (*conv) {
      auto c = to_config(cv);
      std::optional<ex::Reference> ref;
      if (!cv_reference.empty()) ref = ex::read_reference(cv_reference);
      if (ref) c.final_time = ref->time;
      const auto rows = ex::convergence(c, ns, ref ? &*ref : nullptr, cv.jobs);
      const fs::path dir = cv.out;
      ex::write_convergence_csv(dir / "convergence.csv", rows);
      ex::write_gnuplot(dir / "convergence.gp", dir / "convergence.csv",
                        {"convergence", "n", "max error", "n", {"max_error"}, false, true});
      for (const auto& row : rows) {
        std::printf("n=%-5d nodes=%-6zu error=%-12.4e %s\n", row.n, row.nodes, row.max_error,
                    std::string(ex::to_string(row.status)).c_str());
      }
    } else if (*norms) {
      const auto rows = ex::matrix_norms(norm_l, norm_eh, norm_n, norm_jobs);
      const fs::path dir = norm_out;
      ex::write_norms_csv(dir / "matrix_norms.csv", rows);
      for (const char* col : {"q_inv_norm", "b_x_norm", "psi_x_norm"}) {
        ex::write_gnuplot(dir / (std::string(col) + ".gp"), dir / "matrix_norms.csv",
                          {col, "h", col, "h", {col}, true, true, "points"});
      }
      for (const auto& row : rows) {
        std::printf("L=%-4s eps*h=%-4s N=%-4d h=%-9.4g |Q^-1|=%-10.4g |B_x|=%-10.4g "
                    "|Psi~_x|=%-10.4g %s\n",
                    format(row.half_length).c_str(), format(row.eps_h).c_str(), row.n, row.h,
                    row.q_inv, row.b_x, row.psi_x, std::string(ex::to_string(row.status)).c_str());
      }
    } else if (*mkref) {
      auto c = to_config(mr);
      if (c.problem == "park1d") throw rosenau::InvalidArgument("make-reference is for 2D problems");
      // Reference resolutions: square n=28; starfish N=540 (468 interior, 72 boundary).
      if (!mkref->get_option("--n")->count()) c.n = c.problem == "square2d" ? 28 : 468;
      if (c.problem == "starfish2d" && !c.n_boundary) c.n_boundary = 72;
      const auto ref = ex::make_reference(c);
      const fs::path path = fs::path(mr.out) / "reference.csv";
      ex::write_reference(path, ref, c);
      std::printf("wrote %s (%zu points, t=%s)\n", path.string().c_str(), ref.points.size(),
                  format(ref.time).c_str());
    }
  } catch (const rosenau::InvalidArgument& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitInvalid;
  } catch (const rosenau::ConditioningError& e) {
    std::fprintf(stderr, "conditioning failure: %s\n", e.what());
    return kExitConditioning;
  } catch (const rosenau::BoundaryEliminationError& e) {
    std::fprintf(stderr, "conditioning failure: %s\n", e.what());
    return kExitConditioning;
  } catch (const rosenau::IntegrationFailure& e) {
    std::fprintf(stderr, "integration failure: %s\n", e.what());
    return kExitIntegration;
  } catch (const rosenau::ConsistencyError& e) {
    std::fprintf(stderr, "integration failure: %s\n", e.what());
    return kExitIntegration;
  }
  return 0;
}
