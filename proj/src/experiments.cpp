#include "rosenau/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "rosenau/csv.hpp"
#include "rosenau/errors.hpp"

namespace rosenau::experiments {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_1d(const std::string& problem) { return problem == "park1d"; }

// Runs fn(i) for i in [0, count) on up to `jobs` threads. Results are
// written by index, so the output order never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  const auto workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double inf_norm(const MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

int boundary_count(const ExperimentConfig& cfg) {
  if (cfg.n_boundary) return *cfg.n_boundary;
  if (cfg.problem == "square2d") return default_resampling_boundary(cfg.n);
  return static_cast<int>(starfish_outer_ring_size(static_cast<std::size_t>(cfg.n)));
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  const auto& p = cfg.problem;
  if (p != "park1d" && p != "square2d" && p != "starfish2d") {
    throw InvalidArgument("unknown problem '" + p + "'");
  }
  if (!(cfg.half_length > 0.0)) throw InvalidArgument("L must be positive");
  if (!(cfg.final_time >= 0.0)) throw InvalidArgument("T must be non-negative");
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) {
    throw InvalidArgument("tolerances must be positive");
  }
  if (cfg.epsilon && !(*cfg.epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  for (double t : cfg.snapshot_times) {
    if (!(t >= 0.0 && t <= cfg.final_time)) {
      throw InvalidArgument("snapshot times must lie in [0, T]");
    }
  }
  const bool resampling = cfg.method == Method::Resampling;
  if (p == "park1d") {
    if (cfg.n < (resampling ? 6 : 7)) throw InvalidArgument("park1d needs N >= 7 (6 for resampling)");
    if (cfg.n_boundary) throw InvalidArgument("park1d has two boundary points; --nb not allowed");
  } else if (p == "square2d") {
    if (cfg.n < (resampling ? 5 : 4)) throw InvalidArgument("square2d needs n >= 4 (5 for resampling)");
    if (cfg.n_boundary && !resampling) {
      throw InvalidArgument("square2d fictitious uses the 4n-4 grid boundary; --nb not allowed");
    }
    if (resampling) {
      const int nb = boundary_count(cfg);
      if (nb < 4 || nb >= (cfg.n - 2) * (cfg.n - 2)) {
        throw InvalidArgument("square2d resampling needs 4 <= N_b < (n-2)^2");
      }
    }
  } else {
    if (cfg.n < 8) throw InvalidArgument("starfish2d needs N_d >= 8");
    const int nb = boundary_count(cfg);
    if (nb < 8) throw InvalidArgument("starfish2d needs N_b >= 8");
    if (resampling && nb >= cfg.n) throw InvalidArgument("starfish2d resampling needs N_b < N_d");
  }
}

Discretization discretize(const ExperimentConfig& cfg) {
  validate(cfg);
  const PdeInstance inst = instance_by_name(cfg.problem);
  const double L = cfg.half_length;
  const bool resampling = cfg.method == Method::Resampling;
  Discretization d;

  NodeSet nodes;
  std::optional<AuxiliarySet> aux;
  if (cfg.problem == "park1d") {
    if (resampling) {
      nodes = uniform1d(cfg.n, L);
      aux = auxiliary1d(cfg.n, L);
      d.spacing = 2.0 * L / (cfg.n - 1);
    } else {
      nodes = uniform1d_fictitious(cfg.n, L);
      d.spacing = 2.0 * L / (cfg.n - 3);
    }
  } else if (cfg.problem == "square2d") {
    d.spacing = 2.0 * L / (cfg.n - 1);
    if (resampling) {
      const int nb = boundary_count(cfg);
      nodes = square_resampling_nodes(cfg.n, L, nb);
      aux = square_auxiliary(cfg.n, L, nb);
    } else {
      nodes = square_grid(cfg.n, L, d.spacing);
    }
  } else {
    const int nb = boundary_count(cfg);
    d.spacing = mean_boundary_spacing(starfish_boundary(nb));
    const auto nd = static_cast<std::size_t>(cfg.n);
    if (resampling) {
      nodes = starfish_nodes(nd, nb);
      aux = starfish_auxiliary(nodes.size(), static_cast<std::size_t>(nb));
    } else {
      nodes = starfish_nodes(nd, nb, d.spacing);
    }
  }
  d.epsilon = cfg.epsilon.value_or(0.08 / d.spacing);
  d.system = make_system(cfg.method, inst, nodes, Kernel(d.epsilon), aux);
  return d;
}

std::vector<Point> evaluation_points(const ExperimentConfig& cfg) {
  if (cfg.problem == "square2d") {
    std::vector<Point> pts;
    const double L = cfg.half_length;
    for (int j = 1; j <= 25; ++j) {
      for (int i = 1; i <= 25; ++i) pts.push_back({-L + 2.0 * L * i / 26.0, -L + 2.0 * L * j / 26.0});
    }
    return pts;
  }
  if (cfg.problem == "starfish2d") return starfish_interior(600);
  throw InvalidArgument("evaluation_points: only defined for 2D problems");
}

bool SolveResult::audit_ok() const {
  return std::all_of(snapshots.begin(), snapshots.end(),
                     [](const Snapshot& s) { return s.audit_ok; });
}

double max_nodal_error(const SolveResult& r, const Snapshot& s) {
  const auto& inst = r.system->instance();
  if (!inst.exact) throw InvalidArgument(inst.name + " has no exact solution");
  const auto& nodes = r.system->nodes();
  double err = 0.0;
  auto scan = [&](std::span<const std::size_t> idx) {
    for (auto i : idx) {
      err = std::max(err, std::abs(s.nodal(static_cast<Index>(i)) - inst.exact(nodes.point(i), s.time)));
    }
  };
  scan(nodes.interior());
  scan(nodes.boundary());
  return err;
}

SolveResult solve(const ExperimentConfig& cfg) { return run(discretize(cfg), cfg); }

SolveResult run(Discretization d, const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  SolveResult r;
  r.config = cfg;
  r.epsilon = d.epsilon;
  r.spacing = d.spacing;
  r.rcond = d.system->basis().rcond();
  std::shared_ptr<const RosenauSystem> sys = std::move(d.system);
  r.system = sys;

  std::vector<double> times = cfg.snapshot_times;
  times.push_back(0.0);
  times.push_back(cfg.final_time);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  SolverConfig sc;
  sc.rel_tol = cfg.rel_tol;
  sc.abs_tol = cfg.abs_tol;
  sc.output_times = times;
  const Trajectory traj = integrate(*sys, 0.0, sys->initial_state(0.0), sc);
  r.stats = traj.stats;

  const bool exact = static_cast<bool>(sys->instance().exact);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    Snapshot s;
    s.time = traj.times[k];
    s.state = traj.states[k];
    s.nodal = sys->nodal_values(s.time, s.state);
    s.residual = sys->boundary_residual(s.time, s.state);
    const double f1 = sys->f1(s.time).cwiseAbs().maxCoeff();
    const double f2 = sys->f2(s.time).cwiseAbs().maxCoeff();
    s.audit_ok = s.residual.dirichlet <= 10.0 * cfg.rel_tol * f1 &&
                 s.residual.neumann <= 100.0 * cfg.rel_tol * std::max(1.0, f2);
    r.snapshots.push_back(std::move(s));
    if (exact) r.snapshots.back().max_error = max_nodal_error(r, r.snapshots.back());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// ---- references ----------------------------------------------------------------

Reference make_reference(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.method = Method::Fictitious;
  c.snapshot_times.clear();
  const SolveResult r = solve(c);
  Reference ref;
  ref.problem = c.problem;
  ref.time = c.final_time;
  ref.points = evaluation_points(c);
  ref.values = r.system->evaluate(ref.time, r.final().state, ref.points);
  return ref;
}

void write_reference(const std::filesystem::path& path, const Reference& ref,
                     const ExperimentConfig& cfg) {
  auto out = csv::open(path);
  csv::Writer w(out);
  w.comment("problem=" + ref.problem);
  w.comment("time=" + csv::format(ref.time));
  w.comment("n=" + std::to_string(cfg.n) + " L=" + csv::format(cfg.half_length) +
            (cfg.epsilon ? " eps=" + csv::format(*cfg.epsilon) : std::string(" eps=auto")));
  w.header({"x", "y", "u"});
  for (std::size_t i = 0; i < ref.points.size(); ++i) {
    w.cell(ref.points[i].x).cell(ref.points[i].y).cell(ref.values(static_cast<Index>(i)));
    w.end_row();
  }
}

Reference read_reference(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  Reference ref;
  for (const auto& c : t.comments) {
    if (c.rfind("problem=", 0) == 0) ref.problem = c.substr(8);
    if (c.rfind("time=", 0) == 0) ref.time = std::stod(c.substr(5));
  }
  if (ref.problem.empty()) throw InvalidArgument("reference '" + path.string() + "' lacks problem=");
  const auto cx = t.column("x"), cy = t.column("y"), cu = t.column("u");
  ref.values.resize(static_cast<Index>(t.rows.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    ref.points.push_back({std::stod(t.rows[i][cx]), std::stod(t.rows[i][cy])});
    ref.values(static_cast<Index>(i)) = std::stod(t.rows[i][cu]);
  }
  return ref;
}

double reference_error(const SolveResult& r, const Reference& ref) {
  if (ref.problem != r.config.problem) {
    throw InvalidArgument("reference is for '" + ref.problem + "', run is '" + r.config.problem + "'");
  }
  if (std::abs(ref.time - r.final().time) > 1e-12) {
    throw InvalidArgument("reference time " + csv::format(ref.time) + " differs from T=" +
                          csv::format(r.final().time));
  }
  const VectorXd u = r.system->evaluate(r.final().time, r.final().state, ref.points);
  return (u - ref.values).cwiseAbs().maxCoeff();
}

// ---- studies ----------------------------------------------------------------------

std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::Ok:
      return "ok";
    case RowStatus::IllConditioned:
      return "ill-conditioned";
    case RowStatus::BoundaryFailure:
      return "boundary-singular";
    case RowStatus::IntegrationFailed:
      return "integration-failed";
  }
  return "?";
}

namespace {

// Runs `body`, mapping the solver's failure exceptions to a row status.
template <class Body>
RowStatus guarded(Body&& body, double* rcond = nullptr) {
  try {
    body();
    return RowStatus::Ok;
  } catch (const ConditioningError& e) {
    if (rcond) *rcond = e.rcond();
    return RowStatus::IllConditioned;
  } catch (const BoundaryEliminationError&) {
    return RowStatus::BoundaryFailure;
  } catch (const IntegrationFailure&) {
    return RowStatus::IntegrationFailed;
  } catch (const ConsistencyError&) {
    return RowStatus::IntegrationFailed;
  }
}

}  // namespace

std::vector<SweepRow> sweep_eps(const ExperimentConfig& base, const std::vector<double>& eps,
                                int jobs) {
  if (!is_1d(base.problem)) throw InvalidArgument("sweep-eps needs a problem with an exact solution");
  std::vector<SweepRow> rows(eps.size());
  parallel_for(eps.size(), jobs, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.epsilon = eps[i];
    row.max_error = kNaN;
    ExperimentConfig c = base;
    c.epsilon = eps[i];
    c.snapshot_times.clear();
    row.status = guarded(
        [&] {
          Discretization d = discretize(c);
          row.rcond = d.system->basis().rcond();
          const SolveResult r = run(std::move(d), c);
          row.max_error = *r.final().max_error;
        },
        &row.rcond);
  });
  return rows;
}

std::vector<ConvergenceRow> convergence(const ExperimentConfig& base, const std::vector<int>& ns,
                                        const Reference* ref, int jobs) {
  if (!is_1d(base.problem) && !ref) {
    throw InvalidArgument("2D convergence needs a reference (see make-reference)");
  }
  std::vector<ConvergenceRow> rows(ns.size());
  parallel_for(ns.size(), jobs, [&](std::size_t i) {
    ConvergenceRow& row = rows[i];
    row.n = ns[i];
    row.max_error = kNaN;
    ExperimentConfig c = base;
    c.n = ns[i];
    c.snapshot_times.clear();
    row.status = guarded([&] {
      const SolveResult r = solve(c);
      row.nodes = r.system->nodes().interior_count() + r.system->nodes().boundary_count();
      row.spacing = r.spacing;
      row.max_error = ref ? reference_error(r, *ref) : *r.final().max_error;
    });
  });
  return rows;
}

std::vector<NormRow> matrix_norms(const std::vector<double>& half_lengths,
                                  const std::vector<double>& eps_h, const std::vector<int>& ns,
                                  int jobs) {
  std::vector<NormRow> rows;
  for (double L : half_lengths) {
    for (double eh : eps_h) {
      for (int n : ns) {
        NormRow row;
        row.half_length = L;
        row.eps_h = eh;
        row.n = n;
        row.h = L / (n - 3);
        row.epsilon = eh / row.h;
        row.q_inv = row.b_x = row.psi_x = kNaN;
        rows.push_back(row);
      }
    }
  }
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    NormRow& row = rows[i];
    row.status = guarded([&] {
      const FictitiousOdeSystem sys(park1d(), uniform1d_fictitious(row.n, row.half_length),
                                    Kernel(row.epsilon));
      const MatrixXd q = sys.mass(0.0);
      row.q_inv = inf_norm(q.partialPivLu().inverse());
      const auto& m = sys.modified();
      MatrixXd bx(m.c1(Op::Dx).rows(), m.c1(Op::Dx).cols() + m.c2(Op::Dx).cols());
      bx << m.c1(Op::Dx), m.c2(Op::Dx);
      row.b_x = inf_norm(bx);
      row.psi_x = inf_norm(m.tilde(Op::Dx));
    });
  });
  return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("loglog_slope: need >= 2 pairs");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- output ------------------------------------------------------------------------

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  auto out = csv::open(path);
  csv::Writer w(out);
  w.header({"eps", "max_error", "rcond", "status"});
  for (const auto& r : rows) {
    w.cell(r.epsilon).cell(r.max_error).cell(r.rcond).cell(to_string(r.status));
    w.end_row();
  }
}

void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<ConvergenceRow>& rows) {
  auto out = csv::open(path);
  csv::Writer w(out);
  w.header({"n", "nodes", "spacing", "max_error", "status"});
  for (const auto& r : rows) {
    w.cell(static_cast<long long>(r.n)).cell(static_cast<long long>(r.nodes)).cell(r.spacing);
    w.cell(r.max_error).cell(to_string(r.status));
    w.end_row();
  }
}

void write_norms_csv(const std::filesystem::path& path, const std::vector<NormRow>& rows) {
  auto out = csv::open(path);
  csv::Writer w(out);
  w.header({"L", "eps_h", "N", "h", "eps", "q_inv_norm", "b_x_norm", "psi_x_norm", "status"});
  for (const auto& r : rows) {
    w.cell(r.half_length).cell(r.eps_h).cell(static_cast<long long>(r.n)).cell(r.h);
    w.cell(r.epsilon).cell(r.q_inv).cell(r.b_x).cell(r.psi_x).cell(to_string(r.status));
    w.end_row();
  }
}

void write_solve1d(const std::filesystem::path& dir, const SolveResult& r) {
  const auto& nodes = r.system->nodes();
  const auto& inst = r.system->instance();
  const Snapshot& s = r.final();
  std::vector<std::size_t> idx(nodes.interior().begin(), nodes.interior().end());
  idx.insert(idx.end(), nodes.boundary().begin(), nodes.boundary().end());
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return nodes.point(a).x < nodes.point(b).x; });
  {
    auto out = csv::open(dir / "errors_T.csv");
    csv::Writer w(out);
    w.comment("t=" + csv::format(s.time));
    w.header({"x", "u", "exact", "abs_error"});
    for (auto i : idx) {
      const double u = s.nodal(static_cast<Index>(i));
      const double e = inst.exact(nodes.point(i), s.time);
      w.cell(nodes.point(i).x).cell(u).cell(e).cell(std::abs(u - e));
      w.end_row();
    }
  }
  auto out = csv::open(dir / "linf.csv");
  csv::Writer w(out);
  w.header({"t", "max_error", "dirichlet_residual", "neumann_residual", "audit"});
  for (const auto& snap : r.snapshots) {
    w.cell(snap.time).cell(snap.max_error.value_or(kNaN)).cell(snap.residual.dirichlet);
    w.cell(snap.residual.neumann).cell(snap.audit_ok ? "ok" : "fail");
    w.end_row();
  }
}

void write_solve2d(const std::filesystem::path& dir, const SolveResult& r) {
  const auto& nodes = r.system->nodes();
  std::vector<std::size_t> idx(nodes.interior().begin(), nodes.interior().end());
  idx.insert(idx.end(), nodes.boundary().begin(), nodes.boundary().end());
  for (const auto& snap : r.snapshots) {
    auto out = csv::open(dir / ("field_t" + csv::format(snap.time) + ".csv"));
    csv::Writer w(out);
    w.comment("t=" + csv::format(snap.time));
    w.header({"x", "y", "u"});
    for (auto i : idx) {
      w.cell(nodes.point(i).x).cell(nodes.point(i).y).cell(snap.nodal(static_cast<Index>(i)));
      w.end_row();
    }
  }
  auto out = csv::open(dir / "summary.csv");
  csv::Writer w(out);
  w.header({"t", "max_abs_u", "dirichlet_residual", "neumann_residual", "audit"});
  for (const auto& snap : r.snapshots) {
    double umax = 0.0;
    for (auto i : idx) umax = std::max(umax, std::abs(snap.nodal(static_cast<Index>(i))));
    w.cell(snap.time).cell(umax).cell(snap.residual.dirichlet).cell(snap.residual.neumann);
    w.cell(snap.audit_ok ? "ok" : "fail");
    w.end_row();
  }
}

void write_gnuplot(const std::filesystem::path& gp, const std::filesystem::path& csv,
                   const PlotSpec& spec) {
  auto out = csv::open(gp);
  out << "set datafile separator ','\n";
  out << "set datafile missing 'nan'\n";
  out << "set title '" << spec.title << "'\n";
  out << "set xlabel '" << spec.xlabel << "'\n";
  out << "set ylabel '" << spec.ylabel << "'\n";
  if (spec.log_x) out << "set logscale x\n";
  if (spec.log_y) out << "set logscale y\n";
  out << "set key autotitle columnheader\n";
  out << "plot ";
  for (std::size_t i = 0; i < spec.y_columns.size(); ++i) {
    if (i) out << ", \\\n     ";
    out << "'" << csv.filename().string() << "' using '" << spec.x_column << "':'"
        << spec.y_columns[i] << "' with " << spec.style;
  }
  out << "\n";
}

}  // namespace rosenau::experiments
