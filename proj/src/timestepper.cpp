#include "rosenau/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "rosenau/csv.hpp"
#include "rosenau/errors.hpp"

namespace rosenau {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

MatrixXd SemidiscreteSystem::jacobian(double, const VectorXd&) const {
  throw NotImplemented("this system provides no analytic Jacobian");
}

std::vector<std::size_t> SemidiscreteSystem::algebraic_rows() const {
  const MatrixXd m = mass(0.0);
  std::vector<std::size_t> rows;
  for (Index i = 0; i < m.rows(); ++i) {
    if ((m.row(i).array() == 0.0).all()) rows.push_back(static_cast<std::size_t>(i));
  }
  return rows;
}

FunctionSystem::FunctionSystem(MatrixXd mass, Rhs rhs, Jac jac)
    : mass_(std::move(mass)), rhs_(std::move(rhs)), jac_(std::move(jac)) {
  if (mass_.rows() != mass_.cols()) throw InvalidArgument("FunctionSystem: mass must be square");
  if (!rhs_) throw InvalidArgument("FunctionSystem: rhs is required");
}

namespace {

MatrixXd fd_jacobian(const SemidiscreteSystem& sys, double t, const VectorXd& y,
                     const VectorXd& f0, IntegrationStats* stats) {
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  MatrixXd j(y.size(), y.size());
  VectorXd yp = y;
  for (Index c = 0; c < y.size(); ++c) {
    const double delta = std::max(std::abs(y(c)), 1.0) * sqrt_eps;
    yp(c) = y(c) + delta;
    // The actually representable increment.
    const double step = yp(c) - y(c);
    j.col(c) = (sys.rhs(t, yp) - f0) / step;
    yp(c) = y(c);
  }
  if (stats) stats->rhs_evaluations += static_cast<std::size_t>(y.size());
  return j;
}

struct Point {
  double t;
  VectorXd y;
};

class Integrator {
 public:
  Integrator(const SemidiscreteSystem& sys, const SolverConfig& cfg)
      : sys_(sys), cfg_(cfg), n_(static_cast<Index>(sys.size())) {
    if (cfg_.jacobian_mode == JacobianMode::UserSupplied && !sys_.has_jacobian()) {
      use_fd_ = true;
    } else {
      use_fd_ = cfg_.jacobian_mode == JacobianMode::FiniteDifference;
    }
  }

  Trajectory run(double t0, const VectorXd& y0);

 private:
  double wrms(const VectorXd& v, const VectorXd& a, const VectorXd& b) const {
    double sum = 0.0;
    for (Index i = 0; i < v.size(); ++i) {
      const double w = cfg_.rel_tol * std::max(std::abs(a(i)), std::abs(b(i))) + cfg_.abs_tol;
      const double e = v(i) / w;
      sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(std::max<Index>(v.size(), 1)));
  }

  VectorXd f(double t, const VectorXd& y) {
    ++stats_.rhs_evaluations;
    return sys_.rhs(t, y);
  }

  void refresh_jacobian(double t, const VectorXd& y) {
    ++stats_.jacobian_evaluations;
    j_ = use_fd_ ? fd_jacobian(sys_, t, y, f(t, y), &stats_) : sys_.jacobian(t, y);
    j_fresh_ = true;
    lu_valid_ = false;
  }

  void load_mass(double t) {
    if (sys_.constant_mass() && have_mass_) return;
    m_ = sys_.mass(t);
    have_mass_ = true;
    lu_valid_ = false;
  }

  void factor(double gamma) {
    // Rows are equilibrated before factoring: differential rows scale like
    // |M|/h while algebraic rows are O(1), and partial pivoting's normwise
    // backward error would otherwise swamp the small rows.
    MatrixXd newton = gamma * m_ - j_;
    row_scale_ = newton.cwiseAbs().rowwise().maxCoeff();
    for (Index i = 0; i < row_scale_.size(); ++i) {
      row_scale_(i) = row_scale_(i) > 0.0 ? 1.0 / row_scale_(i) : 1.0;
    }
    lu_.compute(row_scale_.asDiagonal() * newton);
    lu_gamma_ = gamma;
    lu_valid_ = true;
    ++stats_.factorizations;
  }

  // Solves M (a0 y + a1 y_n + a2 y_{n-1}) / h = f(t, y) by modified Newton,
  // starting from y. Returns false on nonconvergence.
  bool corrector(double t, double h, double a0, double a1, double a2, const VectorXd& yn,
                 const VectorXd* ynm1, VectorXd& y) {
    load_mass(t);
    const double gamma = a0 / h;
    // The BDF coefficients sum to zero, so the difference quotient is
    // a0 (y - y_n) + a2 (y_{n-1} - y_n); forming it from differences avoids
    // cancellation that M would amplify.
    VectorXd hist_term = VectorXd::Zero(yn.size());
    if (ynm1 && a2 != 0.0) hist_term = (a2 / h) * (*ynm1 - yn);
    (void)a1;
    const VectorXd start = y;

    for (int attempt = 0; attempt < 2; ++attempt) {
      if (!lu_valid_ || lu_gamma_ != gamma || cfg_.disable_factor_reuse) {
        if (j_.size() == 0 || (!use_fd_ && !j_fresh_)) refresh_jacobian(t, y);
        factor(gamma);
      }
      y = start;
      double prev = 0.0;
      bool converged = false;
      for (int it = 0; it < cfg_.max_newton_iters; ++it) {
        const VectorXd r = m_ * (gamma * (y - yn) + hist_term) - f(t, y);
        const VectorXd dy = lu_.solve(-row_scale_.cwiseProduct(r));
        y += dy;
        ++stats_.newton_iterations;
        const double norm = wrms(dy, y, yn);
        if (!std::isfinite(norm)) break;
        if (norm < 0.33) {
          converged = true;
          break;
        }
        if (it > 0 && norm > 0.9 * prev) break;
        prev = norm;
      }
      if (converged) return true;
      ++stats_.newton_failures;
      if (j_fresh_) return false;
      refresh_jacobian(t, start);
    }
    return false;
  }

  const SemidiscreteSystem& sys_;
  const SolverConfig& cfg_;
  Index n_;
  bool use_fd_ = false;
  MatrixXd m_;
  bool have_mass_ = false;
  MatrixXd j_;
  bool j_fresh_ = false;
  Eigen::PartialPivLU<MatrixXd> lu_;
  VectorXd row_scale_;
  bool lu_valid_ = false;
  double lu_gamma_ = 0.0;
  IntegrationStats stats_;
};

// Local error target as a fraction of the requested tolerance. With order at
// most 2 the global error is roughly (number of steps) x (local error), so
// controlling the local error at the tolerance itself overshoots by orders of
// magnitude at tight tolerances.
constexpr double kLocalErrorFraction = 0.02;

double clamp_ratio(double err, int order, double lo, double hi) {
  const double e = std::max(err, 1e-12);
  return std::clamp(0.9 * std::pow(e, -1.0 / (order + 1)), lo, hi);
}

// Lagrange extrapolation through the last `m` history points to time t.
VectorXd extrapolate(const std::deque<Point>& hist, std::size_t m, double t) {
  const std::size_t base = hist.size() - m;
  VectorXd out = VectorXd::Zero(hist.back().y.size());
  for (std::size_t i = 0; i < m; ++i) {
    double w = 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      w *= (t - hist[base + j].t) / (hist[base + i].t - hist[base + j].t);
    }
    out += w * hist[base + i].y;
  }
  return out;
}

// k-th derivative estimate from the last k+1 history points (k! times the
// k-th divided difference).
VectorXd derivative_estimate(const std::deque<Point>& hist, std::size_t k) {
  const std::size_t base = hist.size() - (k + 1);
  std::vector<VectorXd> dd;
  for (std::size_t i = 0; i <= k; ++i) dd.push_back(hist[base + i].y);
  for (std::size_t level = 1; level <= k; ++level) {
    for (std::size_t i = 0; i + level <= k; ++i) {
      dd[i] = (dd[i + 1] - dd[i]) / (hist[base + i + level].t - hist[base + i].t);
    }
  }
  double fact = 1.0;
  for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
  return fact * dd[0];
}

Trajectory Integrator::run(double t0, const VectorXd& y0) {
  Trajectory traj;
  const auto& outs = cfg_.output_times;
  if (outs.empty()) throw InvalidArgument("integrate: no output times");
  if (!(cfg_.rel_tol >= 1e-14) || !(cfg_.abs_tol > 0.0)) {
    throw InvalidArgument("integrate: need rel_tol >= 1e-14 and abs_tol > 0");
  }
  if (y0.size() != n_) throw InvalidArgument("integrate: y0 has the wrong size");
  for (std::size_t i = 0; i < outs.size(); ++i) {
    if (outs[i] < t0 || (i > 0 && !(outs[i] > outs[i - 1]))) {
      throw InvalidArgument("integrate: output times must be increasing and >= t0");
    }
  }
  if (cfg_.fixed_step && !(*cfg_.fixed_step > 0.0)) {
    throw InvalidArgument("integrate: fixed step must be positive");
  }
  const int max_order = std::clamp(cfg_.max_order, 1, 2);

  const double tol = cfg_.consistency_tol.value_or(cfg_.abs_tol);
  const double residual = check_consistency(sys_, y0, t0);
  if (residual > tol) {
    std::ostringstream msg;
    msg << "initial state violates the algebraic equations (residual " << residual << ")";
    throw ConsistencyError(msg.str(), residual);
  }

  std::size_t out_idx = 0;
  if (outs[0] == t0) {
    traj.times.push_back(t0);
    traj.states.push_back(y0);
    ++out_idx;
  }

  const double span = outs.back() - t0;
  double h = cfg_.fixed_step.value_or(cfg_.initial_step > 0.0 ? cfg_.initial_step
                                                               : 1e-3 * std::max(span, 1e-12));
  if (cfg_.max_step > 0.0) h = std::min(h, cfg_.max_step);

  std::deque<Point> hist{{t0, y0}};
  double t = t0;
  int order = 1;
  int halvings = 0;

  auto push = [&](double tn, VectorXd yn) {
    hist.push_back({tn, std::move(yn)});
    while (hist.size() > 4) hist.pop_front();
  };

  while (out_idx < outs.size()) {
    if (stats_.steps >= cfg_.max_steps) {
      throw IntegrationFailure("integrate: step limit reached", t);
    }
    const double target = outs[out_idx];
    double step = h;
    if (cfg_.max_step > 0.0) step = std::min(step, cfg_.max_step);
    bool hits = false;
    if (t + step >= target - 1e-12 * std::max(1.0, std::abs(target))) {
      step = target - t;
      hits = true;
    } else if (!cfg_.fixed_step && t + 2.0 * step > target) {
      step = 0.5 * (target - t);
    }
    if (!(step > 1e-14 * std::max(1.0, std::abs(t)))) {
      throw IntegrationFailure("integrate: step size underflow", t);
    }
    const double t_new = hits ? target : t + step;

    auto newton_failed = [&]() {
      if (++halvings > 10) {
        throw IntegrationFailure("integrate: Newton iteration failed to converge", t);
      }
      h = 0.5 * step;
    };

    const Point& last = hist.back();
    VectorXd y;
    int used_order = 1;
    double err = 0.0;

    if (cfg_.fixed_step) {
      used_order = std::min<int>(max_order, static_cast<int>(hist.size()));
      y = last.y;
      bool ok;
      if (used_order == 1) {
        ok = corrector(t_new, step, 1.0, -1.0, 0.0, last.y, nullptr, y);
      } else {
        const double w = step / (last.t - hist[hist.size() - 2].t);
        ok = corrector(t_new, step, (1.0 + 2.0 * w) / (1.0 + w), -(1.0 + w), w * w / (1.0 + w),
                       last.y, &hist[hist.size() - 2].y, y);
      }
      if (!ok) throw IntegrationFailure("integrate: Newton failed at fixed step", t);
    } else if (hist.size() == 1) {
      // First step: compare one backward Euler step with two half steps.
      VectorXd full = last.y;
      if (!corrector(t_new, step, 1.0, -1.0, 0.0, last.y, nullptr, full)) {
        newton_failed();
        continue;
      }
      const double tm = t + 0.5 * step;
      VectorXd half = last.y;
      if (!corrector(tm, 0.5 * step, 1.0, -1.0, 0.0, last.y, nullptr, half)) {
        newton_failed();
        continue;
      }
      y = half + (half - last.y);
      if (!corrector(t_new, 0.5 * step, 1.0, -1.0, 0.0, half, nullptr, y)) {
        newton_failed();
        continue;
      }
      err = wrms(full - y, y, last.y) / kLocalErrorFraction;
      if (err > 1.0) {
        ++stats_.rejected_steps;
        h = step * clamp_ratio(err, 1, 0.2, 0.9);
        continue;
      }
      push(tm, std::move(half));
    } else {
      used_order = (order == 2 && hist.size() >= 3) ? 2 : 1;
      const VectorXd pred = extrapolate(hist, static_cast<std::size_t>(used_order) + 1, t_new);
      y = pred;
      bool ok;
      if (used_order == 1) {
        ok = corrector(t_new, step, 1.0, -1.0, 0.0, last.y, nullptr, y);
      } else {
        const double w = step / (last.t - hist[hist.size() - 2].t);
        ok = corrector(t_new, step, (1.0 + 2.0 * w) / (1.0 + w), -(1.0 + w), w * w / (1.0 + w),
                       last.y, &hist[hist.size() - 2].y, y);
      }
      if (!ok) {
        newton_failed();
        continue;
      }
      const double c = used_order == 2 ? 2.0 / 11.0 : 1.0 / 3.0;
      err = c * wrms(y - pred, y, last.y) / kLocalErrorFraction;
      if (err > 1.0) {
        ++stats_.rejected_steps;
        h = step * clamp_ratio(err, used_order, 0.2, 0.9);
        continue;
      }
    }

    // Accepted.
    halvings = 0;
    ++stats_.steps;
    j_fresh_ = false;
    t = t_new;
    push(t, y);
    if (hits) {
      traj.times.push_back(t);
      traj.states.push_back(y);
      ++out_idx;
    }
    if (cfg_.fixed_step) continue;

    // Order selection from derivative estimates over the history.
    int next_order = used_order;
    double next_err = err;
    if (max_order == 2 && hist.size() >= 4) {
      const double hn = step;
      const VectorXd y2 = derivative_estimate(hist, 2);
      const VectorXd y3 = derivative_estimate(hist, 3);
      const double e1 = 0.5 * hn * hn * wrms(y2, y, y) / kLocalErrorFraction;
      const double e2 = (2.0 / 9.0) * hn * hn * hn * wrms(y3, y, y) / kLocalErrorFraction;
      const double r1 = std::pow(std::max(e1, 1e-12), -0.5);
      const double r2 = std::pow(std::max(e2, 1e-12), -1.0 / 3.0);
      next_order = r2 >= r1 ? 2 : 1;
      if (next_order != used_order) next_err = next_order == 2 ? e2 : e1;
    } else if (max_order == 2 && hist.size() >= 3) {
      next_order = 2;
    }
    order = next_order;

    const double ratio = clamp_ratio(next_err, next_order, 0.2, 2.0);
    // Planned step, not the one clipped to an output time.
    const double planned = hits ? std::max(h, step) : step;
    if (ratio >= 1.2 || ratio < 1.0) {
      h = planned * ratio;
    } else {
      h = planned;
    }
  }

  traj.stats = stats_;
  return traj;
}

}  // namespace

Trajectory integrate(const SemidiscreteSystem& system, double t0, const VectorXd& y0,
                     const SolverConfig& config) {
  Integrator integ(system, config);
  return integ.run(t0, y0);
}

double check_consistency(const SemidiscreteSystem& system, const VectorXd& y0, double t0) {
  const auto rows = system.algebraic_rows();
  if (rows.empty()) return 0.0;
  const VectorXd f = system.rhs(t0, y0);
  double worst = 0.0;
  for (auto i : rows) worst = std::max(worst, std::abs(f(static_cast<Index>(i))));
  return worst;
}

VectorXd make_consistent(const SemidiscreteSystem& system, const VectorXd& y0, double t0,
                         double tol) {
  const auto rows = system.algebraic_rows();
  VectorXd y = y0;
  if (rows.empty()) return y;
  double residual = 0.0;
  for (int it = 0; it < 10; ++it) {
    const VectorXd f = system.rhs(t0, y);
    VectorXd c(static_cast<Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) c(static_cast<Index>(k)) = f(static_cast<Index>(rows[k]));
    residual = c.cwiseAbs().maxCoeff();
    if (residual <= tol) return y;
    const MatrixXd j = system.has_jacobian() ? system.jacobian(t0, y)
                                             : fd_jacobian(system, t0, y, f, nullptr);
    MatrixXd jc(static_cast<Index>(rows.size()), j.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) jc.row(static_cast<Index>(k)) = j.row(static_cast<Index>(rows[k]));
    y += Eigen::CompleteOrthogonalDecomposition<MatrixXd>(jc).solve(-c);
  }
  const VectorXd f = system.rhs(t0, y);
  residual = 0.0;
  for (auto i : rows) residual = std::max(residual, std::abs(f(static_cast<Index>(i))));
  if (residual <= tol) return y;
  throw ConsistencyError("make_consistent: algebraic residual did not converge", residual);
}

void write_csv(std::ostream& out, const Trajectory& traj,
               const std::vector<std::size_t>& columns) {
  csv::Writer w(out);
  std::vector<std::size_t> cols = columns;
  if (cols.empty() && !traj.states.empty()) {
    for (Index i = 0; i < traj.states.front().size(); ++i) cols.push_back(static_cast<std::size_t>(i));
  }
  std::vector<std::string> header{"t"};
  for (auto c : cols) header.push_back("y" + std::to_string(c));
  w.header(header);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    w.cell(traj.times[k]);
    for (auto c : cols) w.cell(traj.states[k](static_cast<Index>(c)));
    w.end_row();
  }
}

}  // namespace rosenau
