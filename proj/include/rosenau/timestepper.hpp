#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace rosenau {

/// M(t) y' = f(t, y). Rows where M is identically zero are algebraic
/// equations 0 = f_i(t, y) (index-1 DAE).
class SemidiscreteSystem {
 public:
  virtual ~SemidiscreteSystem() = default;

  virtual std::size_t size() const = 0;
  /// True when M does not depend on t.
  virtual bool constant_mass() const = 0;
  virtual Eigen::MatrixXd mass(double t) const = 0;
  virtual Eigen::VectorXd rhs(double t, const Eigen::VectorXd& y) const = 0;

  virtual bool has_jacobian() const { return false; }
  /// df/dy; only called when has_jacobian() is true.
  virtual Eigen::MatrixXd jacobian(double t, const Eigen::VectorXd& y) const;

  /// Indices of the algebraic equations. Defaults to the zero rows of M(0).
  virtual std::vector<std::size_t> algebraic_rows() const;

  bool is_dae() const { return !algebraic_rows().empty(); }
};

/// Adapter for systems given as callables (tests, small problems).
class FunctionSystem : public SemidiscreteSystem {
 public:
  using Rhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
  using Jac = std::function<Eigen::MatrixXd(double, const Eigen::VectorXd&)>;

  FunctionSystem(Eigen::MatrixXd mass, Rhs rhs, Jac jac = {});

  std::size_t size() const override { return static_cast<std::size_t>(mass_.rows()); }
  bool constant_mass() const override { return true; }
  Eigen::MatrixXd mass(double) const override { return mass_; }
  Eigen::VectorXd rhs(double t, const Eigen::VectorXd& y) const override { return rhs_(t, y); }
  bool has_jacobian() const override { return static_cast<bool>(jac_); }
  Eigen::MatrixXd jacobian(double t, const Eigen::VectorXd& y) const override {
    return jac_(t, y);
  }

 private:
  Eigen::MatrixXd mass_;
  Rhs rhs_;
  Jac jac_;
};

enum class JacobianMode { FiniteDifference, UserSupplied };

struct SolverConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0.0;      // 0: no limit
  double initial_step = 0.0;  // 0: chosen automatically
  int max_newton_iters = 4;
  int max_order = 2;
  JacobianMode jacobian_mode = JacobianMode::UserSupplied;
  /// Strictly increasing, all >= t0. The last entry is the final time.
  std::vector<double> output_times;
  /// When set, every step has this size (clipped at output times) and no
  /// error control is done. Orders ramp 1 -> max_order.
  std::optional<double> fixed_step;
  /// Largest admissible algebraic residual of y0; defaults to abs_tol.
  std::optional<double> consistency_tol;
  std::size_t max_steps = 2'000'000;
  /// Keep factorizing the Newton matrix every step even for constant mass.
  bool disable_factor_reuse = false;
};

struct IntegrationStats {
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t newton_iterations = 0;
  std::size_t newton_failures = 0;
  std::size_t factorizations = 0;
  std::size_t jacobian_evaluations = 0;
  std::size_t rhs_evaluations = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  IntegrationStats stats;
};

/// Variable-step, variable-order (1-2) BDF with modified Newton.
/// The state at t0 is returned as the first entry if t0 is an output time.
Trajectory integrate(const SemidiscreteSystem& system, double t0, const Eigen::VectorXd& y0,
                     const SolverConfig& config);

/// max |f_i(t0, y0)| over the algebraic rows (0 for pure ODEs).
double check_consistency(const SemidiscreteSystem& system, const Eigen::VectorXd& y0,
                         double t0);

/// Smallest-norm correction of y0 that zeroes the algebraic rows (Gauss-Newton
/// with the minimum-norm least-squares solve). Throws ConsistencyError if the
/// residual cannot be brought below `tol`.
Eigen::VectorXd make_consistent(const SemidiscreteSystem& system, const Eigen::VectorXd& y0,
                                double t0, double tol);

/// Columns t, y0, y1, ... (or a subset given by `columns`).
void write_csv(std::ostream& out, const Trajectory& traj,
               const std::vector<std::size_t>& columns = {});

}  // namespace rosenau
