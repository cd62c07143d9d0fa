#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "rosenau/boundary.hpp"
#include "rosenau/kernel.hpp"
#include "rosenau/nodes.hpp"
#include "rosenau/operators.hpp"
#include "rosenau/timestepper.hpp"

namespace rosenau {

/// u_t + alpha Lap^2 u_t = div g(u) with Dirichlet data f1 and a second
/// boundary condition f2 (normal derivative in 2D, u_x in 1D).
struct PdeInstance {
  using SpaceTime = std::function<double(const Point&, double)>;
  using BoundaryData = std::function<double(const Point& p, const Point& normal, double t)>;

  std::string name;
  int dim = 1;
  SpaceTime alpha;
  bool alpha_constant = true;
  std::function<double(double)> g, g_u, g_uu;
  int q = 1;  // g has degree q + 1
  std::function<double(const Point&)> f0;
  BoundaryData f1, f2, f1_t, f2_t;
  /// Present only when a closed-form solution is known.
  SpaceTime exact;
};

/// sech(x - t) on [-L, L] with g = 10u^3 - 12u^5 - 1.5u, alpha = 0.5.
PdeInstance park1d();
/// alpha = 1, g = u^3 + u^2, data from the diagonal wave sech(x + y - t).
PdeInstance square2d();
/// Same equation and data as square2d on the starfish domain.
PdeInstance starfish2d();
/// "park1d", "square2d" or "starfish2d".
PdeInstance instance_by_name(std::string_view name);

/// g_u(u) (u_x + u_y) with u = ops[Identity] S and the derivatives from the
/// Dx, Dy matrices of the same operator set.
Eigen::VectorXd divergence_form_2d(const PdeInstance& inst, const OperatorSet& ops,
                                   const Eigen::VectorXd& s);

enum class Method { Fictitious, FictitiousDae, Resampling };
Method parse_method(std::string_view name);
std::string_view to_string(Method m);

struct BoundaryResidual {
  double dirichlet = 0.0;
  double neumann = 0.0;
};

/// Common interface of the semidiscrete Rosenau systems.
class RosenauSystem : public SemidiscreteSystem {
 public:
  RosenauSystem(PdeInstance inst, NodeSet nodes, const Kernel& kernel);

  const PdeInstance& instance() const noexcept { return inst_; }
  const NodeSet& nodes() const noexcept { return nodes_; }
  const CardinalBasis& basis() const noexcept { return *basis_; }
  virtual Method method() const = 0;

  /// Consistent initial state built from f0 and the boundary data at t0.
  virtual Eigen::VectorXd initial_state(double t0) const = 0;

  /// Values at every node (interior, boundary, fictitious) for state y.
  virtual Eigen::VectorXd nodal_values(double t, const Eigen::VectorXd& y) const = 0;

  /// Interpolant of the state at arbitrary points.
  Eigen::VectorXd evaluate(double t, const Eigen::VectorXd& y,
                           std::span<const Point> points) const;
  Eigen::MatrixXd evaluation_matrix(std::span<const Point> points) const;

  /// Max-norm violation of both boundary conditions by the interpolant.
  BoundaryResidual boundary_residual(double t, const Eigen::VectorXd& y) const;

  /// Boundary data at the boundary nodes (in boundary order).
  Eigen::VectorXd f1(double t) const;
  Eigen::VectorXd f2(double t) const;
  Eigen::VectorXd f1_t(double t) const;
  Eigen::VectorXd f2_t(double t) const;

  bool constant_mass() const override { return inst_.alpha_constant; }
  bool has_jacobian() const override { return true; }

 protected:
  Eigen::VectorXd alpha_at(std::span<const Point> points, double t) const;
  Eigen::VectorXd boundary_data(const PdeInstance::BoundaryData& fn, double t) const;

  PdeInstance inst_;
  NodeSet nodes_;
  std::shared_ptr<CardinalBasis> basis_;
  std::vector<Point> interior_pts_, boundary_pts_, boundary_normals_;
  Eigen::MatrixXd boundary_op_;  // second boundary operator rows, N_b x N
};

/// Fictitious points eliminated; ODE in the interior unknowns only:
/// (I + A Psi~_4) S' = G_u(S)(Psi~_adv S + C1 F1 + C2 F2) - A (C1_4 F1' + C2_4 F2').
class FictitiousOdeSystem : public RosenauSystem {
 public:
  FictitiousOdeSystem(PdeInstance inst, NodeSet nodes, const Kernel& kernel);

  Method method() const override { return Method::Fictitious; }
  std::size_t size() const override { return nodes_.interior_count(); }
  Eigen::MatrixXd mass(double t) const override;
  Eigen::VectorXd rhs(double t, const Eigen::VectorXd& y) const override;
  Eigen::MatrixXd jacobian(double t, const Eigen::VectorXd& y) const override;
  std::vector<std::size_t> algebraic_rows() const override { return {}; }
  Eigen::VectorXd initial_state(double t0) const override;
  Eigen::VectorXd nodal_values(double t, const Eigen::VectorXd& y) const override;

  const BoundaryBlocks& blocks() const noexcept { return *blocks_; }
  const ModifiedOperator& modified() const noexcept { return modified_; }
  /// Psi~ of the advective operator (d/dx in 1D, d/dx + d/dy in 2D).
  const Eigen::MatrixXd& advective() const noexcept { return adv_; }
  /// Psi~ of the fourth-order operator.
  const Eigen::MatrixXd& fourth() const noexcept { return four_; }

 private:
  Eigen::VectorXd forcing(double t, const Eigen::VectorXd& s) const;

  std::unique_ptr<BoundaryBlocks> blocks_;
  ModifiedOperator modified_;
  Eigen::MatrixXd adv_, adv_c1_, adv_c2_;
  Eigen::MatrixXd four_, four_c1_, four_c2_;
  Eigen::MatrixXd mass_;
};

/// Fictitious points kept as unknowns; the boundary conditions are algebraic
/// rows of an index-1 DAE in (S_d, S_b, S_f).
class FictitiousDaeSystem : public RosenauSystem {
 public:
  FictitiousDaeSystem(PdeInstance inst, NodeSet nodes, const Kernel& kernel);

  Method method() const override { return Method::FictitiousDae; }
  std::size_t size() const override { return nodes_.size(); }
  Eigen::MatrixXd mass(double t) const override;
  Eigen::VectorXd rhs(double t, const Eigen::VectorXd& y) const override;
  Eigen::MatrixXd jacobian(double t, const Eigen::VectorXd& y) const override;
  std::vector<std::size_t> algebraic_rows() const override;
  Eigen::VectorXd initial_state(double t0) const override;
  Eigen::VectorXd nodal_values(double, const Eigen::VectorXd& y) const override { return y; }

 private:
  std::unique_ptr<BoundaryBlocks> blocks_;
  Eigen::MatrixXd adv_, four_;  // raw operators at the interior nodes
  Eigen::MatrixXd mass_;
};

/// Resampling: PDE collocated at auxiliary points, boundary conditions as
/// 2 N_b algebraic rows; unknowns are the nodal values (S_d, S_b).
class ResamplingDaeSystem : public RosenauSystem {
 public:
  ResamplingDaeSystem(PdeInstance inst, NodeSet nodes, AuxiliarySet aux, const Kernel& kernel);

  Method method() const override { return Method::Resampling; }
  std::size_t size() const override { return nodes_.size(); }
  Eigen::MatrixXd mass(double t) const override;
  Eigen::VectorXd rhs(double t, const Eigen::VectorXd& y) const override;
  Eigen::MatrixXd jacobian(double t, const Eigen::VectorXd& y) const override;
  std::vector<std::size_t> algebraic_rows() const override;
  /// f0 at the nodes, projected onto the boundary conditions.
  Eigen::VectorXd initial_state(double t0) const override;
  Eigen::VectorXd nodal_values(double, const Eigen::VectorXd& y) const override { return y; }

  const AuxiliarySet& auxiliary() const noexcept { return aux_; }
  const ConstraintRows& constraints() const noexcept { return rows_; }
  const OperatorSet& resampled() const noexcept { return resampled_; }

 private:
  AuxiliarySet aux_;
  ConstraintRows rows_;
  OperatorSet resampled_;
  Eigen::MatrixXd adv_;  // Psi^R_x (+ Psi^R_y)
  Eigen::MatrixXd mass_;
};

/// Builds the system for `method`. Node sets must match the method (with
/// fictitious points for the fictitious variants, without for resampling).
std::unique_ptr<RosenauSystem> make_system(Method method, const PdeInstance& inst,
                                           const NodeSet& nodes, const Kernel& kernel,
                                           const std::optional<AuxiliarySet>& aux = {});

}  // namespace rosenau
