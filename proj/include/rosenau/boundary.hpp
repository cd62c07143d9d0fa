#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <span>

#include "rosenau/nodes.hpp"
#include "rosenau/operators.hpp"

namespace rosenau {

/// B_f must be at least this well conditioned (reciprocal 1-norm estimate).
inline constexpr double kMinBoundaryRcond = 1e-13;

/// Normal-derivative cardinal rows at the boundary points, split by column
/// class: B = (B_d B_b B_f).
class BoundaryBlocks {
 public:
  /// `neumann_rows` has one row per boundary point and one column per node of
  /// `nodes`, which must contain as many fictitious as boundary points.
  BoundaryBlocks(const NodeSet& nodes, const Eigen::MatrixXd& neumann_rows);

  const Eigen::MatrixXd& Bd() const noexcept { return bd_; }
  const Eigen::MatrixXd& Bb() const noexcept { return bb_; }
  const Eigen::MatrixXd& Bf() const noexcept { return bf_; }
  const Eigen::MatrixXd& rows() const noexcept { return rows_; }
  double rcond() const noexcept { return rcond_; }

  /// B_f^{-1} X
  Eigen::MatrixXd solve(const Eigen::MatrixXd& x) const { return lu_.solve(x); }
  /// X B_f^{-1}
  Eigen::MatrixXd solve_right(const Eigen::MatrixXd& x) const;

  /// Fictitious values making the interpolant satisfy both boundary
  /// conditions: S_f = B_f^{-1} (F2 - B_d S_d - B_b F1).
  Eigen::VectorXd fictitious_values(const Eigen::VectorXd& sd, const Eigen::VectorXd& f1,
                                    const Eigen::VectorXd& f2) const;

  /// Full nodal vector (S_d, F1, S_f) in node order.
  Eigen::VectorXd reconstruct_full(const Eigen::VectorXd& sd, const Eigen::VectorXd& f1,
                                   const Eigen::VectorXd& f2) const;

 private:
  Eigen::MatrixXd rows_, bd_, bb_, bf_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_t_;  // of B_f^T
  double rcond_ = 0.0;
};

/// Builds the blocks from an operator set evaluated at the boundary points
/// with Dx (and Dy in 2D). 1D uses d/dx as the second boundary operator.
BoundaryBlocks build_boundary_blocks(const NodeSet& nodes, const OperatorSet& at_boundary);

/// Operators with the fictitious unknowns eliminated:
///   Psi_L S = PsiTilde_L S_d + C1_L F1 + C2_L F2.
class ModifiedOperator {
 public:
  bool has(Op op) const { return tilde_[idx(op)].has_value(); }
  const Eigen::MatrixXd& tilde(Op op) const;
  const Eigen::MatrixXd& c1(Op op) const;
  const Eigen::MatrixXd& c2(Op op) const;

  /// PsiTilde_L S_d + C1_L F1 + C2_L F2
  Eigen::VectorXd apply(Op op, const Eigen::VectorXd& sd, const Eigen::VectorXd& f1,
                        const Eigen::VectorXd& f2) const;

 private:
  friend ModifiedOperator eliminate(const NodeSet&, const OperatorSet&,
                                    const BoundaryBlocks&, std::span<const Op>);
  static std::size_t idx(Op op) { return static_cast<std::size_t>(op); }

  std::array<std::optional<Eigen::MatrixXd>, kOpCount> tilde_, c1_, c2_;
};

/// `at_interior` holds the raw operators evaluated at the interior nodes.
ModifiedOperator eliminate(const NodeSet& nodes, const OperatorSet& at_interior,
                           const BoundaryBlocks& blocks, std::span<const Op> ops);

/// Boundary conditions of the resampling method as 2 N_b algebraic rows:
/// a selector of the boundary unknowns stacked over the Neumann rows.
struct ConstraintRows {
  Eigen::MatrixXd dirichlet;  // N_b x N
  Eigen::MatrixXd neumann;    // N_b x N

  std::size_t count() const noexcept {
    return static_cast<std::size_t>(dirichlet.rows() + neumann.rows());
  }
  /// (dirichlet; neumann) as one matrix.
  Eigen::MatrixXd stacked() const;
};

/// `nodes` must have no fictitious points; `at_boundary` is evaluated at the
/// boundary points with Dx (and Dy in 2D).
ConstraintRows build_constraint_rows(const NodeSet& nodes, const OperatorSet& at_boundary);

}  // namespace rosenau
