#include "rosenau/boundary.hpp"

#include <sstream>
#include <string>

#include "rosenau/errors.hpp"

namespace rosenau {

namespace {

using Index = Eigen::Index;

Eigen::MatrixXd columns(const Eigen::MatrixXd& m, std::span<const std::size_t> cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    out.col(static_cast<Index>(k)) = m.col(static_cast<Index>(cols[k]));
  }
  return out;
}

Eigen::MatrixXd boundary_operator(const NodeSet& nodes, const OperatorSet& at_boundary) {
  if (at_boundary.rows() != nodes.boundary_count() || at_boundary.cols() != nodes.size()) {
    throw InvalidArgument("boundary operator set must have one row per boundary point "
                          "and one column per node");
  }
  if (nodes.dim() == 1) return at_boundary.psi(Op::Dx);
  return normal_derivative(at_boundary, nodes.boundary_normals());
}

}  // namespace

BoundaryBlocks::BoundaryBlocks(const NodeSet& nodes, const Eigen::MatrixXd& neumann_rows)
    : rows_(neumann_rows) {
  const std::size_t nb = nodes.boundary_count();
  if (nodes.fictitious_count() != nb) {
    throw InvalidArgument("fictitious-point elimination needs one fictitious point per "
                          "boundary point");
  }
  if (static_cast<std::size_t>(neumann_rows.rows()) != nb ||
      static_cast<std::size_t>(neumann_rows.cols()) != nodes.size()) {
    throw InvalidArgument("BoundaryBlocks: rows must be N_b x N");
  }
  bd_ = columns(neumann_rows, nodes.interior());
  bb_ = columns(neumann_rows, nodes.boundary());
  bf_ = columns(neumann_rows, nodes.fictitious());
  lu_.compute(bf_);
  lu_t_.compute(bf_.transpose());
  rcond_ = lu_.rcond();
  if (!(rcond_ > kMinBoundaryRcond)) {
    std::ostringstream msg;
    msg << "fictitious-point block B_f is singular to working precision (rcond " << rcond_
        << ")";
    throw BoundaryEliminationError(msg.str(), rcond_);
  }
}

Eigen::MatrixXd BoundaryBlocks::solve_right(const Eigen::MatrixXd& x) const {
  // X B_f^{-1} = (B_f^{-T} X^T)^T
  return lu_t_.solve(x.transpose()).transpose();
}

Eigen::VectorXd BoundaryBlocks::fictitious_values(const Eigen::VectorXd& sd,
                                                  const Eigen::VectorXd& f1,
                                                  const Eigen::VectorXd& f2) const {
  return lu_.solve(f2 - bd_ * sd - bb_ * f1);
}

Eigen::VectorXd BoundaryBlocks::reconstruct_full(const Eigen::VectorXd& sd,
                                                 const Eigen::VectorXd& f1,
                                                 const Eigen::VectorXd& f2) const {
  Eigen::VectorXd full(sd.size() + f1.size() + bf_.cols());
  full << sd, f1, fictitious_values(sd, f1, f2);
  return full;
}

BoundaryBlocks build_boundary_blocks(const NodeSet& nodes, const OperatorSet& at_boundary) {
  return BoundaryBlocks(nodes, boundary_operator(nodes, at_boundary));
}

const Eigen::MatrixXd& ModifiedOperator::tilde(Op op) const {
  if (!has(op)) throw InvalidArgument("ModifiedOperator: operator not eliminated");
  return *tilde_[idx(op)];
}

const Eigen::MatrixXd& ModifiedOperator::c1(Op op) const {
  if (!has(op)) throw InvalidArgument("ModifiedOperator: operator not eliminated");
  return *c1_[idx(op)];
}

const Eigen::MatrixXd& ModifiedOperator::c2(Op op) const {
  if (!has(op)) throw InvalidArgument("ModifiedOperator: operator not eliminated");
  return *c2_[idx(op)];
}

Eigen::VectorXd ModifiedOperator::apply(Op op, const Eigen::VectorXd& sd,
                                        const Eigen::VectorXd& f1,
                                        const Eigen::VectorXd& f2) const {
  return tilde(op) * sd + c1(op) * f1 + c2(op) * f2;
}

ModifiedOperator eliminate(const NodeSet& nodes, const OperatorSet& at_interior,
                           const BoundaryBlocks& blocks, std::span<const Op> ops) {
  const auto nd = static_cast<Index>(nodes.interior_count());
  const auto nb = static_cast<Index>(nodes.boundary_count());
  if (static_cast<Index>(at_interior.rows()) != nd ||
      at_interior.cols() != nodes.size()) {
    throw InvalidArgument("eliminate: operators must be evaluated at the interior nodes");
  }
  // B_f^{-1} (B_d B_b), shared by every operator.
  Eigen::MatrixXd rhs(nb, nd + nb);
  rhs << blocks.Bd(), blocks.Bb();
  const Eigen::MatrixXd x = blocks.solve(rhs);

  ModifiedOperator out;
  for (Op op : ops) {
    const auto i = ModifiedOperator::idx(op);
    if (op == Op::Identity) {
      // Cardinal functions vanish at the other nodes, so this is exact.
      out.tilde_[i] = Eigen::MatrixXd::Identity(nd, nd);
      out.c1_[i] = Eigen::MatrixXd::Zero(nd, nb);
      out.c2_[i] = Eigen::MatrixXd::Zero(nd, nb);
      continue;
    }
    const auto& psi = at_interior.psi(op);
    const Eigen::MatrixXd pd = columns(psi, nodes.interior());
    const Eigen::MatrixXd pb = columns(psi, nodes.boundary());
    const Eigen::MatrixXd pf = columns(psi, nodes.fictitious());
    out.tilde_[i] = pd - pf * x.leftCols(nd);
    out.c1_[i] = pb - pf * x.rightCols(nb);
    out.c2_[i] = blocks.solve_right(pf);
  }
  return out;
}

Eigen::MatrixXd ConstraintRows::stacked() const {
  Eigen::MatrixXd out(dirichlet.rows() + neumann.rows(), dirichlet.cols());
  out << dirichlet, neumann;
  return out;
}

ConstraintRows build_constraint_rows(const NodeSet& nodes, const OperatorSet& at_boundary) {
  if (nodes.fictitious_count() != 0) {
    throw InvalidArgument("constraint rows are built on node sets without fictitious points");
  }
  ConstraintRows rows;
  const auto nb = static_cast<Index>(nodes.boundary_count());
  rows.dirichlet = Eigen::MatrixXd::Zero(nb, static_cast<Index>(nodes.size()));
  for (Index k = 0; k < nb; ++k) {
    rows.dirichlet(k, static_cast<Index>(nodes.boundary()[static_cast<std::size_t>(k)])) = 1.0;
  }
  rows.neumann = boundary_operator(nodes, at_boundary);
  return rows;
}

}  // namespace rosenau
