#pragma once

#include <Eigen/Dense>
#include <array>
#include <initializer_list>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rosenau/dense_dd.hpp"
#include "rosenau/kernel.hpp"
#include "rosenau/nodes.hpp"

namespace rosenau {

/// Linear operators that can be applied to the interpolant.
/// Dxxxx is 1D only; Laplacian and Biharmonic are 2D only.
enum class Op { Identity, Dx, Dy, Dxxxx, Laplacian, Biharmonic };

inline constexpr std::size_t kOpCount = 6;

std::string_view to_string(Op op);

/// Interpolation matrices below this reciprocal condition estimate are
/// rejected. The solves run in double-double, so the cutoff sits near that
/// format's unit roundoff rather than double's.
inline constexpr double kMinRcond = 1e-30;

/// Below this estimate the condition number is recomputed from a kernel
/// matrix evaluated in double-double.
inline constexpr double kRecheckRcond = 1e-14;

/// Differentiation matrices Psi_L = Phi_L A^{-1} at one set of evaluation
/// points. Columns follow the node ordering (interior, boundary, fictitious).
class OperatorSet {
 public:
  OperatorSet() = default;

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double rcond() const noexcept { return rcond_; }

  bool has(Op op) const { return psi_[index(op)].has_value(); }
  /// Throws InvalidArgument when the operator was not requested.
  const Eigen::MatrixXd& psi(Op op) const;
  const Eigen::MatrixXd& operator[](Op op) const { return psi(op); }

  /// Interpolation matrix of the centres the operators were built from.
  const Eigen::MatrixXd& interpolation_matrix() const { return *a_; }

 private:
  friend class CardinalBasis;
  static std::size_t index(Op op) { return static_cast<std::size_t>(op); }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  double rcond_ = 0.0;
  std::shared_ptr<const Eigen::MatrixXd> a_;
  std::array<std::optional<Eigen::MatrixXd>, kOpCount> psi_;
};

/// Factored interpolation matrix for a fixed kernel and node set. Any number
/// of evaluation point sets can be served from one factorization.
class CardinalBasis {
 public:
  /// Throws ConditioningError when rcond(A) < kMinRcond.
  CardinalBasis(const Kernel& kernel, const NodeSet& centers);

  const Kernel& kernel() const noexcept { return kernel_; }
  const NodeSet& centers() const noexcept { return centers_; }
  const Eigen::MatrixXd& interpolation_matrix() const { return *a_; }
  /// Reciprocal 1-norm condition estimate of the interpolation matrix. Below
  /// kRecheckRcond it refers to the matrix with double-double entries.
  double rcond() const noexcept { return rcond_; }

  /// Phi_L: entry (i, j) is L applied to the kernel centred at node j,
  /// evaluated at eval[i].
  Eigen::MatrixXd kernel_matrix(Op op, std::span<const Point> eval) const;

  OperatorSet evaluate(std::span<const Point> eval, std::span<const Op> ops) const;
  OperatorSet evaluate(std::span<const Point> eval, std::initializer_list<Op> ops) const {
    return evaluate(eval, std::span<const Op>(ops.begin(), ops.size()));
  }

 private:
  void check_op(Op op) const;

  Kernel kernel_;
  NodeSet centers_;
  std::vector<double> cx_;
  std::vector<double> cy_;
  std::shared_ptr<const Eigen::MatrixXd> a_;
  DdLu lu_;
  double rcond_ = 0.0;
};

OperatorSet assemble(const Kernel& kernel, const NodeSet& nodes,
                     std::span<const Point> eval, std::span<const Op> ops);

/// Rows n_x Psi_x + n_y Psi_y, one per evaluation point; in 1D just Psi_x.
Eigen::MatrixXd normal_derivative(const OperatorSet& ops, std::span<const Point> normals);

/// Row-major dump with a "# rows,cols" comment line.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

}  // namespace rosenau
