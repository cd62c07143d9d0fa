#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "rosenau/dd.hpp"

namespace rosenau {

/// Dense row-major matrix of double-double entries stored as separate hi/lo
/// planes so rows can be streamed through the SIMD kernels.
class DdMatrix {
 public:
  DdMatrix() = default;
  DdMatrix(std::size_t rows, std::size_t cols);

  static DdMatrix from_double(const Eigen::MatrixXd& m);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  dd::Real get(std::size_t i, std::size_t j) const {
    return {hi_[i * cols_ + j], lo_[i * cols_ + j]};
  }
  void set(std::size_t i, std::size_t j, dd::Real v) {
    hi_[i * cols_ + j] = v.hi;
    lo_[i * cols_ + j] = v.lo;
  }

  std::span<double> hi_row(std::size_t i) {
    return {hi_.data() + i * cols_, cols_};
  }
  std::span<double> lo_row(std::size_t i) {
    return {lo_.data() + i * cols_, cols_};
  }
  std::span<const double> hi_row(std::size_t i) const {
    return {hi_.data() + i * cols_, cols_};
  }
  std::span<const double> lo_row(std::size_t i) const {
    return {lo_.data() + i * cols_, cols_};
  }

  void swap_rows(std::size_t a, std::size_t b);

  /// Rounded to the nearest double.
  Eigen::MatrixXd to_double() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> hi_;
  std::vector<double> lo_;
};

/// LU factorization with partial pivoting carried out in double-double.
/// Used for the RBF interpolation matrix, whose condition number routinely
/// exceeds 1/eps_double at the shape parameters of interest.
class DdLu {
 public:
  explicit DdLu(const Eigen::MatrixXd& a);
  explicit DdLu(DdMatrix a);

  std::size_t size() const noexcept { return n_; }
  bool singular() const noexcept { return singular_; }

  /// Reciprocal condition number in the 1-norm (Hager/Higham estimate).
  double rcond() const noexcept { return rcond_; }

  /// Overwrites the n x m right-hand side block with A^{-1} B.
  void solve_in_place(DdMatrix& rhs) const;

  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

 private:
  std::vector<dd::Real> solve_vector(std::vector<dd::Real> b) const;
  std::vector<dd::Real> solve_transposed_vector(std::vector<dd::Real> b) const;
  double estimate_inverse_norm1() const;
  void factorize();

  std::size_t n_ = 0;
  DdMatrix lu_;
  std::vector<std::size_t> pivots_;
  bool singular_ = false;
  double rcond_ = 0.0;
};

/// Reciprocal 1-norm condition estimate of a square matrix.
double condition_estimate(const Eigen::MatrixXd& a);

}  // namespace rosenau
