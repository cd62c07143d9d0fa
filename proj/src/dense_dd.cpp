#include "rosenau/dense_dd.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "rosenau/errors.hpp"
#include "rosenau/simd.hpp"

namespace rosenau {

DdMatrix::DdMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), hi_(rows * cols, 0.0), lo_(rows * cols, 0.0) {}

DdMatrix DdMatrix::from_double(const Eigen::MatrixXd& m) {
  DdMatrix out(static_cast<std::size_t>(m.rows()),
               static_cast<std::size_t>(m.cols()));
  for (std::size_t i = 0; i < out.rows_; ++i) {
    for (std::size_t j = 0; j < out.cols_; ++j) {
      out.hi_[i * out.cols_ + j] = m(static_cast<Eigen::Index>(i),
                                     static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

void DdMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(hi_.begin() + a * cols_, hi_.begin() + (a + 1) * cols_,
                   hi_.begin() + b * cols_);
  std::swap_ranges(lo_.begin() + a * cols_, lo_.begin() + (a + 1) * cols_,
                   lo_.begin() + b * cols_);
}

Eigen::MatrixXd DdMatrix::to_double() const {
  Eigen::MatrixXd out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const std::size_t k = i * cols_ + j;
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          hi_[k] + lo_[k];
    }
  }
  return out;
}

DdLu::DdLu(const Eigen::MatrixXd& a) : n_(static_cast<std::size_t>(a.rows())) {
  if (a.rows() != a.cols()) {
    throw InvalidArgument("DdLu: matrix must be square");
  }
  lu_ = DdMatrix::from_double(a);
  factorize();
}

DdLu::DdLu(DdMatrix a) : n_(a.rows()), lu_(std::move(a)) {
  if (lu_.rows() != lu_.cols()) {
    throw InvalidArgument("DdLu: matrix must be square");
  }
  factorize();
}

void DdLu::factorize() {
  // 1-norm of the input, taken before the factors overwrite it.
  double norm1 = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n_; ++i) col += dd::abs_hi(lu_.get(i, j));
    norm1 = std::max(norm1, col);
  }
  pivots_.resize(n_);
  const auto& kern = simd::table();

  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t p = k;
    double best = dd::abs_hi(lu_.get(k, k));
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double v = dd::abs_hi(lu_.get(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    pivots_[k] = p;
    if (best == 0.0) {
      singular_ = true;
      continue;
    }
    lu_.swap_rows(k, p);
    const dd::Real pivot = lu_.get(k, k);
    const std::size_t tail = n_ - k - 1;
    if (tail == 0) continue;
    const auto src_hi = lu_.hi_row(k).subspan(k + 1, tail);
    const auto src_lo = lu_.lo_row(k).subspan(k + 1, tail);
    for (std::size_t i = k + 1; i < n_; ++i) {
      const dd::Real l = dd::div(lu_.get(i, k), pivot);
      lu_.set(i, k, l);
      if (l.hi == 0.0) continue;
      kern.dd_fnms(l.hi, l.lo, src_hi, src_lo,
                   lu_.hi_row(i).subspan(k + 1, tail),
                   lu_.lo_row(i).subspan(k + 1, tail));
    }
  }

  if (singular_) {
    rcond_ = 0.0;
    return;
  }
  const double inv_norm1 = estimate_inverse_norm1();
  rcond_ = (norm1 > 0.0 && inv_norm1 > 0.0) ? 1.0 / (norm1 * inv_norm1) : 0.0;
}

void DdLu::solve_in_place(DdMatrix& rhs) const {
  if (rhs.rows() != n_) {
    throw InvalidArgument("DdLu::solve: right-hand side has wrong row count");
  }
  if (singular_) {
    throw ConditioningError("DdLu::solve: matrix is exactly singular", 0.0);
  }
  for (std::size_t k = 0; k < n_; ++k) rhs.swap_rows(k, pivots_[k]);

  const auto& kern = simd::table();
  const std::size_t m = rhs.cols();
  // Column blocks keep the active panel of the right-hand side cache resident.
  constexpr std::size_t kBlock = 128;
  for (std::size_t c0 = 0; c0 < m; c0 += kBlock) {
    const std::size_t w = std::min(kBlock, m - c0);
    auto hi = [&](std::size_t i) { return rhs.hi_row(i).subspan(c0, w); };
    auto lo = [&](std::size_t i) { return rhs.lo_row(i).subspan(c0, w); };

    for (std::size_t i = 1; i < n_; ++i) {
      for (std::size_t k = 0; k < i; ++k) {
        const dd::Real l = lu_.get(i, k);
        if (l.hi == 0.0) continue;
        kern.dd_fnms(l.hi, l.lo, hi(k), lo(k), hi(i), lo(i));
      }
    }
    for (std::size_t ii = n_; ii-- > 0;) {
      for (std::size_t k = ii + 1; k < n_; ++k) {
        const dd::Real u = lu_.get(ii, k);
        if (u.hi == 0.0) continue;
        kern.dd_fnms(u.hi, u.lo, hi(k), lo(k), hi(ii), lo(ii));
      }
      const dd::Real d = lu_.get(ii, ii);
      auto row_hi = hi(ii);
      auto row_lo = lo(ii);
      for (std::size_t j = 0; j < w; ++j) {
        const dd::Real q = dd::div({row_hi[j], row_lo[j]}, d);
        row_hi[j] = q.hi;
        row_lo[j] = q.lo;
      }
    }
  }
}

Eigen::MatrixXd DdLu::solve(const Eigen::MatrixXd& rhs) const {
  DdMatrix b = DdMatrix::from_double(rhs);
  solve_in_place(b);
  return b.to_double();
}

std::vector<dd::Real> DdLu::solve_vector(std::vector<dd::Real> b) const {
  for (std::size_t k = 0; k < n_; ++k) std::swap(b[k], b[pivots_[k]]);
  for (std::size_t i = 1; i < n_; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] = dd::fnms(b[i], lu_.get(i, k), b[k]);
  }
  for (std::size_t i = n_; i-- > 0;) {
    for (std::size_t k = i + 1; k < n_; ++k) {
      b[i] = dd::fnms(b[i], lu_.get(i, k), b[k]);
    }
    b[i] = dd::div(b[i], lu_.get(i, i));
  }
  return b;
}

// Solves A^T z = b with P A = L U, i.e. U^T L^T P z = b.
std::vector<dd::Real> DdLu::solve_transposed_vector(std::vector<dd::Real> b) const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] = dd::fnms(b[i], lu_.get(k, i), b[k]);
    b[i] = dd::div(b[i], lu_.get(i, i));
  }
  for (std::size_t i = n_; i-- > 0;) {
    for (std::size_t k = i + 1; k < n_; ++k) {
      b[i] = dd::fnms(b[i], lu_.get(k, i), b[k]);
    }
  }
  for (std::size_t k = n_; k-- > 0;) std::swap(b[k], b[pivots_[k]]);
  return b;
}

double DdLu::estimate_inverse_norm1() const {
  if (n_ == 0) return 0.0;
  auto norm1 = [](const std::vector<dd::Real>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::fabs(dd::to_double(x));
    return s;
  };

  // Hager's power iteration on ||A^{-1} x||_1 over the unit 1-ball.
  std::vector<dd::Real> x(n_, dd::Real{1.0 / static_cast<double>(n_), 0.0});
  double estimate = 0.0;
  std::size_t last_j = n_;
  for (int iter = 0; iter < 5; ++iter) {
    const auto y = solve_vector(x);
    estimate = std::max(estimate, norm1(y));
    std::vector<dd::Real> sign(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      sign[i] = dd::Real{dd::to_double(y[i]) >= 0.0 ? 1.0 : -1.0, 0.0};
    }
    const auto z = solve_transposed_vector(sign);
    std::size_t j = 0;
    double zmax = -1.0;
    double ztx = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double zi = dd::to_double(z[i]);
      ztx += zi * dd::to_double(x[i]);
      if (std::fabs(zi) > zmax) {
        zmax = std::fabs(zi);
        j = i;
      }
    }
    if (zmax <= ztx || j == last_j) break;
    last_j = j;
    std::fill(x.begin(), x.end(), dd::Real{});
    x[j] = dd::Real{1.0, 0.0};
  }

  // Higham's alternating test vector guards against Hager's failure cases.
  std::vector<dd::Real> alt(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double mag =
        1.0 + (n_ > 1 ? static_cast<double>(i) / static_cast<double>(n_ - 1) : 0.0);
    alt[i] = dd::Real{(i % 2 == 0) ? mag : -mag, 0.0};
  }
  const double alt_est =
      2.0 * norm1(solve_vector(alt)) / (3.0 * static_cast<double>(n_));
  return std::max(estimate, alt_est);
}

double condition_estimate(const Eigen::MatrixXd& a) {
  return DdLu(a).rcond();
}

}  // namespace rosenau
