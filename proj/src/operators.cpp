#include "rosenau/operators.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "rosenau/csv.hpp"
#include "rosenau/errors.hpp"
#include "rosenau/simd.hpp"

namespace rosenau {

namespace {

using Index = Eigen::Index;

simd::FillOp fill_op(Op op) {
  switch (op) {
    case Op::Identity:
      return simd::FillOp::Value;
    case Op::Dx:
      return simd::FillOp::DerivX;
    case Op::Dy:
      return simd::FillOp::DerivY;
    case Op::Dxxxx:
      return simd::FillOp::Fourth1d;
    case Op::Laplacian:
      return simd::FillOp::Laplacian;
    case Op::Biharmonic:
      return simd::FillOp::Biharmonic;
  }
  return simd::FillOp::Value;
}

// Families other than the IMQ only provide values and first derivatives.
double generic_entry(const Kernel& k, Op op, const Point& d, int dim) {
  switch (op) {
    case Op::Identity:
      return k.eval(std::hypot(d.x, d.y));
    case Op::Dx:
      return dim == 1 ? k.d1(d.x) : k.grad2(d.x, d.y)[0];
    case Op::Dy:
      return k.grad2(d.x, d.y)[1];
    case Op::Dxxxx:
      return k.d4(d.x);
    case Op::Laplacian:
      return k.laplacian2(d.x, d.y);
    case Op::Biharmonic:
      return k.biharmonic2(d.x, d.y);
  }
  return 0.0;
}

// Row j of the result is column j of Phi_L, i.e. L phi_j over all eval points.
void fill_transposed(const Kernel& kernel, int dim, Op op,
                     std::span<const double> cx, std::span<const double> cy,
                     std::span<const double> ex, std::span<const double> ey,
                     std::span<const Point> eval, DdMatrix& out, std::size_t col0) {
  const std::size_t m = ex.size();
  if (kernel.family() == KernelFamily::InverseMultiquadric) {
    const auto& kern = simd::table();
    const double e2 = kernel.epsilon() * kernel.epsilon();
    for (std::size_t j = 0; j < cx.size(); ++j) {
      kern.fill_imq(fill_op(op), e2, ex, dim == 2 ? ey : std::span<const double>{},
                    cx[j], cy[j], out.hi_row(j).subspan(col0, m));
    }
    return;
  }
  for (std::size_t j = 0; j < cx.size(); ++j) {
    auto row = out.hi_row(j).subspan(col0, m);
    for (std::size_t i = 0; i < m; ++i) {
      row[i] = generic_entry(kernel, op, {eval[i].x - cx[j], eval[i].y - cy[j]}, dim);
    }
  }
}

std::shared_ptr<const Eigen::MatrixXd> build_interpolation_matrix(const Kernel& kernel,
                                                            const NodeSet& nodes) {
  const std::size_t n = nodes.size();
  if (n == 0) throw InvalidArgument("CardinalBasis: empty node set");
  auto a = std::make_shared<Eigen::MatrixXd>(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const auto& p = nodes.point(i);
      const auto& q = nodes.point(j);
      double v;
      if (kernel.family() == KernelFamily::InverseMultiquadric) {
        const double dx = p.x - q.x, dy = p.y - q.y;
        const double e2 = kernel.epsilon() * kernel.epsilon();
        v = imq::phi(e2 * (dx * dx + dy * dy));
      } else {
        v = kernel.eval(std::hypot(p.x - q.x, p.y - q.y));
      }
      (*a)(static_cast<Index>(i), static_cast<Index>(j)) = v;
      (*a)(static_cast<Index>(j), static_cast<Index>(i)) = v;
    }
  }
  return a;
}

// IMQ interpolation matrix with entries rounded only at double-double
// precision. Offsets are formed exactly so that nearby nodes keep their
// full relative separation.
DdMatrix imq_matrix_dd(double epsilon, const NodeSet& nodes) {
  const std::size_t n = nodes.size();
  DdMatrix a(n, n);
  const dd::Real e2 = dd::two_prod(epsilon, epsilon);
  const dd::Real one{1.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const auto& p = nodes.point(i);
      const auto& q = nodes.point(j);
      const dd::Real dx = dd::two_sum(p.x, -q.x);
      const dd::Real dy = dd::two_sum(p.y, -q.y);
      const dd::Real r2 = dd::add(dd::mul(dx, dx), dd::mul(dy, dy));
      const dd::Real v = dd::div(one, dd::sqrt(dd::add(one, dd::mul(e2, r2))));
      a.set(i, j, v);
      a.set(j, i, v);
    }
  }
  return a;
}

}  // namespace

std::string_view to_string(Op op) {
  switch (op) {
    case Op::Identity:
      return "id";
    case Op::Dx:
      return "dx";
    case Op::Dy:
      return "dy";
    case Op::Dxxxx:
      return "dxxxx";
    case Op::Laplacian:
      return "laplacian";
    case Op::Biharmonic:
      return "biharmonic";
  }
  return "?";
}

const Eigen::MatrixXd& OperatorSet::psi(Op op) const {
  const auto& slot = psi_[index(op)];
  if (!slot) {
    throw InvalidArgument("OperatorSet: operator '" + std::string(to_string(op)) +
                          "' was not assembled");
  }
  return *slot;
}

CardinalBasis::CardinalBasis(const Kernel& kernel, const NodeSet& centers)
    : kernel_(kernel),
      centers_(centers),
      a_(build_interpolation_matrix(kernel, centers)),
      lu_(*a_) {
  rcond_ = lu_.singular() ? 0.0 : lu_.rcond();
  // Rounding the entries to double floors the estimate near 1e-19, so small
  // values are re-measured on the matrix rounded at double-double precision.
  if (rcond_ < kRecheckRcond && kernel.family() == KernelFamily::InverseMultiquadric) {
    const DdLu exact(imq_matrix_dd(kernel.epsilon(), centers));
    rcond_ = exact.singular() ? 0.0 : exact.rcond();
  }
  if (lu_.singular() || !(rcond_ >= kMinRcond)) {
    std::ostringstream msg;
    msg << "interpolation matrix is too ill-conditioned (rcond estimate " << rcond_
        << ", eps " << kernel.epsilon() << ", " << centers.size() << " nodes)";
    throw ConditioningError(msg.str(), rcond_);
  }
  for (const auto& p : centers_.points()) {
    cx_.push_back(p.x);
    cy_.push_back(p.y);
  }
}

void CardinalBasis::check_op(Op op) const {
  const int dim = centers_.dim();
  if (dim == 1 && (op == Op::Dy || op == Op::Laplacian || op == Op::Biharmonic)) {
    throw InvalidArgument("operator '" + std::string(to_string(op)) +
                          "' is not defined in 1D");
  }
  if (dim == 2 && op == Op::Dxxxx) {
    throw InvalidArgument("operator 'dxxxx' is only defined in 1D");
  }
}

Eigen::MatrixXd CardinalBasis::kernel_matrix(Op op, std::span<const Point> eval) const {
  check_op(op);
  std::vector<double> ex, ey;
  for (const auto& p : eval) {
    ex.push_back(p.x);
    ey.push_back(p.y);
  }
  DdMatrix t(centers_.size(), eval.size());
  fill_transposed(kernel_, centers_.dim(), op, cx_, cy_, ex, ey, eval, t, 0);
  return t.to_double().transpose();
}

OperatorSet CardinalBasis::evaluate(std::span<const Point> eval,
                                    std::span<const Op> ops) const {
  for (Op op : ops) check_op(op);
  const std::size_t n = centers_.size();
  const std::size_t m = eval.size();
  std::vector<double> ex, ey;
  for (const auto& p : eval) {
    ex.push_back(p.x);
    ey.push_back(p.y);
  }

  // All operators share one right-hand side block: A X = [Phi_L1^T ... Phi_Lk^T].
  DdMatrix rhs(n, m * ops.size());
  for (std::size_t k = 0; k < ops.size(); ++k) {
    fill_transposed(kernel_, centers_.dim(), ops[k], cx_, cy_, ex, ey, eval, rhs, k * m);
  }
  lu_.solve_in_place(rhs);
  const Eigen::MatrixXd x = rhs.to_double();

  OperatorSet out;
  out.rows_ = m;
  out.cols_ = n;
  out.rcond_ = lu_.rcond();
  out.a_ = a_;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    // A is symmetric, so Psi_L = (A^{-1} Phi_L^T)^T.
    out.psi_[OperatorSet::index(ops[k])] =
        x.middleCols(static_cast<Index>(k * m), static_cast<Index>(m)).transpose();
  }
  return out;
}

OperatorSet assemble(const Kernel& kernel, const NodeSet& nodes,
                     std::span<const Point> eval, std::span<const Op> ops) {
  return CardinalBasis(kernel, nodes).evaluate(eval, ops);
}

Eigen::MatrixXd normal_derivative(const OperatorSet& ops, std::span<const Point> normals) {
  const auto& dx = ops.psi(Op::Dx);
  if (static_cast<std::size_t>(dx.rows()) != normals.size()) {
    throw InvalidArgument("normal_derivative: one normal per evaluation point required");
  }
  if (!ops.has(Op::Dy)) return dx;
  const auto& dy = ops.psi(Op::Dy);
  Eigen::MatrixXd out(dx.rows(), dx.cols());
  for (Index i = 0; i < dx.rows(); ++i) {
    const auto& nv = normals[static_cast<std::size_t>(i)];
    out.row(i) = nv.x * dx.row(i) + nv.y * dy.row(i);
  }
  return out;
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  csv::Writer w(out);
  w.comment(std::to_string(m.rows()) + "," + std::to_string(m.cols()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) w.cell(m(i, j));
    w.end_row();
  }
}

}  // namespace rosenau
