#include "rosenau/rosenau.hpp"

#include <cmath>
#include <string>

#include "rosenau/errors.hpp"

namespace rosenau {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

namespace {

double sech(double z) { return 1.0 / std::cosh(z); }

void add_diagonal_wave_data(PdeInstance& p) {
  // Data of the travelling wave sech(x + y - t); the wave itself is not a
  // solution of the 2D problem.
  p.f0 = [](const Point& x) { return sech(x.x + x.y); };
  p.f1 = [](const Point& x, const Point&, double t) { return sech(x.x + x.y - t); };
  p.f2 = [](const Point& x, const Point& n, double t) {
    const double z = x.x + x.y - t;
    return -sech(z) * std::tanh(z) * (n.x + n.y);
  };
  p.f1_t = [](const Point& x, const Point&, double t) {
    const double z = x.x + x.y - t;
    return sech(z) * std::tanh(z);
  };
  p.f2_t = [](const Point& x, const Point& n, double t) {
    const double z = x.x + x.y - t;
    const double s = sech(z), th = std::tanh(z);
    return (s * s * s - s * th * th) * (n.x + n.y);
  };
}

PdeInstance cubic_quadratic_2d(std::string name) {
  PdeInstance p;
  p.name = std::move(name);
  p.dim = 2;
  p.alpha = [](const Point&, double) { return 1.0; };
  p.g = [](double u) { return u * u * u + u * u; };
  p.g_u = [](double u) { return 3.0 * u * u + 2.0 * u; };
  p.g_uu = [](double u) { return 6.0 * u + 2.0; };
  p.q = 2;
  add_diagonal_wave_data(p);
  return p;
}

std::vector<Op> advective_ops(int dim) {
  return dim == 1 ? std::vector<Op>{Op::Dx} : std::vector<Op>{Op::Dx, Op::Dy};
}

Op fourth_op(int dim) { return dim == 1 ? Op::Dxxxx : Op::Biharmonic; }

VectorXd map(const std::function<double(double)>& fn, const VectorXd& v) {
  VectorXd out(v.size());
  for (Index i = 0; i < v.size(); ++i) out(i) = fn(v(i));
  return out;
}

}  // namespace

PdeInstance park1d() {
  PdeInstance p;
  p.name = "park1d";
  p.dim = 1;
  p.alpha = [](const Point&, double) { return 0.5; };
  p.g = [](double u) {
    const double u2 = u * u;
    return 10.0 * u2 * u - 12.0 * u2 * u2 * u - 1.5 * u;
  };
  p.g_u = [](double u) {
    const double u2 = u * u;
    return -1.5 - 60.0 * u2 * u2 + 30.0 * u2;
  };
  p.g_uu = [](double u) { return 60.0 * u - 240.0 * u * u * u; };
  p.q = 4;
  p.f0 = [](const Point& x) { return sech(x.x); };
  p.exact = [](const Point& x, double t) { return sech(x.x - t); };
  p.f1 = [](const Point& x, const Point&, double t) { return sech(x.x - t); };
  // The second condition in 1D is u_x (not the outward normal derivative).
  p.f2 = [](const Point& x, const Point&, double t) {
    return sech(t - x.x) * std::tanh(t - x.x);
  };
  p.f1_t = [](const Point& x, const Point&, double t) {
    return -sech(t - x.x) * std::tanh(t - x.x);
  };
  p.f2_t = [](const Point& x, const Point&, double t) {
    const double s = sech(t - x.x), th = std::tanh(t - x.x);
    return s * s * s - s * th * th;
  };
  return p;
}

PdeInstance square2d() { return cubic_quadratic_2d("square2d"); }
PdeInstance starfish2d() { return cubic_quadratic_2d("starfish2d"); }

PdeInstance instance_by_name(std::string_view name) {
  if (name == "park1d") return park1d();
  if (name == "square2d") return square2d();
  if (name == "starfish2d") return starfish2d();
  throw InvalidArgument("unknown problem '" + std::string(name) +
                        "' (expected park1d, square2d or starfish2d)");
}

VectorXd divergence_form_2d(const PdeInstance& inst, const OperatorSet& ops, const VectorXd& s) {
  const VectorXd u = ops[Op::Identity] * s;
  const VectorXd d = ops[Op::Dx] * s + ops[Op::Dy] * s;
  return map(inst.g_u, u).cwiseProduct(d);
}

Method parse_method(std::string_view name) {
  if (name == "fictitious") return Method::Fictitious;
  if (name == "fictitious-dae") return Method::FictitiousDae;
  if (name == "resampling") return Method::Resampling;
  throw InvalidArgument("unknown method '" + std::string(name) +
                        "' (expected fictitious, fictitious-dae or resampling)");
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Fictitious:
      return "fictitious";
    case Method::FictitiousDae:
      return "fictitious-dae";
    case Method::Resampling:
      return "resampling";
  }
  return "?";
}

// ---- common ----------------------------------------------------------------

RosenauSystem::RosenauSystem(PdeInstance inst, NodeSet nodes, const Kernel& kernel)
    : inst_(std::move(inst)), nodes_(std::move(nodes)) {
  if (inst_.dim != nodes_.dim()) {
    throw InvalidArgument("problem '" + inst_.name + "' is " + std::to_string(inst_.dim) +
                          "D but the node set is " + std::to_string(nodes_.dim()) + "D");
  }
  basis_ = std::make_shared<CardinalBasis>(kernel, nodes_);
  interior_pts_ = nodes_.points_of(PointClass::Interior);
  boundary_pts_ = nodes_.points_of(PointClass::Boundary);
  boundary_normals_ = nodes_.boundary_normals();
  const auto ops = basis_->evaluate(boundary_pts_, advective_ops(inst_.dim));
  boundary_op_ = inst_.dim == 1 ? ops[Op::Dx] : normal_derivative(ops, boundary_normals_);
}

VectorXd RosenauSystem::alpha_at(std::span<const Point> points, double t) const {
  VectorXd a(static_cast<Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) a(static_cast<Index>(i)) = inst_.alpha(points[i], t);
  return a;
}

VectorXd RosenauSystem::boundary_data(const PdeInstance::BoundaryData& fn, double t) const {
  if (!fn) throw InvalidArgument("problem '" + inst_.name + "' lacks required boundary data");
  VectorXd v(static_cast<Index>(boundary_pts_.size()));
  for (std::size_t i = 0; i < boundary_pts_.size(); ++i) {
    v(static_cast<Index>(i)) = fn(boundary_pts_[i], boundary_normals_[i], t);
  }
  return v;
}

VectorXd RosenauSystem::f1(double t) const { return boundary_data(inst_.f1, t); }
VectorXd RosenauSystem::f2(double t) const { return boundary_data(inst_.f2, t); }
VectorXd RosenauSystem::f1_t(double t) const { return boundary_data(inst_.f1_t, t); }
VectorXd RosenauSystem::f2_t(double t) const { return boundary_data(inst_.f2_t, t); }

MatrixXd RosenauSystem::evaluation_matrix(std::span<const Point> points) const {
  return basis_->evaluate(points, {Op::Identity}).psi(Op::Identity);
}

VectorXd RosenauSystem::evaluate(double t, const VectorXd& y,
                                 std::span<const Point> points) const {
  return evaluation_matrix(points) * nodal_values(t, y);
}

BoundaryResidual RosenauSystem::boundary_residual(double t, const VectorXd& y) const {
  const VectorXd v = nodal_values(t, y);
  const VectorXd d = f1(t);
  BoundaryResidual r;
  for (std::size_t k = 0; k < nodes_.boundary_count(); ++k) {
    r.dirichlet = std::max(
        r.dirichlet, std::abs(v(static_cast<Index>(nodes_.boundary()[k])) - d(static_cast<Index>(k))));
  }
  r.neumann = (boundary_op_ * v - f2(t)).cwiseAbs().maxCoeff();
  return r;
}

// ---- fictitious, eliminated ------------------------------------------------------

FictitiousOdeSystem::FictitiousOdeSystem(PdeInstance inst, NodeSet nodes, const Kernel& kernel)
    : RosenauSystem(std::move(inst), std::move(nodes), kernel) {
  blocks_ = std::make_unique<BoundaryBlocks>(nodes_, boundary_op_);
  auto ops = advective_ops(inst_.dim);
  ops.push_back(fourth_op(inst_.dim));
  const auto raw = basis_->evaluate(interior_pts_, ops);
  modified_ = eliminate(nodes_, raw, *blocks_, ops);

  adv_ = modified_.tilde(Op::Dx);
  adv_c1_ = modified_.c1(Op::Dx);
  adv_c2_ = modified_.c2(Op::Dx);
  if (inst_.dim == 2) {
    adv_ += modified_.tilde(Op::Dy);
    adv_c1_ += modified_.c1(Op::Dy);
    adv_c2_ += modified_.c2(Op::Dy);
  }
  const Op f = fourth_op(inst_.dim);
  four_ = modified_.tilde(f);
  four_c1_ = modified_.c1(f);
  four_c2_ = modified_.c2(f);
  mass_ = mass(0.0);
}

MatrixXd FictitiousOdeSystem::mass(double t) const {
  if (inst_.alpha_constant && mass_.size() != 0) return mass_;
  const auto nd = static_cast<Index>(nodes_.interior_count());
  return MatrixXd::Identity(nd, nd) + alpha_at(interior_pts_, t).asDiagonal() * four_;
}

VectorXd FictitiousOdeSystem::forcing(double t, const VectorXd& s) const {
  return adv_ * s + adv_c1_ * f1(t) + adv_c2_ * f2(t);
}

VectorXd FictitiousOdeSystem::rhs(double t, const VectorXd& y) const {
  const VectorXd time_forcing = four_c1_ * f1_t(t) + four_c2_ * f2_t(t);
  return map(inst_.g_u, y).cwiseProduct(forcing(t, y)) -
         alpha_at(interior_pts_, t).cwiseProduct(time_forcing);
}

MatrixXd FictitiousOdeSystem::jacobian(double t, const VectorXd& y) const {
  MatrixXd j = map(inst_.g_u, y).asDiagonal() * adv_;
  j.diagonal() += map(inst_.g_uu, y).cwiseProduct(forcing(t, y));
  return j;
}

VectorXd FictitiousOdeSystem::initial_state(double) const {
  VectorXd s(static_cast<Index>(interior_pts_.size()));
  for (std::size_t i = 0; i < interior_pts_.size(); ++i) s(static_cast<Index>(i)) = inst_.f0(interior_pts_[i]);
  return s;
}

VectorXd FictitiousOdeSystem::nodal_values(double t, const VectorXd& y) const {
  return blocks_->reconstruct_full(y, f1(t), f2(t));
}

// ---- fictitious, DAE form ------------------------------------------------------------

FictitiousDaeSystem::FictitiousDaeSystem(PdeInstance inst, NodeSet nodes, const Kernel& kernel)
    : RosenauSystem(std::move(inst), std::move(nodes), kernel) {
  blocks_ = std::make_unique<BoundaryBlocks>(nodes_, boundary_op_);
  auto ops = advective_ops(inst_.dim);
  ops.push_back(fourth_op(inst_.dim));
  const auto raw = basis_->evaluate(interior_pts_, ops);
  adv_ = raw[Op::Dx];
  if (inst_.dim == 2) adv_ += raw[Op::Dy];
  four_ = raw[fourth_op(inst_.dim)];
  mass_ = mass(0.0);
}

MatrixXd FictitiousDaeSystem::mass(double t) const {
  if (inst_.alpha_constant && mass_.size() != 0) return mass_;
  const auto n = static_cast<Index>(nodes_.size());
  const auto nd = static_cast<Index>(nodes_.interior_count());
  MatrixXd m = MatrixXd::Zero(n, n);
  m.topRows(nd) = alpha_at(interior_pts_, t).asDiagonal() * four_;
  for (Index i = 0; i < nd; ++i) m(i, static_cast<Index>(nodes_.interior()[static_cast<std::size_t>(i)])) += 1.0;
  return m;
}

VectorXd FictitiousDaeSystem::rhs(double t, const VectorXd& y) const {
  const auto nd = static_cast<Index>(nodes_.interior_count());
  const auto nb = static_cast<Index>(nodes_.boundary_count());
  VectorXd out(y.size());
  const VectorXd sd = y.head(nd);
  out.head(nd) = map(inst_.g_u, sd).cwiseProduct(adv_ * y);
  out.segment(nd, nb) = y.segment(nd, nb) - f1(t);
  out.tail(nb) = boundary_op_ * y - f2(t);
  return out;
}

MatrixXd FictitiousDaeSystem::jacobian(double, const VectorXd& y) const {
  const auto n = static_cast<Index>(nodes_.size());
  const auto nd = static_cast<Index>(nodes_.interior_count());
  const auto nb = static_cast<Index>(nodes_.boundary_count());
  const VectorXd sd = y.head(nd);
  MatrixXd j = MatrixXd::Zero(n, n);
  j.topRows(nd) = map(inst_.g_u, sd).asDiagonal() * adv_;
  j.topLeftCorner(nd, nd).diagonal() += map(inst_.g_uu, sd).cwiseProduct(adv_ * y);
  j.block(nd, nd, nb, nb).setIdentity();
  j.bottomRows(nb) = boundary_op_;
  return j;
}

std::vector<std::size_t> FictitiousDaeSystem::algebraic_rows() const {
  std::vector<std::size_t> rows;
  for (std::size_t i = nodes_.interior_count(); i < nodes_.size(); ++i) rows.push_back(i);
  return rows;
}

VectorXd FictitiousDaeSystem::initial_state(double t0) const {
  VectorXd sd(static_cast<Index>(interior_pts_.size()));
  for (std::size_t i = 0; i < interior_pts_.size(); ++i) sd(static_cast<Index>(i)) = inst_.f0(interior_pts_[i]);
  return blocks_->reconstruct_full(sd, f1(t0), f2(t0));
}

// ---- resampling ------------------------------------------------------------------------

ResamplingDaeSystem::ResamplingDaeSystem(PdeInstance inst, NodeSet nodes, AuxiliarySet aux,
                                         const Kernel& kernel)
    : RosenauSystem(std::move(inst), std::move(nodes), kernel), aux_(std::move(aux)) {
  if (nodes_.fictitious_count() != 0) {
    throw InvalidArgument("resampling uses node sets without fictitious points");
  }
  const std::size_t expected = nodes_.size() - 2 * nodes_.boundary_count();
  if (nodes_.size() < 2 * nodes_.boundary_count() || aux_.size() != expected) {
    throw InvalidArgument("resampling needs N - 2 N_b = " + std::to_string(expected) +
                          " auxiliary points, got " + std::to_string(aux_.size()));
  }
  rows_.dirichlet = MatrixXd::Zero(static_cast<Index>(nodes_.boundary_count()),
                                   static_cast<Index>(nodes_.size()));
  for (std::size_t k = 0; k < nodes_.boundary_count(); ++k) {
    rows_.dirichlet(static_cast<Index>(k), static_cast<Index>(nodes_.boundary()[k])) = 1.0;
  }
  rows_.neumann = boundary_op_;

  auto ops = advective_ops(inst_.dim);
  ops.push_back(Op::Identity);
  ops.push_back(fourth_op(inst_.dim));
  resampled_ = basis_->evaluate(aux_.points, ops);
  adv_ = resampled_[Op::Dx];
  if (inst_.dim == 2) adv_ += resampled_[Op::Dy];
  mass_ = mass(0.0);
}

MatrixXd ResamplingDaeSystem::mass(double t) const {
  if (inst_.alpha_constant && mass_.size() != 0) return mass_;
  const auto n = static_cast<Index>(nodes_.size());
  const auto na = static_cast<Index>(aux_.size());
  MatrixXd m = MatrixXd::Zero(n, n);
  m.topRows(na) = resampled_[Op::Identity] +
                  alpha_at(aux_.points, t).asDiagonal() * resampled_[fourth_op(inst_.dim)];
  return m;
}

VectorXd ResamplingDaeSystem::rhs(double t, const VectorXd& y) const {
  const auto na = static_cast<Index>(aux_.size());
  const auto nb = static_cast<Index>(nodes_.boundary_count());
  VectorXd out(y.size());
  const VectorXd u = resampled_[Op::Identity] * y;
  out.head(na) = map(inst_.g_u, u).cwiseProduct(adv_ * y);
  out.segment(na, nb) = rows_.dirichlet * y - f1(t);
  out.tail(nb) = rows_.neumann * y - f2(t);
  return out;
}

MatrixXd ResamplingDaeSystem::jacobian(double, const VectorXd& y) const {
  const auto na = static_cast<Index>(aux_.size());
  const auto nb = static_cast<Index>(nodes_.boundary_count());
  const VectorXd u = resampled_[Op::Identity] * y;
  MatrixXd j(y.size(), y.size());
  j.topRows(na) = map(inst_.g_u, u).asDiagonal() * adv_ +
                  map(inst_.g_uu, u).cwiseProduct(adv_ * y).asDiagonal() * resampled_[Op::Identity];
  j.middleRows(na, nb) = rows_.dirichlet;
  j.bottomRows(nb) = rows_.neumann;
  return j;
}

std::vector<std::size_t> ResamplingDaeSystem::algebraic_rows() const {
  std::vector<std::size_t> rows;
  for (std::size_t i = aux_.size(); i < nodes_.size(); ++i) rows.push_back(i);
  return rows;
}

VectorXd ResamplingDaeSystem::initial_state(double t0) const {
  VectorXd y(static_cast<Index>(nodes_.size()));
  for (std::size_t i = 0; i < nodes_.size(); ++i) y(static_cast<Index>(i)) = inst_.f0(nodes_.point(i));
  return make_consistent(*this, y, t0, 1e-12);
}

std::unique_ptr<RosenauSystem> make_system(Method method, const PdeInstance& inst,
                                           const NodeSet& nodes, const Kernel& kernel,
                                           const std::optional<AuxiliarySet>& aux) {
  switch (method) {
    case Method::Fictitious:
      return std::make_unique<FictitiousOdeSystem>(inst, nodes, kernel);
    case Method::FictitiousDae:
      return std::make_unique<FictitiousDaeSystem>(inst, nodes, kernel);
    case Method::Resampling:
      if (!aux) throw InvalidArgument("resampling needs auxiliary points");
      return std::make_unique<ResamplingDaeSystem>(inst, nodes, *aux, kernel);
  }
  throw InvalidArgument("unknown method");
}

}  // namespace rosenau
