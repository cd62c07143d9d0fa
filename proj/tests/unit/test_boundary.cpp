#include <doctest.h>

#include <random>
#include <vector>

#include "rosenau/boundary.hpp"
#include "rosenau/errors.hpp"

using namespace rosenau;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Setup {
  NodeSet nodes;
  CardinalBasis basis;
  OperatorSet at_boundary;
  MatrixXd neumann;

  Setup(NodeSet n, double eps)
      : nodes(std::move(n)),
        basis(Kernel(eps), nodes),
        at_boundary(basis.evaluate(nodes.points_of(PointClass::Boundary),
                                   nodes.dim() == 1 ? std::vector<Op>{Op::Identity, Op::Dx}
                                                    : std::vector<Op>{Op::Identity, Op::Dx, Op::Dy})),
        neumann(normal_derivative(at_boundary, nodes.boundary_normals())) {}
};

// Reconstruct-then-apply oracle: S_f from a plain full-pivot solve of the raw
// normal-derivative rows, raw operators applied to the full vector, compared
// with the eliminated operators. Differences are scaled by max(1, |raw|).
struct OracleResult {
  double neumann = 0.0;
  double dirichlet = 0.0;
  double consistency = 0.0;
};

OracleResult elimination_oracle(const Setup& s, const std::vector<Op>& tags, int draws) {
  const auto& n = s.nodes;
  const auto nd = static_cast<Index>(n.interior_count());
  const auto nb = static_cast<Index>(n.boundary_count());
  const BoundaryBlocks blocks = build_boundary_blocks(n, s.at_boundary);
  const auto at_interior = s.basis.evaluate(n.points_of(PointClass::Interior), tags);
  const ModifiedOperator mod = eliminate(n, at_interior, blocks, tags);

  const MatrixXd& B = s.neumann;
  const Eigen::FullPivLU<MatrixXd> bf(B.rightCols(nb));
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  OracleResult r;
  for (int d = 0; d < draws; ++d) {
    VectorXd sd(nd), f1(nb), f2(nb);
    for (auto& v : sd) v = u(rng);
    for (auto& v : f1) v = u(rng);
    for (auto& v : f2) v = u(rng);
    const VectorXd sf = bf.solve(f2 - B.leftCols(nd) * sd - B.middleCols(nd, nb) * f1);
    VectorXd full(n.size());
    full << sd, f1, sf;
    r.neumann = std::max(r.neumann, (B * full - f2).cwiseAbs().maxCoeff());
    r.dirichlet = std::max(r.dirichlet, (s.at_boundary[Op::Identity] * full - f1).cwiseAbs().maxCoeff());
    for (Op t : tags) {
      const VectorXd raw = at_interior[t] * full;
      const VectorXd got = mod.apply(t, sd, f1, f2);
      r.consistency = std::max(r.consistency, (raw - got).cwiseAbs().maxCoeff() /
                                                  std::max(1.0, raw.cwiseAbs().maxCoeff()));
    }
  }
  return r;
}

}  // namespace

TEST_CASE("1d blocks on five symmetric nodes") {
  const Setup s(uniform1d_fictitious(5, 1.0), 1.0);
  const BoundaryBlocks b = build_boundary_blocks(s.nodes, s.at_boundary);
  CHECK(b.Bf().rows() == 2);
  CHECK(b.Bf().cols() == 2);
  CHECK(b.Bd().cols() == 1);
  CHECK(b.Bb().cols() == 2);
  CHECK(b.Bf()(0, 0) == doctest::Approx(-b.Bf()(1, 1)).epsilon(1e-12));
  CHECK(b.Bf()(0, 1) == doctest::Approx(-b.Bf()(1, 0)).epsilon(1e-12));
  CHECK(b.rcond() > kMinBoundaryRcond);
}

TEST_CASE("block shapes") {
  const Setup s1(uniform1d_fictitious(12, 1.0), 2.0);
  const BoundaryBlocks b1 = build_boundary_blocks(s1.nodes, s1.at_boundary);
  CHECK(b1.Bd().rows() == 2);
  CHECK(b1.Bd().cols() == 12 - 4);
  CHECK(b1.Bb().cols() == 2);

  const Setup s2(square_grid(5, 1.0, 0.5), 1.5);
  const BoundaryBlocks b2 = build_boundary_blocks(s2.nodes, s2.at_boundary);
  CHECK(b2.Bf().rows() == 16);
  CHECK(b2.Bf().cols() == 16);
  CHECK(b2.Bd().cols() == 9);
}

TEST_CASE("identity tag is untouched by elimination") {
  const Setup s(uniform1d_fictitious(10, 1.0), 2.0);
  const BoundaryBlocks b = build_boundary_blocks(s.nodes, s.at_boundary);
  const std::vector<Op> tags = {Op::Identity};
  const auto at_interior = s.basis.evaluate(s.nodes.points_of(PointClass::Interior), tags);
  const ModifiedOperator m = eliminate(s.nodes, at_interior, b, tags);
  CHECK((m.tilde(Op::Identity) - MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(m.c1(Op::Identity).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(m.c2(Op::Identity).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("elimination against the reconstruction oracle") {
  SUBCASE("1d, N=30, eps = 0.08/h") {
    const Setup s(uniform1d_fictitious(30, 1.0), 0.08 / (2.0 / 27));
    const auto r = elimination_oracle(s, {Op::Dx, Op::Dxxxx}, 20);
    CHECK(r.neumann <= 1e-9);
    CHECK(r.dirichlet <= 1e-9);
    CHECK(r.consistency <= 1e-9);
  }
  SUBCASE("2d square, n=8") {
    const double h = 4.0 / 7.0;
    const Setup s(square_grid(8, 2.0, h), 0.8);
    const auto r = elimination_oracle(s, {Op::Dx, Op::Dy, Op::Biharmonic}, 20);
    CHECK(r.neumann <= 1e-9);
    CHECK(r.dirichlet <= 1e-9);
    CHECK(r.consistency <= 1e-9);
  }
  SUBCASE("starfish") {
    const Setup s(starfish_nodes(120, 30, 0.15), 2.0);
    const auto r = elimination_oracle(s, {Op::Dx, Op::Dy, Op::Biharmonic}, 5);
    CHECK(r.neumann <= 1e-9);
    CHECK(r.consistency <= 1e-9);
  }
}

TEST_CASE("fictitious values satisfy the boundary conditions") {
  const Setup s(square_grid(6, 1.0, 0.4), 1.2);
  const BoundaryBlocks b = build_boundary_blocks(s.nodes, s.at_boundary);
  const VectorXd sd = VectorXd::LinSpaced(16, -1.0, 1.0);
  const VectorXd f1 = VectorXd::Constant(20, 0.3);
  const VectorXd f2 = VectorXd::LinSpaced(20, 0.0, 2.0);
  const VectorXd full = b.reconstruct_full(sd, f1, f2);
  CHECK((s.neumann * full - f2).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((full.segment(16, 20) - f1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((full.tail(20) - b.fictitious_values(sd, f1, f2)).cwiseAbs().maxCoeff() == 0.0);
  const MatrixXd x = MatrixXd::Identity(20, 20);
  CHECK((b.solve_right(x) * b.Bf() - x).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("singular fictitious block is rejected") {
  const NodeSet n = uniform1d_fictitious(8, 1.0);
  try {
    BoundaryBlocks b(n, MatrixXd::Zero(2, 8));
    FAIL("expected BoundaryEliminationError");
  } catch (const BoundaryEliminationError& e) {
    CHECK(e.rcond() < kMinBoundaryRcond);
  }
  CHECK_THROWS_AS(BoundaryBlocks(n, MatrixXd::Zero(3, 8)), InvalidArgument);
}

TEST_CASE("constraint rows") {
  SUBCASE("1d selector and exact derivatives") {
    const double eps = 1.5;
    const NodeSet n = uniform1d(12, 1.0);
    const CardinalBasis basis(Kernel(eps), n);
    const auto bp = n.points_of(PointClass::Boundary);
    const ConstraintRows rows = build_constraint_rows(n, basis.evaluate(bp, {Op::Dx}));
    CHECK(rows.count() == 4);

    VectorXd v = VectorXd::Zero(12);
    v(static_cast<Index>(n.boundary()[0])) = 3.0;
    v(static_cast<Index>(n.boundary()[1])) = -7.0;
    const VectorXd sel = rows.dirichlet * v;
    CHECK(sel(0) == 3.0);
    CHECK(sel(1) == -7.0);

    // Samples of the kernel centred at node k: the Neumann rows return the
    // analytic x-derivative at the two boundary points.
    const Kernel k(eps);
    for (std::size_t c = 0; c < n.size(); ++c) {
      VectorXd data(12);
      for (std::size_t i = 0; i < n.size(); ++i) {
        data(static_cast<Index>(i)) = k.eval(std::abs(n.point(i).x - n.point(c).x));
      }
      const VectorXd got = rows.neumann * data;
      for (std::size_t j = 0; j < 2; ++j) {
        const double want = k.d1(bp[j].x - n.point(c).x);
        CHECK(got(static_cast<Index>(j)) == doctest::Approx(want).epsilon(1e-9).scale(1.0));
      }
    }
  }
  SUBCASE("starfish normal rows") {
    const NodeSet n = starfish_nodes(60, 20);
    const CardinalBasis basis(Kernel(2.0), n);
    const auto bp = n.points_of(PointClass::Boundary);
    const auto ops = basis.evaluate(bp, {Op::Dx, Op::Dy});
    const ConstraintRows rows = build_constraint_rows(n, ops);
    CHECK(rows.count() == 40);
    const auto normals = n.boundary_normals();
    for (std::size_t k = 0; k < bp.size(); ++k) {
      const auto r = static_cast<Index>(k);
      const Eigen::RowVectorXd want = normals[k].x * ops[Op::Dx].row(r) + normals[k].y * ops[Op::Dy].row(r);
      CHECK((rows.neumann.row(r) - want).cwiseAbs().maxCoeff() <= 1e-15 * want.cwiseAbs().maxCoeff());
    }
  }
  SUBCASE("full row rank on the shipped configurations") {
    struct Config {
      NodeSet nodes;
      double eps;
    };
    std::vector<Config> configs;
    configs.push_back({uniform1d(30, 1.0), 0.08 / (2.0 / 29)});
    configs.push_back({uniform1d(100, 10.0), 0.08 / (20.0 / 99)});
    configs.push_back({square_resampling_nodes(25, 2.0, default_resampling_boundary(25)), 0.8});
    configs.push_back({square_resampling_nodes(10, 2.0, default_resampling_boundary(10)), 0.8});
    configs.push_back({starfish_nodes(253, 56), 1.5});
    for (const auto& c : configs) {
      const CardinalBasis basis(Kernel(c.eps), c.nodes);
      const auto bp = c.nodes.points_of(PointClass::Boundary);
      const auto ops = c.nodes.dim() == 1 ? basis.evaluate(bp, {Op::Dx}) : basis.evaluate(bp, {Op::Dx, Op::Dy});
      const ConstraintRows rows = build_constraint_rows(c.nodes, ops);
      CHECK(rows.count() == 2 * c.nodes.boundary_count());
      const Eigen::JacobiSVD<MatrixXd> svd(rows.stacked());
      CHECK(svd.singularValues().minCoeff() > 1e-10);
    }
  }
  CHECK_THROWS_AS(
      [] {
        const NodeSet n = uniform1d_fictitious(8, 1.0);
        const CardinalBasis basis(Kernel(2.0), n);
        build_constraint_rows(n, basis.evaluate(n.points_of(PointClass::Boundary), {Op::Dx}));
      }(),
      InvalidArgument);
}
