#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "rosenau/errors.hpp"
#include "rosenau/nodes.hpp"

using namespace rosenau;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> xs(std::span<const Point> pts) {
  std::vector<double> v;
  for (const auto& p : pts) v.push_back(p.x);
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<double> xs_of(const NodeSet& n, PointClass c) {
  const auto pts = n.points_of(c);
  return xs(pts);
}

double norm(const Point& p) { return std::hypot(p.x, p.y); }

// Outward normal from the parametrised curve by central differences of the
// tangent, independent of the closed form in the library.
Point fd_normal(double theta) {
  auto curve = [](double t) {
    const double r = 1.0 + 0.07 * (std::sin(6 * t) + std::sin(3 * t));
    return Point{r * std::cos(t), r * std::sin(t)};
  };
  const double h = 1e-5;
  const Point a = curve(theta + h), b = curve(theta - h);
  Point n{(a.y - b.y), -(a.x - b.x)};  // tangent rotated clockwise
  const double len = norm(n);
  return {n.x / len, n.y / len};
}

}  // namespace

TEST_CASE("1d fictitious layout") {
  const NodeSet n = uniform1d_fictitious(5, 1.0);
  CHECK(n.dim() == 1);
  CHECK(n.size() == 5);
  const auto all = xs(n.points());
  const std::vector<double> want = {-2, -1, 0, 1, 2};
  for (int i = 0; i < 5; ++i) CHECK(all[i] == doctest::Approx(want[i]).epsilon(1e-15));
  CHECK(xs_of(n, PointClass::Fictitious) == std::vector<double>{-2.0, 2.0});
  CHECK(xs_of(n, PointClass::Boundary) == std::vector<double>{-1.0, 1.0});
  CHECK(xs_of(n, PointClass::Interior).size() == 1);

  // Boundary points sit on +-L for any N and L.
  for (int N : {7, 20, 101}) {
    const auto b = xs_of(uniform1d_fictitious(N, 10.0), PointClass::Boundary);
    CHECK(b[0] == doctest::Approx(-10.0).epsilon(1e-14));
    CHECK(b[1] == doctest::Approx(10.0).epsilon(1e-14));
  }
}

TEST_CASE("1d boundary normals point outward") {
  const NodeSet n = uniform1d_fictitious(9, 2.0);
  for (auto i : n.boundary()) CHECK(n.normal(i).x * n.point(i).x > 0.0);
}

TEST_CASE("1d resampling points") {
  const auto a7 = xs(auxiliary1d(7, 1.0).points);
  REQUIRE(a7.size() == 3);
  CHECK(a7[0] == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(a7[1]) < 1e-15);
  CHECK(a7[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  const auto a6 = xs(auxiliary1d(6, 1.0).points);
  REQUIRE(a6.size() == 2);
  CHECK(a6[0] == doctest::Approx(-a6[1]).epsilon(1e-14));

  for (int N : {8, 30, 100}) {
    const auto a = xs(auxiliary1d(N, 10.0).points);
    CHECK(a.size() == static_cast<std::size_t>(N - 4));
    CHECK(a.front() > -10.0);
    CHECK(a.back() < 10.0);
  }

  const NodeSet u = uniform1d(30, 1.0);
  CHECK(u.boundary_count() == 2);
  CHECK(u.fictitious_count() == 0);
  CHECK(u.interior_count() == 28);
}

TEST_CASE("square grid") {
  const double L = 1.0, off = 0.5;
  const NodeSet n = square_grid(5, L, off);
  CHECK(n.interior_count() == 9);
  CHECK(n.boundary_count() == 16);
  CHECK(n.fictitious_count() == 16);

  // Each boundary point has its fictitious partner at the same block index.
  const auto b = n.boundary();
  const auto f = n.fictitious();
  auto partner = [&](double x, double y) -> Point {
    for (std::size_t k = 0; k < b.size(); ++k) {
      const Point& p = n.point(b[k]);
      if (std::abs(p.x - x) < 1e-14 && std::abs(p.y - y) < 1e-14) return n.point(f[k]);
    }
    FAIL("boundary point not found");
    return {};
  };
  const Point e = partner(L, 0.0);
  CHECK(e.x == doctest::Approx(L + off));
  CHECK(std::abs(e.y) < 1e-15);
  const Point c = partner(L, L);
  CHECK(c.x == doctest::Approx(L + off / std::sqrt(2.0)));
  CHECK(c.y == doctest::Approx(L + off / std::sqrt(2.0)));

  for (auto i : b) CHECK(norm(n.normal(i)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(n.normal(b[0]).x * n.point(b[0]).x + n.normal(b[0]).y * n.point(b[0]).y > 0.0);

  CHECK(square_grid(5, L).fictitious_count() == 0);
}

TEST_CASE("square resampling nodes and auxiliary points") {
  const int n = 12;
  const double L = 2.0, h = 2 * L / (n - 1);
  const int nb = default_resampling_boundary(n);
  CHECK(nb == 4 * (n - 3));

  const NodeSet nodes = square_resampling_nodes(n, L, nb);
  CHECK(nodes.interior_count() == static_cast<std::size_t>((n - 2) * (n - 2)));
  CHECK(nodes.boundary_count() == static_cast<std::size_t>(nb));
  CHECK(nodes.fictitious_count() == 0);

  // Equal arc-length spacing along the perimeter, starting at (-L, -L).
  auto arc = [&](const Point& p) {
    if (std::abs(p.y + L) < 1e-12) return p.x + L;
    if (std::abs(p.x - L) < 1e-12) return 2 * L + (p.y + L);
    if (std::abs(p.y - L) < 1e-12) return 4 * L + (L - p.x);
    return 6 * L + (L - p.y);
  };
  std::vector<double> s;
  for (auto i : nodes.boundary()) {
    const Point& p = nodes.point(i);
    CHECK(std::max(std::abs(p.x), std::abs(p.y)) == doctest::Approx(L).epsilon(1e-14));
    s.push_back(arc(p));
    const Point& nv = nodes.normal(i);
    CHECK(norm(nv) == doctest::Approx(1.0).epsilon(1e-14));
    if (std::abs(std::abs(p.x) - L) < 1e-12 && std::abs(std::abs(p.y) - L) < 1e-12) {
      CHECK(std::abs(nv.x) == doctest::Approx(std::sqrt(0.5)));
      CHECK(std::abs(nv.y) == doctest::Approx(std::sqrt(0.5)));
    }
  }
  std::sort(s.begin(), s.end());
  CHECK(std::abs(s.front()) < 1e-12);
  for (std::size_t k = 1; k < s.size(); ++k) {
    CHECK(s[k] - s[k - 1] == doctest::Approx(8 * L / nb).epsilon(1e-12));
  }

  // Default count removes exactly the outermost interior layer.
  const AuxiliarySet aux = square_auxiliary(n, L, nb);
  CHECK(aux.size() == static_cast<std::size_t>((n - 4) * (n - 4)));
  for (const auto& p : aux.points) {
    CHECK(std::max(std::abs(p.x), std::abs(p.y)) <= L - 2 * h + 1e-12);
  }
  CHECK(square_auxiliary(n, L, 20).size() == static_cast<std::size_t>((n - 2) * (n - 2) - 20));
}

TEST_CASE("starfish boundary geometry") {
  const Point n0 = starfish_normal(0.0);
  CHECK(n0.x == doctest::Approx(0.846092).epsilon(1e-6));
  CHECK(n0.y == doctest::Approx(-0.533038).epsilon(1e-6));

  CHECK(starfish_radius(kPi / 2) == doctest::Approx(0.93).epsilon(1e-15));
  const Point n1 = starfish_normal(kPi / 2);
  CHECK(n1.x == doctest::Approx(-0.411586).epsilon(1e-6));
  CHECK(n1.y == doctest::Approx(0.911371).epsilon(1e-6));

  for (int k = 0; k < 50; ++k) {
    const double t = 0.1257 * k;
    CHECK(starfish_radius(t + 2 * kPi) == doctest::Approx(starfish_radius(t)).epsilon(1e-13));
    const Point a = starfish_normal(t), b = fd_normal(t);
    CHECK(norm(a) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(a.x - b.x) < 1e-8);
    CHECK(std::abs(a.y - b.y) < 1e-8);
  }

  const auto bs = starfish_boundary(56);
  REQUIRE(bs.size() == 56);
  CHECK(bs[0].point.x == doctest::Approx(1.0));
  CHECK(std::abs(bs[0].point.y) < 1e-15);
  double perimeter = 0.0;
  for (std::size_t k = 0; k < bs.size(); ++k) {
    const auto& a = bs[k].point;
    const auto& b = bs[(k + 1) % bs.size()].point;
    perimeter += std::hypot(a.x - b.x, a.y - b.y);
  }
  CHECK(mean_boundary_spacing(bs) == doctest::Approx(perimeter / 56).epsilon(1e-14));
}

TEST_CASE("starfish interior and fictitious points") {
  for (std::size_t count : {1u, 8u, 60u, 253u, 600u}) {
    const auto pts = starfish_interior(count);
    CHECK(pts.size() == count);
    for (const auto& p : pts) CHECK(starfish_contains(p));
  }
  const auto bs = starfish_boundary(40);
  for (const auto& p : starfish_fictitious(bs, 0.1)) CHECK_FALSE(starfish_contains(p));
  CHECK_FALSE(starfish_contains({1.2, 0.0}));
  CHECK(starfish_contains({0.0, 0.0}));

  const NodeSet n = starfish_nodes(253, 56, 0.1);
  CHECK(n.interior_count() == 253);
  CHECK(n.boundary_count() == 56);
  CHECK(n.fictitious_count() == 56);
  CHECK(n.min_separation() > 0.0);
}

TEST_CASE("starfish ring sizes and resampling points") {
  CHECK(starfish_outer_ring_size(253) == 56);
  CHECK(starfish_ring_nodes(6) == 133);
  CHECK(starfish_ring_nodes(8) == 227);
  CHECK(starfish_ring_nodes(10) == 347);
  CHECK(starfish_outer_ring_size(133) == 38);
  CHECK(starfish_outer_ring_size(227) == 50);
  CHECK(starfish_outer_ring_size(347) == 63);

  CHECK(starfish_auxiliary(253, 56).size() == 141);
  CHECK(starfish_auxiliary(309, 56).size() == 197);

  // The auxiliary points are interior points with the outer ring removed.
  const auto aux = starfish_auxiliary(309, 56);
  const auto interior = starfish_interior(253);
  std::set<std::pair<double, double>> all;
  for (const auto& p : interior) all.insert({p.x, p.y});
  for (const auto& p : aux.points) {
    CHECK(all.count({p.x, p.y}) == 1);
    CHECK(starfish_contains(p));
  }
  CHECK_THROWS_AS(starfish_auxiliary(100, 60), InvalidArgument);
}

TEST_CASE("fill distance") {
  const NodeSet n = square_grid(5, 1.0);
  std::vector<Point> probe;
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) probe.push_back({-1.0 + 0.01 * i, -1.0 + 0.01 * j});
  }
  CHECK(fill_distance(n, probe) == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-12));
}

TEST_CASE("node sets have distinct points") {
  CHECK(uniform1d_fictitious(50, 10.0).min_separation() > 0.0);
  CHECK(square_grid(10, 2.0, 0.3).min_separation() > 0.0);
  CHECK(square_resampling_nodes(25, 2.0, 88).min_separation() > 0.0);
  CHECK(starfish_nodes(468, 72).min_separation() > 0.0);
}

TEST_CASE("node argument checks") {
  CHECK_THROWS_AS(uniform1d_fictitious(4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(uniform1d(5, -1.0), InvalidArgument);
  CHECK_THROWS_AS(square_grid(1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(starfish_boundary(2), InvalidArgument);
}

TEST_CASE("node csv") {
  std::ostringstream one, two;
  write_csv(one, uniform1d_fictitious(5, 1.0));
  CHECK(one.str().rfind("x,class,nx\n", 0) == 0);
  write_csv(two, square_grid(4, 1.0));
  CHECK(two.str().rfind("x,y,class,nx,ny\n", 0) == 0);
  const std::string text = two.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 17);
}
