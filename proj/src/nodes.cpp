#include "rosenau/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "rosenau/csv.hpp"
#include "rosenau/errors.hpp"

namespace rosenau {

namespace {

constexpr double kPi = std::numbers::pi;

double dist(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::string_view class_name(PointClass c) {
  switch (c) {
    case PointClass::Interior:
      return "interior";
    case PointClass::Boundary:
      return "boundary";
    case PointClass::Fictitious:
      return "fictitious";
  }
  return "?";
}

// The `count` points of largest depth (distance-like measure from the
// boundary), returned in their original order. Ties keep the lower index.
AuxiliarySet deepest(const std::vector<Point>& points, const std::vector<double>& depth,
                     std::size_t count) {
  // Quantised so mirror-image points compare equal despite rounding.
  std::vector<long long> key(depth.size());
  for (std::size_t i = 0; i < depth.size(); ++i) key[i] = std::llround(depth[i] * 1e9);
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  order.resize(count);
  std::sort(order.begin(), order.end());
  AuxiliarySet aux;
  for (auto i : order) aux.points.push_back(points[i]);
  return aux;
}

}  // namespace

NodeSet::NodeSet(int dim, std::vector<Point> interior, std::vector<Point> boundary,
                 std::vector<Point> boundary_normals,
                 std::vector<Point> fictitious)
    : dim_(dim) {
  if (dim != 1 && dim != 2) throw InvalidArgument("NodeSet: dim must be 1 or 2");
  if (boundary_normals.size() != boundary.size()) {
    throw InvalidArgument("NodeSet: one normal per boundary point required");
  }
  for (const auto& n : boundary_normals) {
    if (std::abs(std::hypot(n.x, n.y) - 1.0) > 1e-12) {
      throw InvalidArgument("NodeSet: boundary normals must have unit length");
    }
  }
  auto append = [&](const std::vector<Point>& pts, PointClass c,
                    std::vector<std::size_t>& index) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      index.push_back(points_.size());
      points_.push_back(pts[i]);
      classes_.push_back(c);
      normals_.push_back(c == PointClass::Boundary ? boundary_normals[i] : Point{});
    }
  };
  append(interior, PointClass::Interior, interior_);
  append(boundary, PointClass::Boundary, boundary_);
  append(fictitious, PointClass::Fictitious, fictitious_);
}

std::vector<Point> NodeSet::points_of(PointClass c) const {
  std::vector<Point> out;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (classes_[i] == c) out.push_back(points_[i]);
  }
  return out;
}

std::vector<Point> NodeSet::boundary_normals() const {
  std::vector<Point> out;
  for (auto i : boundary_) out.push_back(normals_[i]);
  return out;
}

std::vector<Point> NodeSet::physical_points() const {
  std::vector<Point> out;
  for (auto i : interior_) out.push_back(points_[i]);
  for (auto i : boundary_) out.push_back(points_[i]);
  return out;
}

NodeSet NodeSet::without_fictitious() const {
  return NodeSet(dim_, points_of(PointClass::Interior),
                 points_of(PointClass::Boundary), boundary_normals());
}

double NodeSet::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      best = std::min(best, dist(points_[i], points_[j]));
    }
  }
  return best;
}

// ---- 1D -------------------------------------------------------------------

namespace {

// n points with spacing h centred on zero, built to be exactly symmetric.
std::vector<double> symmetric_grid(int n, double h) {
  std::vector<double> x(static_cast<std::size_t>(n));
  const double mid = 0.5 * static_cast<double>(n - 1);
  for (int k = 0; k < n / 2; ++k) {
    x[static_cast<std::size_t>(k)] = (static_cast<double>(k) - mid) * h;
    x[static_cast<std::size_t>(n - 1 - k)] = -x[static_cast<std::size_t>(k)];
  }
  if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.0;
  return x;
}

}  // namespace

NodeSet uniform1d_fictitious(int n, double half_length) {
  if (n < 5) throw InvalidArgument("uniform1d_fictitious: need N >= 5");
  if (!(half_length > 0.0)) throw InvalidArgument("uniform1d_fictitious: need L > 0");
  const double h = 2.0 * half_length / static_cast<double>(n - 3);
  auto x = symmetric_grid(n, h);
  x[1] = -half_length;
  x[static_cast<std::size_t>(n - 2)] = half_length;
  std::vector<Point> interior;
  for (int k = 2; k <= n - 3; ++k) interior.push_back({x[static_cast<std::size_t>(k)], 0.0});
  return NodeSet(1, std::move(interior), {{-half_length, 0.0}, {half_length, 0.0}},
                 {{-1.0, 0.0}, {1.0, 0.0}},
                 {{x.front(), 0.0}, {x.back(), 0.0}});
}

NodeSet uniform1d(int n, double half_length) {
  if (n < 3) throw InvalidArgument("uniform1d: need N >= 3");
  if (!(half_length > 0.0)) throw InvalidArgument("uniform1d: need L > 0");
  const double h = 2.0 * half_length / static_cast<double>(n - 1);
  auto x = symmetric_grid(n, h);
  std::vector<Point> interior;
  for (int k = 1; k <= n - 2; ++k) interior.push_back({x[static_cast<std::size_t>(k)], 0.0});
  return NodeSet(1, std::move(interior), {{-half_length, 0.0}, {half_length, 0.0}},
                 {{-1.0, 0.0}, {1.0, 0.0}});
}

AuxiliarySet auxiliary1d(int n, double half_length) {
  if (n < 6) throw InvalidArgument("auxiliary1d: need N >= 6");
  if (!(half_length > 0.0)) throw InvalidArgument("auxiliary1d: need L > 0");
  const double spacing = 2.0 * half_length / static_cast<double>(n - 4);
  AuxiliarySet aux;
  for (int k = 0; k < n - 4; ++k) {
    aux.points.push_back({-half_length + (static_cast<double>(k) + 0.5) * spacing, 0.0});
  }
  return aux;
}

// ---- square ---------------------------------------------------------------

NodeSet square_grid(int n, double half_length, std::optional<double> fictitious_offset) {
  if (n < 4) throw InvalidArgument("square_grid: need n >= 4");
  if (!(half_length > 0.0)) throw InvalidArgument("square_grid: need L > 0");
  if (fictitious_offset && !(*fictitious_offset > 0.0)) {
    throw InvalidArgument("square_grid: fictitious offset must be positive");
  }
  const double L = half_length;
  auto g = [&](int k) {
    if (k == 0) return -L;
    if (k == n - 1) return L;
    return -L + 2.0 * L * static_cast<double>(k) / static_cast<double>(n - 1);
  };

  std::vector<Point> interior;
  for (int j = 1; j <= n - 2; ++j) {
    for (int i = 1; i <= n - 2; ++i) interior.push_back({g(i), g(j)});
  }

  // Counter-clockwise from the corner (-L, -L).
  std::vector<Point> boundary;
  std::vector<Point> normals;
  const double d = 1.0 / std::sqrt(2.0);
  auto push = [&](Point p) {
    boundary.push_back(p);
    const bool left = p.x == -L, right = p.x == L;
    const bool bottom = p.y == -L, top = p.y == L;
    Point nrm{right ? 1.0 : (left ? -1.0 : 0.0), top ? 1.0 : (bottom ? -1.0 : 0.0)};
    if (nrm.x != 0.0 && nrm.y != 0.0) nrm = {nrm.x * d, nrm.y * d};
    normals.push_back(nrm);
  };
  for (int i = 0; i < n; ++i) push({g(i), -L});
  for (int j = 1; j < n; ++j) push({L, g(j)});
  for (int i = n - 2; i >= 0; --i) push({g(i), L});
  for (int j = n - 2; j >= 1; --j) push({-L, g(j)});

  std::vector<Point> fictitious;
  if (fictitious_offset) {
    for (std::size_t k = 0; k < boundary.size(); ++k) {
      fictitious.push_back({boundary[k].x + *fictitious_offset * normals[k].x,
                            boundary[k].y + *fictitious_offset * normals[k].y});
    }
  }
  return NodeSet(2, std::move(interior), std::move(boundary), std::move(normals),
                 std::move(fictitious));
}

int default_resampling_boundary(int n) { return 4 * (n - 3); }

NodeSet square_resampling_nodes(int n, double half_length, int n_boundary) {
  if (n < 4) throw InvalidArgument("square_resampling_nodes: need n >= 4");
  if (!(half_length > 0.0)) throw InvalidArgument("square_resampling_nodes: need L > 0");
  const int n_interior = (n - 2) * (n - 2);
  if (n_boundary < 4 || 2 * n_boundary > n_interior + n_boundary) {
    throw InvalidArgument("square_resampling_nodes: need 4 <= N_b <= N_d");
  }
  const double L = half_length;
  NodeSet grid = square_grid(n, L);
  std::vector<Point> interior = grid.points_of(PointClass::Interior);

  // Arc-length spacing along the perimeter, counter-clockwise from (-L, -L).
  std::vector<Point> boundary;
  std::vector<Point> normals;
  const double d = 1.0 / std::sqrt(2.0);
  const Point corner_normal[4] = {{-d, -d}, {d, -d}, {d, d}, {-d, d}};
  const Point side_normal[4] = {{0.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}};
  for (int k = 0; k < n_boundary; ++k) {
    const double s = 4.0 * static_cast<double>(k) / n_boundary;
    int side = static_cast<int>(std::floor(s + 1e-12));
    double u = std::max(0.0, s - side);
    side = std::min(side, 3);
    const double a = u < 1e-12 ? -L : -L + 2.0 * L * u;
    switch (side) {
      case 0: boundary.push_back({a, -L}); break;
      case 1: boundary.push_back({L, a}); break;
      case 2: boundary.push_back({-a, L}); break;
      default: boundary.push_back({-L, -a}); break;
    }
    normals.push_back(u < 1e-12 ? corner_normal[side] : side_normal[side]);
  }
  return NodeSet(2, std::move(interior), std::move(boundary), std::move(normals));
}

AuxiliarySet square_auxiliary(int n, double half_length, int n_boundary) {
  if (n < 4) throw InvalidArgument("square_auxiliary: need n >= 4");
  if (!(half_length > 0.0)) throw InvalidArgument("square_auxiliary: need L > 0");
  const auto interior = square_grid(n, half_length).points_of(PointClass::Interior);
  if (n_boundary < 0 || static_cast<std::size_t>(n_boundary) > interior.size()) {
    throw InvalidArgument("square_auxiliary: need 0 <= N_b <= N_d");
  }
  std::vector<double> depth;
  for (const auto& p : interior) {
    depth.push_back(half_length - std::max(std::abs(p.x), std::abs(p.y)));
  }
  return deepest(interior, depth, interior.size() - static_cast<std::size_t>(n_boundary));
}

// ---- starfish --------------------------------------------------------------

double starfish_radius(double theta) {
  return 1.0 + 0.07 * (std::sin(6.0 * theta) + std::sin(3.0 * theta));
}

double starfish_radius_derivative(double theta) {
  return 0.07 * (6.0 * std::cos(6.0 * theta) + 3.0 * std::cos(3.0 * theta));
}

Point starfish_normal(double theta) {
  const double r = starfish_radius(theta);
  const double dr = starfish_radius_derivative(theta);
  const double c = std::cos(theta), s = std::sin(theta);
  const double nx = dr * s + r * c;
  const double ny = -dr * c + r * s;
  const double len = std::hypot(nx, ny);
  return {nx / len, ny / len};
}

namespace {

// |p| / r(theta_p): 0 at the centre, 1 on the boundary.
double relative_radius(const Point& p) {
  const double r = std::hypot(p.x, p.y);
  return r == 0.0 ? 0.0 : r / starfish_radius(std::atan2(p.y, p.x));
}

}  // namespace

bool starfish_contains(const Point& p) {
  const double theta = std::atan2(p.y, p.x);
  return std::hypot(p.x, p.y) < starfish_radius(theta);
}

std::vector<BoundarySample> starfish_boundary(int n_boundary) {
  if (n_boundary < 8) throw InvalidArgument("starfish_boundary: need N_b >= 8");
  std::vector<BoundarySample> out;
  for (int k = 0; k < n_boundary; ++k) {
    const double theta = 2.0 * kPi * static_cast<double>(k) / n_boundary;
    const double r = starfish_radius(theta);
    out.push_back({{r * std::cos(theta), r * std::sin(theta)}, starfish_normal(theta)});
  }
  return out;
}

std::vector<Point> starfish_interior(std::size_t count) {
  std::vector<Point> out;
  if (count == 0) return out;
  out.push_back({0.0, 0.0});
  if (count == 1) return out;

  // A centre point plus K rings at relative radius k/(K+1) holds about
  // 1 + pi K (K+1) points at uniform spacing.
  const double rest = static_cast<double>(count - 1);
  const int rings = std::max(1, static_cast<int>(std::lround(
                                    0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * rest / kPi)))));

  // Ring sizes proportional to the radius, largest-remainder rounding.
  std::vector<double> share(static_cast<std::size_t>(rings));
  double total = 0.0;
  for (int k = 1; k <= rings; ++k) total += k;
  std::vector<std::size_t> sizes(static_cast<std::size_t>(rings));
  std::size_t assigned = 0;
  for (int k = 1; k <= rings; ++k) {
    const double exact = rest * k / total;
    sizes[static_cast<std::size_t>(k - 1)] = static_cast<std::size_t>(std::floor(exact));
    share[static_cast<std::size_t>(k - 1)] = exact - std::floor(exact);
    assigned += sizes[static_cast<std::size_t>(k - 1)];
  }
  std::vector<std::size_t> order(static_cast<std::size_t>(rings));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return share[a] > share[b];
  });
  for (std::size_t i = 0; assigned < count - 1; ++i, ++assigned) {
    ++sizes[order[i % order.size()]];
  }

  for (int k = 1; k <= rings; ++k) {
    const std::size_t m = sizes[static_cast<std::size_t>(k - 1)];
    const double rho = static_cast<double>(k) / (rings + 1);
    const double shift = (k % 2 == 0) ? 0.5 : 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double theta = 2.0 * kPi * (static_cast<double>(i) + shift) / static_cast<double>(m);
      const double r = rho * starfish_radius(theta);
      out.push_back({r * std::cos(theta), r * std::sin(theta)});
    }
  }
  return out;
}

std::vector<Point> starfish_fictitious(std::span<const BoundarySample> boundary,
                                       double offset) {
  if (!(offset > 0.0)) throw InvalidArgument("starfish_fictitious: offset must be positive");
  std::vector<Point> out;
  for (const auto& b : boundary) {
    out.push_back({b.point.x + offset * b.normal.x, b.point.y + offset * b.normal.y});
  }
  return out;
}

AuxiliarySet starfish_auxiliary(std::size_t node_count, std::size_t n_boundary) {
  if (node_count < 2 * n_boundary) {
    throw InvalidArgument("starfish_auxiliary: resampling needs N >= 2 N_b (got N=" +
                          std::to_string(node_count) + ", N_b=" +
                          std::to_string(n_boundary) + ")");
  }
  const auto interior = starfish_interior(node_count - n_boundary);
  std::vector<double> depth;
  for (const auto& p : interior) depth.push_back(1.0 - relative_radius(p));
  return deepest(interior, depth, node_count - 2 * n_boundary);
}

std::size_t starfish_outer_ring_size(std::size_t n_interior) {
  const auto interior = starfish_interior(n_interior);
  double outer = 0.0;
  for (const auto& p : interior) outer = std::max(outer, relative_radius(p));
  return static_cast<std::size_t>(std::count_if(
      interior.begin(), interior.end(),
      [&](const Point& p) { return relative_radius(p) > outer - 1e-9; }));
}

std::size_t starfish_ring_nodes(int rings) {
  if (rings < 1) throw InvalidArgument("starfish_ring_nodes: need at least one ring");
  return static_cast<std::size_t>(std::lround(1.0 + kPi * rings * (rings + 1)));
}

double mean_boundary_spacing(std::span<const BoundarySample> boundary) {
  if (boundary.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    total += dist(boundary[k].point, boundary[(k + 1) % boundary.size()].point);
  }
  return total / static_cast<double>(boundary.size());
}

NodeSet starfish_nodes(std::size_t n_interior, int n_boundary,
                       std::optional<double> fictitious_offset) {
  const auto boundary = starfish_boundary(n_boundary);
  std::vector<Point> bpts, normals;
  for (const auto& b : boundary) {
    bpts.push_back(b.point);
    normals.push_back(b.normal);
  }
  std::vector<Point> fict;
  if (fictitious_offset) fict = starfish_fictitious(boundary, *fictitious_offset);
  return NodeSet(2, starfish_interior(n_interior), std::move(bpts), std::move(normals),
                 std::move(fict));
}

// ---- utilities ----------------------------------------------------------------

double fill_distance(const NodeSet& nodes, std::span<const Point> probe) {
  const auto phys = nodes.physical_points();
  if (phys.empty() || probe.empty()) {
    throw InvalidArgument("fill_distance: nodes and probe must be non-empty");
  }
  double h = 0.0;
  for (const auto& p : probe) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& q : phys) nearest = std::min(nearest, dist(p, q));
    h = std::max(h, nearest);
  }
  return h;
}

void write_csv(std::ostream& out, const NodeSet& nodes) {
  csv::Writer w(out);
  if (nodes.dim() == 1) {
    w.header({"x", "class", "nx"});
  } else {
    w.header({"x", "y", "class", "nx", "ny"});
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& p = nodes.point(i);
    const auto& n = nodes.normal(i);
    w.cell(p.x);
    if (nodes.dim() == 2) w.cell(p.y);
    w.cell(class_name(nodes.classes()[i])).cell(n.x);
    if (nodes.dim() == 2) w.cell(n.y);
    w.end_row();
  }
}

void write_csv(std::ostream& out, const AuxiliarySet& aux, int dim) {
  csv::Writer w(out);
  if (dim == 1) {
    w.header({"x", "class"});
  } else {
    w.header({"x", "y", "class"});
  }
  for (const auto& p : aux.points) {
    w.cell(p.x);
    if (dim == 2) w.cell(p.y);
    w.cell(std::string_view("auxiliary"));
    w.end_row();
  }
}

}  // namespace rosenau
