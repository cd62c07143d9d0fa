#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace rosenau {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class PointClass : std::uint8_t { Interior, Boundary, Fictitious };

/// Classified point cloud. Points are stored in the order
/// (interior, boundary, fictitious); the index maps name the three blocks.
/// Boundary points carry outward unit normals (in 1D, (-1,0) and (1,0)).
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(int dim, std::vector<Point> interior, std::vector<Point> boundary,
          std::vector<Point> boundary_normals,
          std::vector<Point> fictitious = {});

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t interior_count() const noexcept { return interior_.size(); }
  std::size_t boundary_count() const noexcept { return boundary_.size(); }
  std::size_t fictitious_count() const noexcept { return fictitious_.size(); }

  std::span<const Point> points() const noexcept { return points_; }
  std::span<const PointClass> classes() const noexcept { return classes_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  /// Zero vector for non-boundary points.
  const Point& normal(std::size_t i) const { return normals_[i]; }

  std::span<const std::size_t> interior() const noexcept { return interior_; }
  std::span<const std::size_t> boundary() const noexcept { return boundary_; }
  std::span<const std::size_t> fictitious() const noexcept { return fictitious_; }

  std::vector<Point> points_of(PointClass c) const;
  std::vector<Point> boundary_normals() const;

  /// Interior and boundary points only (the physical nodes).
  std::vector<Point> physical_points() const;

  /// Same interior/boundary nodes with the fictitious block removed.
  NodeSet without_fictitious() const;

  double min_separation() const;

 private:
  int dim_ = 1;
  std::vector<Point> points_;
  std::vector<PointClass> classes_;
  std::vector<Point> normals_;
  std::vector<std::size_t> interior_;
  std::vector<std::size_t> boundary_;
  std::vector<std::size_t> fictitious_;
};

/// Collocation points where the PDE is enforced in the resampling method.
struct AuxiliarySet {
  std::vector<Point> points;
  std::size_t size() const noexcept { return points.size(); }
};

// ---- 1D -------------------------------------------------------------------

/// N uniformly spaced points remapped so points 2 and N-1 sit on -L and L;
/// the two outermost points are fictitious.
NodeSet uniform1d_fictitious(int n, double half_length);

/// N uniformly spaced points on [-L, L]; the endpoints are the boundary.
NodeSet uniform1d(int n, double half_length);

/// The N-4 resampling points: a uniform (N-3)-point grid on [-L, L] with the
/// last point dropped, shifted right by half a spacing.
AuxiliarySet auxiliary1d(int n, double half_length);

// ---- square [-L, L]^2 -------------------------------------------------------

/// n x n uniform grid. With a fictitious offset, one fictitious point is
/// placed per boundary point along its outward normal (corner normals are the
/// unit diagonals).
NodeSet square_grid(int n, double half_length,
                    std::optional<double> fictitious_offset = std::nullopt);

/// Boundary count used for resampling when none is given: 4(n - 3), the size
/// of the outermost layer of interior grid points.
int default_resampling_boundary(int n);

/// Resampling node set: the (n-2)^2 interior grid points of square_grid plus
/// n_boundary points equally spaced in arc length along the perimeter,
/// starting at the corner (-L, -L). Boundary points landing on a corner get
/// the diagonal normal.
NodeSet square_resampling_nodes(int n, double half_length, int n_boundary);

/// Resampling points for square_resampling_nodes(n, L, n_boundary): the
/// interior grid points with the n_boundary points nearest the boundary
/// removed (N_d - N_b = N - 2 N_b points). The default boundary count removes
/// exactly the outermost interior layer.
AuxiliarySet square_auxiliary(int n, double half_length, int n_boundary);

// ---- starfish r(theta) = 1 + 0.07 (sin 6 theta + sin 3 theta) ---------------

double starfish_radius(double theta);
double starfish_radius_derivative(double theta);
/// Outward unit normal at polar angle theta.
Point starfish_normal(double theta);
/// True when p lies strictly inside the starfish.
bool starfish_contains(const Point& p);

struct BoundarySample {
  Point point;
  Point normal;
};

/// Boundary points at theta_k = 2 pi k / N_b with their outward normals.
std::vector<BoundarySample> starfish_boundary(int n_boundary);

/// Radially uniform interior points: a centre point plus rings of
/// theta-equispaced points at radii scaled to the local boundary radius.
/// Produces exactly `count` points.
std::vector<Point> starfish_interior(std::size_t count);

/// Boundary points pushed out along their normals by `offset`.
std::vector<Point> starfish_fictitious(std::span<const BoundarySample> boundary,
                                       double offset);

/// Resampling points for a node set with `node_count` = N_d + N_b nodes, of
/// which n_boundary lie on the boundary: the N_d ring points of
/// starfish_interior with the n_boundary outermost removed, leaving
/// node_count - 2 n_boundary points.
AuxiliarySet starfish_auxiliary(std::size_t node_count, std::size_t n_boundary);

/// Number of points on the outermost ring of starfish_interior(n_interior);
/// the matching boundary count for resampling.
std::size_t starfish_outer_ring_size(std::size_t n_interior);

/// Interior count that starfish_interior lays out as exactly `rings` rings.
std::size_t starfish_ring_nodes(int rings);

/// Mean spacing between consecutive boundary samples.
double mean_boundary_spacing(std::span<const BoundarySample> boundary);

/// Starfish node set; fictitious points are added when an offset is given.
NodeSet starfish_nodes(std::size_t n_interior, int n_boundary,
                       std::optional<double> fictitious_offset = std::nullopt);

// ---- utilities ----------------------------------------------------------------

/// max over probe points of the distance to the nearest physical node.
double fill_distance(const NodeSet& nodes, std::span<const Point> probe);

/// CSV with header "x,class,nx" (1D) or "x,y,class,nx,ny" (2D).
void write_csv(std::ostream& out, const NodeSet& nodes);
void write_csv(std::ostream& out, const AuxiliarySet& aux, int dim);

}  // namespace rosenau
