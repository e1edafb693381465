#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace droplet::planar {

using Vec2 = Eigen::Vector2d;

/// Simple polygon, counterclockwise.
struct Polygon2D {
  std::vector<Vec2> vertices;

  double signed_area() const;
  double perimeter() const;
  double diameter() const;
  bool contains(const Vec2& p) const;
  /// Euclidean distance from p to the polygon boundary.
  double boundary_distance(const Vec2& p) const;
  bool is_convex() const;
  /// Throws InvalidInput on fewer than 3 vertices, self-intersection or
  /// non-positive signed area.
  void validate() const;
};

Polygon2D make_polygon(std::vector<Vec2> vertices);
Polygon2D regular_polygon(int n, double radius, const Vec2& center = Vec2::Zero());
Polygon2D axis_box(const Vec2& lo, const Vec2& hi);
/// Two unit squares joined by a corridor of length 1 and the given width.
Polygon2D dumbbell(double neck_width);
/// Unit square minus a vertical slit of zero width and given depth from
/// the bottom edge at x = 0.5, thickened to `slit_width`.
Polygon2D slit_square(double depth, double slit_width);

/// Cell (i, j) has center origin + h * (i + 1/2, j + 1/2).
struct GridFrame {
  Vec2 origin = Vec2::Zero();
  double h = 0.0;
  int nx = 0;
  int ny = 0;

  std::size_t cell_count() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  Vec2 center(int i, int j) const { return origin + h * Vec2(i + 0.5, j + 0.5); }
  Vec2 center(std::size_t k) const { return center(static_cast<int>(k % nx), static_cast<int>(k / nx)); }
  std::optional<std::size_t> locate(const Vec2& p) const;
  bool operator==(const GridFrame& o) const {
    return origin == o.origin && h == o.h && nx == o.nx && ny == o.ny;
  }
};

/// Frame covering the bounding box of the polygons plus `margin` on each side.
GridFrame covering_frame(const std::vector<Polygon2D>& polygons, double h, double margin);

struct GridDomain {
  GridFrame frame;
  std::vector<std::uint8_t> occupied;
  /// Distance from an occupied cell center to the complement, estimated as the
  /// distance to the nearest unoccupied center minus h/2; zero outside.
  std::vector<double> clearance;

  double area() const;
  std::size_t occupied_count() const;
  bool is_interior(std::size_t k) const { return occupied[k] && clearance[k] > 0; }
};

/// Exact Euclidean distance (in world units) from every cell center to the
/// nearest cell whose mask entry is set; +inf when the mask is empty.
std::vector<double> distance_transform(const GridFrame& frame, const std::vector<std::uint8_t>& mask);

GridDomain grid_from_mask(const GridFrame& frame, std::vector<std::uint8_t> occupied);

/// Cell occupied iff its center is inside p. Requires h <= diameter / 32.
GridDomain rasterize(const Polygon2D& p, double h, double margin = 0.0);
GridDomain rasterize(const Polygon2D& p, const GridFrame& frame);

// ---------------------------------------------------------------------------
// M-uniformity.

inline constexpr double kPathLengthAllowance = 1.08;
inline constexpr double kBisectionTolerance = 1e-2;

/// Length of the shortest 8-connected path from x to y through cells that
/// are admissible for M; nullopt when y is unreachable.
std::optional<double> admissible_path_length(const GridDomain& g, const Vec2& x, const Vec2& y, double M);

/// Path exists and is no longer than kPathLengthAllowance * M * |x - y|.
bool uniformity_feasible(const GridDomain& g, const Vec2& x, const Vec2& y, double M);

/// Smallest feasible M in [1, M_max] to within kBisectionTolerance. Throws
/// InvalidInput for non-interior endpoints and Infeasible when M_max fails.
double estimate_uniformity(const GridDomain& g, const Vec2& x, const Vec2& y, double M_max);

struct PairResult {
  Vec2 x = Vec2::Zero();
  Vec2 y = Vec2::Zero();
  bool feasible = false;
  double M = 0.0;  // minimal feasible M, or M_max when infeasible
};

struct UniformityReport {
  double M_estimate = 0.0;
  int pairs_tested = 0;
  bool all_feasible = true;
  double M_max = 0.0;
  PairResult worst;
  std::vector<PairResult> pairs;
  std::string note =
      "estimate from sampled pairs and grid paths; bounds the sampled constant, does not certify the domain";
};

/// Seeded quasi-random interior pairs (points at least 3% of the diameter
/// from the boundary). Deterministic for a given seed.
std::vector<std::pair<Vec2, Vec2>> sample_pairs(const Polygon2D& p, int samples, unsigned seed);

UniformityReport uniformity_report(const Polygon2D& p, int samples, double h, double M_max, unsigned seed);

// ---------------------------------------------------------------------------
// Density classes.

struct DensityAt {
  double interior = 0.0;  // |B_r(x) ∩ E| / r^2
  double exterior = 0.0;  // |B_r(x) \ E| / r^2
};

DensityAt density_at(const GridDomain& g, const Vec2& x, double r);

/// Occupied cells with an unoccupied 4-neighbour.
std::vector<std::size_t> boundary_cells(const GridDomain& g);

struct DensityRow {
  double r = 0.0;
  double min_interior = 0.0;
  double min_exterior = 0.0;
};

struct DensityReport {
  double c = 0.0;
  int samples = 0;
  std::vector<DensityRow> rows;
  bool interior_condition = true;   // every ratio > c: the set is in D_c
  bool exterior_condition = true;   // every ratio > c: the set is in D^c
};

/// Boundary cells are all used when there are at most 4096, else a seeded
/// subsample of 4096.
DensityReport density_check(const GridDomain& g, double c, const std::vector<double>& radii, unsigned seed = 0);

// ---------------------------------------------------------------------------
// Set distances and neighbourhoods.

struct SetDistances {
  double l1 = 0.0;
  double hausdorff = 0.0;
};

SetDistances set_distances(const GridDomain& a, const GridDomain& b);

enum class NeighborhoodMode { Inner, Outer };

/// Inner: cells with clearance >= eps. Outer: cells within eps of an occupied
/// cell (clipped to the frame). Requires eps >= h.
GridDomain neighborhood(const GridDomain& g, double eps, NeighborhoodMode mode);

/// Every occupied cell of a is occupied in b.
bool is_subset(const GridDomain& a, const GridDomain& b);

struct ConvergenceRow {
  double eps = 0.0;
  // First family index from which the inclusion holds for every later index,
  // or nullopt when it fails at the last index.
  std::optional<int> first_i;    // limit ⊂ (D_i)^eps
  std::optional<int> first_ii;   // (D_i)_eps ⊂ limit
  std::optional<int> first_iii;  // D_i ⊂ limit^eps
  std::vector<std::array<bool, 3>> holds;  // per index
};

struct ConvergenceReport {
  double h = 0.0;
  std::vector<ConvergenceRow> rows;
  std::vector<SetDistances> distances;      // per index, to the limit
  std::vector<double> perimeter_gap;        // |P(D_i) - P(limit)|
  bool family_convex = false;
  bool perimeter_monotone = false;          // gaps non-increasing
};

ConvergenceReport convergence_experiment(const std::vector<Polygon2D>& family, const Polygon2D& limit, double h,
                                         const std::vector<double>& eps_grid);

}  // namespace droplet::planar
