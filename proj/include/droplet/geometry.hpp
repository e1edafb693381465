#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace droplet {

using Vec3 = Eigen::Vector3d;
using Triangle = std::array<int, 3>;

inline constexpr int kMaxIcosphereLevel = 8;

/// Subdivided icosahedron on the unit sphere. Triangles are oriented so that
/// (b - a) x (c - a) points away from the origin.
struct IcosphereMesh {
  int level = 0;
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;

  // Derived topology, filled by build_topology().
  std::vector<std::vector<int>> neighbors;          // one-ring, sorted
  std::vector<std::vector<int>> vertex_triangles;   // incident triangles
  std::vector<std::array<int, 2>> edges;            // undirected, i < j

  std::size_t vertex_count() const { return vertices.size(); }
  void build_topology();
};

IcosphereMesh build_icosphere(int level);

// ---------------------------------------------------------------------------
// Shape descriptors.

struct SphereShape {
  double radius = 1.0;
};

struct EllipsoidShape {
  double a = 1.0, b = 1.0, c = 1.0;
};

struct ModeAmplitude {
  int mode = 0;
  double amplitude = 0.0;
};

/// rho(d) = radius * (1 + sum_k amplitude_k * mode_k(d)), with every mode
/// scaled to have sup-norm 1 on the sphere.
struct PerturbedSphereShape {
  double radius = 1.0;
  std::vector<ModeAmplitude> modes;
};

using ShapeDescriptor = std::variant<SphereShape, EllipsoidShape, PerturbedSphereShape>;

/// Parses "sphere:R", "ellipsoid:a,b,c", "perturbed:R,k:amp,k:amp,..." or
/// "random:R,amplitude,seed" (seeded_perturbation).
ShapeDescriptor parse_shape(std::string_view text);
std::string format_shape(const ShapeDescriptor& shape);

/// Radial extent of the shape along the unit direction `dir`.
double shape_radius(const ShapeDescriptor& shape, const Vec3& dir);

/// Random perturbation on modes of degree 2..4 whose absolute amplitudes sum
/// to `amplitude`, so rho stays within radius * [1 - amplitude, 1 + amplitude].
PerturbedSphereShape seeded_perturbation(double radius, double amplitude, unsigned seed);

// ---------------------------------------------------------------------------
// Real spherical-harmonic modes, degree <= 4, indexed k = l*l + l + m.

inline constexpr int kSphereModeCount = 25;

int mode_degree(int k);
/// Mode k evaluated at unit direction d; sup over the sphere is 1.
double sphere_mode(int k, const Vec3& d);
/// Mode k with unit L2 norm over the unit sphere. Rotations act on each
/// degree by an orthogonal matrix in this normalization.
double sphere_harmonic(int k, const Vec3& d);

// ---------------------------------------------------------------------------

/// Star-shaped surface: vertex i sits at rho[i] * base->vertices[i].
struct RadialSurface {
  std::shared_ptr<const IcosphereMesh> base;
  std::vector<double> rho;

  std::size_t vertex_count() const { return rho.size(); }
  Vec3 position(std::size_t i) const { return rho[i] * base->vertices[i]; }
  std::vector<Vec3> positions() const;
  /// max(rho)/min(rho) - 1.
  double asphericity() const;
  RadialSurface scaled(double factor) const;
  void validate() const;
};

RadialSurface radial_surface(std::shared_ptr<const IcosphereMesh> mesh, const ShapeDescriptor& shape);
/// Wraps explicit radii; throws NotStarShaped when some rho is not positive.
RadialSurface radial_surface(std::shared_ptr<const IcosphereMesh> mesh, std::vector<double> rho);

struct SurfaceGeometry {
  std::vector<Vec3> position;
  std::vector<Vec3> normal;          // outer unit normal
  std::vector<double> vertex_area;   // mixed Voronoi area
  std::vector<double> H;             // k1 + k2
  std::vector<double> K;             // angle defect / vertex area
  double area = 0.0;
  double volume = 0.0;
  double total_mean_curvature = 0.0;
  double min_edge_length = 0.0;

  double min_H() const;
};

inline constexpr double kDegenerateTriangleArea = 1e-14;

/// Discrete geometry of an arbitrary closed triangulated surface (used by the
/// flows on moved, not-yet-reprojected vertex positions as well).
SurfaceGeometry surface_geometry(const IcosphereMesh& topology, const std::vector<Vec3>& positions);
SurfaceGeometry surface_geometry(const RadialSurface& surface);

/// Total mean curvature minus 4 sqrt(pi * area).
double minkowski_deficit(const SurfaceGeometry& geom);
double minkowski_deficit(const RadialSurface& surface);

/// Total mean curvature over 4 sqrt(pi * area); scale invariant.
double minkowski_ratio(const SurfaceGeometry& geom);

}  // namespace droplet
