#pragma once

#include <string>
#include <vector>

#include "droplet/geometry.hpp"

namespace droplet {

/// How moved vertices are brought back onto their rays.
///   TangentPlane: intersect the ray with the plane through the moved vertex
///     orthogonal to its normal (error quadratic in the tangential offset).
///   MovedFaces: intersect the ray with the moved polyhedron; cuts corners,
///     losing area at a rate proportional to edge length times curvature.
enum class Reprojection { TangentPlane, MovedFaces };

struct FlowOptions {
  double h_floor = 1e-3;          // IMCF refuses surfaces with min H below this
  double cfl = 0.2;               // explicit-step stability factor
  bool smooth_curvature = true;   // one damped smoothing pass on H per step
  Reprojection reprojection = Reprojection::TangentPlane;
};

struct FlowRow {
  double t = 0.0;
  double area = 0.0;
  double volume = 0.0;
  double total_H = 0.0;
  double y = 0.0;      // total_H / (4 sqrt(pi area))
  double min_H = 0.0;
};

struct FlowTrace {
  std::vector<FlowRow> rows;
  bool curvature_smoothing = true;

  /// CSV with header t,area,volume,totalH,y,minH and 12 significant digits.
  std::string to_csv() const;
};

FlowRow flow_row(double t, const SurfaceGeometry& geom);

/// One damped Laplacian smoothing pass: half the value plus half the
/// weighted neighbour average.
std::vector<double> smooth_vertex_field(const IcosphereMesh& topology, const std::vector<double>& field,
                                        const std::vector<double>& weights);

/// Casts the base-mesh rays through the moved surface `moved` (same
/// connectivity) and returns the hit distances. Throws NotStarShaped when the
/// moved surface is not a radial graph about the origin.
std::vector<double> reproject_radial(const IcosphereMesh& topology, const std::vector<Vec3>& moved);

/// Ray i meets the plane through moved[i] with normal normals[i]. Same
/// star-shapedness checks as reproject_radial.
std::vector<double> reproject_tangent_planes(const IcosphereMesh& topology, const std::vector<Vec3>& moved,
                                             const std::vector<Vec3>& normals);

/// One explicit mean curvature flow step: vertices move dt * H along the
/// inward normal, then back onto their rays.
RadialSurface mcf_step(const RadialSurface& s, double dt, const FlowOptions& opts = {});

/// Largest dt accepted by mcf_step's stability guard.
double mcf_stable_dt(const SurfaceGeometry& geom, const FlowOptions& opts = {});

struct ConvexifyResult {
  RadialSurface surface;
  int steps = 0;
};

inline constexpr int kConvexifyBudget = 20000;

/// Repeats mcf_step (at half the stable step) until min H >= delta_H.
ConvexifyResult mean_convexify(const RadialSurface& s, double delta_H, int budget, const FlowOptions& opts = {});

/// One explicit inverse mean curvature flow step: vertices move dt / H along
/// the outward normal, then back onto their rays.
RadialSurface imcf_step(const RadialSurface& s, double dt, const FlowOptions& opts = {});

FlowTrace run_imcf(const RadialSurface& s, double t_end, double dt, const FlowOptions& opts = {});
FlowTrace run_mcf(const RadialSurface& s, double t_end, double dt, const FlowOptions& opts = {});

}  // namespace droplet
