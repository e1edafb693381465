#pragma once

#include <vector>

#include "droplet/anchoring.hpp"
#include "droplet/director.hpp"
#include "droplet/geometry.hpp"

namespace droplet {

struct EnergyBreakdown {
  double bulk = 0.0;
  double surface = 0.0;
  double total = 0.0;
};

/// Director values on the boundary nodes, in surface vertex order.
std::vector<Vec3> boundary_trace(const ShellMesh& mesh, const DirectorField& u);

/// Vertex-lumped surface energy. DirichletNormal contributes mu * area;
/// ConstantAngle adds the (u . nu - c)^2 penalty to mu * area; SurfaceEnergy
/// integrates f(u . nu).
double anchoring_energy(const SurfaceGeometry& geom, const std::vector<Vec3>& trace, const AnchoringSpec& spec);

/// Integral of density(u . nu) alone.
double surface_integral(const SurfaceGeometry& geom, const std::vector<Vec3>& trace, const SurfaceDensity& density);

EnergyBreakdown total_energy(const ShellMesh& mesh, const DirectorField& u, const AnchoringSpec& spec);
EnergyBreakdown total_energy(const ShellMesh& mesh, const SurfaceGeometry& geom, const DirectorField& u,
                             const AnchoringSpec& spec);

/// Boundary violation of the contact-angle condition: integral of (u . nu - c)^2.
double contact_angle_violation(const SurfaceGeometry& geom, const std::vector<Vec3>& trace, double c);

}  // namespace droplet
