#include "droplet/energy.hpp"

#include <cmath>

#include "droplet/error.hpp"

namespace droplet {

std::vector<Vec3> boundary_trace(const ShellMesh& mesh, const DirectorField& u) {
  require(u.values.size() == mesh.node_count(), ErrorKind::InvalidInput, "field does not conform to mesh");
  std::vector<Vec3> trace;
  trace.reserve(mesh.boundary_nodes.size());
  for (int n : mesh.boundary_nodes) trace.push_back(u.values[n]);
  return trace;
}

double surface_integral(const SurfaceGeometry& geom, const std::vector<Vec3>& trace, const SurfaceDensity& density) {
  require(trace.size() == geom.vertex_area.size(), ErrorKind::InvalidInput,
          "trace length does not match the surface vertex count");
  double s = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    require(std::abs(trace[i].norm() - 1.0) <= 1e-6, ErrorKind::InvalidInput,
            "trace value " + std::to_string(i) + " is not a unit vector");
    s += density.value(trace[i].dot(geom.normal[i])) * geom.vertex_area[i];
  }
  return s;
}

double anchoring_energy(const SurfaceGeometry& geom, const std::vector<Vec3>& trace, const AnchoringSpec& spec) {
  spec.validate();
  const double f = surface_integral(geom, trace, spec.density());
  return spec.tension() * geom.area + f;
}

EnergyBreakdown total_energy(const ShellMesh& mesh, const SurfaceGeometry& geom, const DirectorField& u,
                             const AnchoringSpec& spec) {
  EnergyBreakdown e;
  e.bulk = dirichlet_energy(mesh, u);
  e.surface = anchoring_energy(geom, boundary_trace(mesh, u), spec);
  e.total = e.bulk + e.surface;
  return e;
}

EnergyBreakdown total_energy(const ShellMesh& mesh, const DirectorField& u, const AnchoringSpec& spec) {
  return total_energy(mesh, surface_geometry(mesh.surface), u, spec);
}

double contact_angle_violation(const SurfaceGeometry& geom, const std::vector<Vec3>& trace, double c) {
  return surface_integral(geom, trace, SurfaceDensity(QuadraticDensity::penalty(1.0, c)));
}

}  // namespace droplet
