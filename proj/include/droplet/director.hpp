#pragma once

#include <array>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "droplet/anchoring.hpp"
#include "droplet/error.hpp"
#include "droplet/geometry.hpp"

namespace droplet {

using Tet = std::array<int, 4>;
using Mat3 = Eigen::Matrix3d;

/// Tetrahedral discretization of the star-shaped domain. Node 0 is the
/// center; node 1 + (k-1)*V + i sits at fraction k/L along vertex ray i.
struct ShellMesh {
  RadialSurface surface;
  int layers = 0;
  std::vector<Vec3> nodes;
  std::vector<Tet> tets;
  std::vector<int> boundary_nodes;  // outermost layer, surface vertex order

  std::vector<double> tet_volume;
  /// Row r holds the gradient of the barycentric function of tets[t][r].
  std::vector<Eigen::Matrix<double, 4, 3>> tet_gradient;

  std::size_t node_count() const { return nodes.size(); }
  int node_index(int layer, int vertex) const {
    return layer == 0 ? 0 : 1 + (layer - 1) * static_cast<int>(surface.vertex_count()) + vertex;
  }
  double volume() const;
};

inline constexpr int kMinShellLayers = 2;
inline constexpr int kMaxShellLayers = 64;

ShellMesh build_shell_mesh(const RadialSurface& surface, int layers);

struct DirectorField {
  std::vector<Vec3> values;
};

DirectorField hedgehog(const ShellMesh& mesh);
DirectorField constant_field(const ShellMesh& mesh, const Vec3& value);

/// Gradient J (J(a, b) = d u_a / d x_b) of the piecewise-linear interpolant on
/// one tet. Values need not be unit vectors.
Mat3 tet_gradient(const ShellMesh& mesh, std::span<const Vec3> values, std::size_t tet);

/// Sum over tets of |grad u|^2 * volume for the P1 interpolant.
double dirichlet_energy(const ShellMesh& mesh, std::span<const Vec3> values);
double dirichlet_energy(const ShellMesh& mesh, const DirectorField& u);

/// Off-diagonal part of the P1 stiffness matrix in compressed rows. The
/// Dirichlet energy equals sum_i diag_i |u_i|^2 + sum_{i != j} K_ij u_i . u_j.
struct StiffnessGraph {
  std::vector<std::size_t> offsets;
  std::vector<int> columns;
  std::vector<double> values;
  std::vector<double> diag;
  bool has_negative_weights = false;  // some K_ij > 0, i.e. negative coupling weight

  double energy(std::span<const Vec3> u) const;
  /// sum_{j != i} K_ij u_j
  Vec3 coupling(std::span<const Vec3> u, std::size_t i) const;
};

StiffnessGraph assemble_stiffness(const ShellMesh& mesh);

// ---------------------------------------------------------------------------

struct DirichletNormal {};
struct DirichletCustom {
  std::vector<Vec3> values;  // one per boundary node
};
/// Boundary nodes relax against the surface term sum_i A_i f(u_i . nu_i).
struct FreeBoundary {
  SurfaceDensity density;
};

using BoundaryCondition = std::variant<DirichletNormal, DirichletCustom, FreeBoundary>;

BoundaryCondition boundary_condition(const AnchoringSpec& spec);

struct SolverOptions {
  double tolerance = 1e-8;  // relative energy decrease per sweep
  int max_sweeps = 5000;
};

struct DirectorSolution {
  DirectorField field;
  double energy = 0.0;  // bulk + u-dependent surface term
  double bulk = 0.0;
  int sweeps = 0;
  bool converged = false;
  bool used_projected_gradient = false;
  std::vector<double> sweep_energies;  // energy after each sweep, index 0 = initial
};

/// Raised when the sweep budget runs out; carries the last iterate.
class DirectorConvergenceFailure : public Error {
 public:
  explicit DirectorConvergenceFailure(DirectorSolution last)
      : Error(ErrorKind::ConvergenceFailure, "director relaxation did not converge within " +
                                                 std::to_string(last.sweeps) + " sweeps"),
        last_(std::move(last)) {}
  const DirectorSolution& last_iterate() const { return last_; }

 private:
  DirectorSolution last_;
};

/// Default starting field for a boundary condition: hedgehog with normal
/// boundary data for DirichletNormal, constant (0,0,1) otherwise.
DirectorField initial_director(const ShellMesh& mesh, const BoundaryCondition& bc);

/// Nonlinear Gauss-Seidel relaxation of the Dirichlet energy over unit
/// fields. Dirichlet boundary values are imposed on the starting field.
DirectorSolution minimize_director(const ShellMesh& mesh, const BoundaryCondition& bc,
                                   const SolverOptions& opts = {}, const DirectorField* initial = nullptr);

}  // namespace droplet
