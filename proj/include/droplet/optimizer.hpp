#pragma once

#include <optional>
#include <string>
#include <vector>

#include "droplet/anchoring.hpp"
#include "droplet/director.hpp"
#include "droplet/energy.hpp"
#include "droplet/geometry.hpp"

namespace droplet {

struct OptimizationConfig {
  ShapeDescriptor initial = EllipsoidShape{1.0, 1.0, 1.3};
  AnchoringSpec anchoring = AnchoringSpec::dirichlet_normal(1.0);
  double volume = 4.0 * 3.14159265358979323846 / 3.0;
  /// Containment radius R0; zero selects twice the equal-volume radius.
  double containment_radius = 0.0;
  int level = 3;
  int layers = 8;
  /// When positive, the initial shape is first run through mean curvature
  /// flow until min H reaches this value.
  double convexify_delta_H = 0.0;

  /// Number of modes taken from shape_basis order.
  int basis_size = kSphereModeCount;
  /// Degree-1 modes translate the shape against the fixed center node; off by
  /// default since translations leave the continuum energy unchanged.
  bool translation_modes = false;
  double fd_increment = 1e-3;
  /// First trial step: largest change of rho, relative to the equal-volume radius.
  double initial_step = 0.05;
  double backtrack = 0.5;
  double armijo = 1e-4;
  int max_backtracks = 20;

  int max_iterations = 40;
  double tolerance = 1e-5;  // relative change of the total energy
  unsigned seed = 0;
  int threads = 1;
  SolverOptions solver;

  void validate() const;
  double equal_volume_radius() const;
  double rho_min() const;
  double r0() const;
};

struct HistoryRow {
  int iteration = 0;
  double total = 0.0;
  double bulk = 0.0;
  double surface = 0.0;
  double volume = 0.0;
  double asphericity = 0.0;
};

struct OptimizationResult {
  RadialSurface surface;
  DirectorField field;
  EnergyBreakdown energy;
  std::vector<HistoryRow> history;
  std::string termination;  // converged, max-iterations, stalled, director-failure
  bool clamped = false;     // some iterate hit the rho bounds
  double final_fd_increment = 0.0;

  /// CSV with header iteration,total,bulk,surface,volume,asphericity.
  std::string history_csv() const;
};

struct ModeDerivative {
  int mode = 0;
  double value = 0.0;
  bool valid = true;
};

/// Mode indices 0, then degree 1 (when enabled), then degrees 2..4, truncated
/// to `count`.
std::vector<int> shape_basis(int count, bool translation_modes);

/// Radial perturbation field of mode k on the base directions.
std::vector<double> mode_field(const IcosphereMesh& mesh, int k);

/// Scales rho so that the enclosed volume equals `volume`.
RadialSurface restore_volume(const RadialSurface& s, double volume);

/// Energy with the director frozen on the moved mesh. Under normal anchoring
/// the boundary nodes follow the new normals; the interior keeps its values.
EnergyBreakdown frozen_director_energy(const RadialSurface& s, const DirectorField& u, const AnchoringSpec& spec,
                                       int layers);

/// Central differences of the frozen-director energy along each mode, each
/// probe restored to `volume`. Probes that leave the star-shaped class mark
/// that mode invalid.
std::vector<ModeDerivative> shape_gradient_fd(const RadialSurface& s, const DirectorField& u, const AnchoringSpec& spec,
                                              int layers, const std::vector<int>& modes, double increment,
                                              double volume, int threads = 1);

/// Director solve for the anchoring model; warm-started when `warm` is given.
DirectorSolution solve_director(const ShellMesh& mesh, const AnchoringSpec& spec, const SolverOptions& opts,
                                const DirectorField* warm = nullptr);

OptimizationResult optimize(const OptimizationConfig& cfg);
/// Starts from the given surface instead of cfg.initial.
OptimizationResult optimize(const OptimizationConfig& cfg, const RadialSurface& initial);

struct LandscapeRow {
  double parameter = 0.0;
  double bulk = 0.0;
  double surface = 0.0;
  double total = 0.0;
  double total_mean_curvature = 0.0;
};

/// Ellipsoid(1, 1, aspect) scaled to `volume`, director minimized per row.
std::vector<LandscapeRow> energy_landscape_scan(const std::vector<double>& aspects, const AnchoringSpec& spec,
                                                double volume, int level, int layers,
                                                const SolverOptions& solver = {}, int threads = 1);

std::string landscape_csv(const std::vector<LandscapeRow>& rows);

}  // namespace droplet
