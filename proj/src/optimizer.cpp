#include "droplet/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "droplet/error.hpp"
#include "droplet/flows.hpp"
#include "droplet/parallel.hpp"

namespace droplet {

void OptimizationConfig::validate() const {
  anchoring.validate();
  require(volume > 0 && std::isfinite(volume), ErrorKind::InvalidInput, "target volume must be positive");
  require(containment_radius >= 0, ErrorKind::InvalidInput, "containment radius must be nonnegative");
  require(level >= 0 && level <= 6, ErrorKind::InvalidInput, "optimizer mesh level must lie in [0, 6]");
  require(layers >= kMinShellLayers && layers <= kMaxShellLayers, ErrorKind::InvalidInput, "layers out of range");
  require(basis_size >= 1 && basis_size <= kSphereModeCount, ErrorKind::InvalidInput, "basis size must lie in [1, 25]");
  require(fd_increment > 0, ErrorKind::InvalidInput, "finite-difference increment must be positive");
  require(initial_step > 0, ErrorKind::InvalidInput, "initial step must be positive");
  require(backtrack > 0 && backtrack < 1, ErrorKind::InvalidInput, "backtracking factor must lie in (0, 1)");
  require(armijo >= 0 && armijo < 1, ErrorKind::InvalidInput, "sufficient-decrease constant must lie in [0, 1)");
  require(max_backtracks >= 1, ErrorKind::InvalidInput, "need at least one line-search trial");
  require(max_iterations >= 0, ErrorKind::InvalidInput, "iteration budget must be nonnegative");
  require(convexify_delta_H >= 0, ErrorKind::InvalidInput, "convexify threshold must be nonnegative");
  require(tolerance > 0, ErrorKind::InvalidInput, "tolerance must be positive");
  require(threads >= 1, ErrorKind::InvalidInput, "threads must be at least 1");
  require(r0() > equal_volume_radius(), ErrorKind::InvalidInput, "containment ball is smaller than the target volume");
}

double OptimizationConfig::equal_volume_radius() const { return std::cbrt(3.0 * volume / (4.0 * std::numbers::pi)); }

double OptimizationConfig::rho_min() const { return 0.1 * std::cbrt(volume); }

double OptimizationConfig::r0() const {
  return containment_radius > 0 ? containment_radius : 2.0 * equal_volume_radius();
}

std::string OptimizationResult::history_csv() const {
  std::string out = "iteration,total,bulk,surface,volume,asphericity\n";
  char line[256];
  for (const auto& r : history) {
    std::snprintf(line, sizeof line, "%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.iteration, r.total, r.bulk, r.surface,
                  r.volume, r.asphericity);
    out += line;
  }
  return out;
}

std::vector<int> shape_basis(int count, bool translation_modes) {
  require(count >= 1 && count <= kSphereModeCount, ErrorKind::InvalidInput, "basis size must lie in [1, 25]");
  std::vector<int> modes;
  for (int k = 0; k < kSphereModeCount && static_cast<int>(modes.size()) < count; ++k) {
    if (mode_degree(k) == 1 && !translation_modes) continue;
    modes.push_back(k);
  }
  return modes;
}

std::vector<double> mode_field(const IcosphereMesh& mesh, int k) {
  std::vector<double> f(mesh.vertex_count());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = sphere_harmonic(k, mesh.vertices[i]);
  return f;
}

RadialSurface restore_volume(const RadialSurface& s, double volume) {
  const double v = surface_geometry(s).volume;
  require(v > 0, ErrorKind::DegenerateMesh, "surface encloses no volume");
  return s.scaled(std::cbrt(volume / v));
}

EnergyBreakdown frozen_director_energy(const RadialSurface& s, const DirectorField& u, const AnchoringSpec& spec,
                                       int layers) {
  const ShellMesh mesh = build_shell_mesh(s, layers);
  const SurfaceGeometry geom = surface_geometry(s);
  if (spec.variant != AnchoringVariant::DirichletNormal) return total_energy(mesh, geom, u, spec);
  DirectorField v = u;
  for (std::size_t i = 0; i < mesh.boundary_nodes.size(); ++i) v.values[mesh.boundary_nodes[i]] = geom.normal[i];
  return total_energy(mesh, geom, v, spec);
}

std::vector<ModeDerivative> shape_gradient_fd(const RadialSurface& s, const DirectorField& u, const AnchoringSpec& spec,
                                              int layers, const std::vector<int>& modes, double increment,
                                              double volume, int threads) {
  require(!modes.empty() && modes.size() <= static_cast<std::size_t>(kSphereModeCount), ErrorKind::InvalidInput,
          "basis must hold 1 to 25 modes");
  require(increment > 0, ErrorKind::InvalidInput, "finite-difference increment must be positive");
  std::vector<ModeDerivative> out(modes.size());
  parallel_for(modes.size(), threads, [&](std::size_t k) {
    const auto phi = mode_field(*s.base, modes[k]);
    auto probe = [&](double sign) {
      std::vector<double> rho = s.rho;
      for (std::size_t i = 0; i < rho.size(); ++i) rho[i] += sign * increment * phi[i];
      const auto moved = restore_volume(radial_surface(s.base, std::move(rho)), volume);
      return frozen_director_energy(moved, u, spec, layers).total;
    };
    out[k].mode = modes[k];
    try {
      out[k].value = (probe(1.0) - probe(-1.0)) / (2.0 * increment);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotStarShaped && e.kind() != ErrorKind::DegenerateMesh) throw;
      out[k].valid = false;
      out[k].value = 0.0;
    }
  });
  return out;
}

DirectorSolution solve_director(const ShellMesh& mesh, const AnchoringSpec& spec, const SolverOptions& opts,
                                const DirectorField* warm) {
  return minimize_director(mesh, boundary_condition(spec), opts, warm);
}

namespace {

struct Iterate {
  RadialSurface surface;
  DirectorSolution solution;
  EnergyBreakdown energy;
};

Iterate evaluate(const RadialSurface& s, const OptimizationConfig& cfg, const DirectorField* warm) {
  const ShellMesh mesh = build_shell_mesh(s, cfg.layers);
  Iterate it{s, solve_director(mesh, cfg.anchoring, cfg.solver, warm), {}};
  it.energy = total_energy(mesh, surface_geometry(s), it.solution.field, cfg.anchoring);
  return it;
}

HistoryRow history_row(int iteration, const Iterate& it) {
  return {iteration,           it.energy.total, it.energy.bulk, it.energy.surface, surface_geometry(it.surface).volume,
          it.surface.asphericity()};
}

// Clamps rho into [rho_min, R0] and restores the volume. Returns nullopt if
// the restored surface leaves the bounds again.
std::optional<RadialSurface> admissible(std::vector<double> rho, const RadialSurface& like,
                                        const OptimizationConfig& cfg, bool& clamped) {
  const double lo = cfg.rho_min();
  const double hi = cfg.r0();
  for (double& r : rho) {
    const double c = std::clamp(r, lo, hi);
    clamped = clamped || c != r;
    r = c;
  }
  const auto s = restore_volume(radial_surface(like.base, std::move(rho)), cfg.volume);
  const auto [mn, mx] = std::minmax_element(s.rho.begin(), s.rho.end());
  if (*mn < lo || *mx > hi) return std::nullopt;
  return s;
}

}  // namespace

OptimizationResult optimize(const OptimizationConfig& cfg) {
  cfg.validate();
  const auto mesh = std::make_shared<const IcosphereMesh>(build_icosphere(cfg.level));
  auto initial = radial_surface(mesh, cfg.initial);
  if (cfg.convexify_delta_H > 0) initial = mean_convexify(initial, cfg.convexify_delta_H, kConvexifyBudget).surface;
  return optimize(cfg, initial);
}

OptimizationResult optimize(const OptimizationConfig& cfg, const RadialSurface& initial) {
  cfg.validate();
  initial.validate();
  OptimizationResult result;
  result.final_fd_increment = cfg.fd_increment;

  bool clamped = false;
  auto start = admissible(initial.rho, initial, cfg, clamped);
  require(start.has_value(), ErrorKind::InvalidInput, "initial shape does not fit the containment ball");

  Iterate current;
  auto finish = [&](std::string reason) {
    result.surface = current.surface;
    result.field = current.solution.field;
    result.energy = current.energy;
    result.termination = std::move(reason);
    result.clamped = clamped;
    return result;
  };

  try {
    current = evaluate(*start, cfg, nullptr);
  } catch (const DirectorConvergenceFailure& e) {
    current.surface = *start;
    current.solution = e.last_iterate();
    current.energy = total_energy(build_shell_mesh(*start, cfg.layers), e.last_iterate().field, cfg.anchoring);
    result.history.push_back(history_row(0, current));
    return finish("director-failure");
  }
  result.history.push_back(history_row(0, current));

  const double r_eq = cfg.equal_volume_radius();
  double step = cfg.initial_step * r_eq;
  double increment = cfg.fd_increment;
  bool increment_halved = false;
  int quiet = 0;

  const auto basis = shape_basis(cfg.basis_size, cfg.translation_modes);
  for (int iteration = 1; iteration <= cfg.max_iterations;) {
    const auto grad = shape_gradient_fd(current.surface, current.solution.field, cfg.anchoring, cfg.layers, basis,
                                        increment, cfg.volume, cfg.threads);
    std::vector<double> direction(current.surface.vertex_count(), 0.0);
    double grad_sq = 0.0;
    for (const auto& g : grad) {
      if (!g.valid || g.value == 0.0) continue;
      grad_sq += g.value * g.value;
      const auto phi = mode_field(*current.surface.base, g.mode);
      for (std::size_t i = 0; i < direction.size(); ++i) direction[i] -= g.value * phi[i];
    }
    double sup = 0.0;
    for (double d : direction) sup = std::max(sup, std::abs(d));
    if (sup == 0.0) return finish("converged");
    // Unit-sup direction; the slope along it is -grad_sq / sup.
    for (double& d : direction) d /= sup;
    const double slope = grad_sq / sup;

    std::optional<Iterate> accepted;
    double alpha = std::min(2.0 * step, cfg.initial_step * r_eq);
    for (int trial = 0; trial < cfg.max_backtracks && !accepted; ++trial, alpha *= cfg.backtrack) {
      std::vector<double> rho = current.surface.rho;
      for (std::size_t i = 0; i < rho.size(); ++i) rho[i] += alpha * direction[i];
      bool trial_clamped = false;
      std::optional<RadialSurface> candidate;
      try {
        candidate = admissible(std::move(rho), current.surface, cfg, trial_clamped);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotStarShaped && e.kind() != ErrorKind::DegenerateMesh) throw;
      }
      if (!candidate) continue;
      Iterate next;
      try {
        next = evaluate(*candidate, cfg, &current.solution.field);
      } catch (const DirectorConvergenceFailure&) {
        return finish("director-failure");
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateMesh) throw;
        continue;
      }
      if (next.energy.total <= current.energy.total - cfg.armijo * alpha * slope) {
        accepted = std::move(next);
        clamped = clamped || trial_clamped;
        step = alpha;
      }
    }

    if (!accepted) {
      if (!increment_halved) {
        increment_halved = true;
        increment *= 0.5;
        result.final_fd_increment = increment;
        continue;
      }
      return finish("stalled");
    }

    const double change = std::abs(current.energy.total - accepted->energy.total) / std::abs(current.energy.total);
    current = std::move(*accepted);
    result.history.push_back(history_row(iteration, current));
    quiet = change < cfg.tolerance ? quiet + 1 : 0;
    if (quiet >= 3) return finish("converged");
    ++iteration;
  }
  return finish("max-iterations");
}

std::vector<LandscapeRow> energy_landscape_scan(const std::vector<double>& aspects, const AnchoringSpec& spec,
                                                double volume, int level, int layers, const SolverOptions& solver,
                                                int threads) {
  spec.validate();
  require(!aspects.empty(), ErrorKind::InvalidInput, "empty aspect grid");
  require(volume > 0, ErrorKind::InvalidInput, "volume must be positive");
  for (double a : aspects) require(a > 0 && std::isfinite(a), ErrorKind::InvalidInput, "aspect must be positive");
  const auto mesh = std::make_shared<const IcosphereMesh>(build_icosphere(level));
  std::vector<LandscapeRow> rows(aspects.size());
  parallel_for(aspects.size(), threads, [&](std::size_t k) {
    const auto s = restore_volume(radial_surface(mesh, EllipsoidShape{1.0, 1.0, aspects[k]}), volume);
    const ShellMesh shell = build_shell_mesh(s, layers);
    const auto geom = surface_geometry(s);
    const auto sol = solve_director(shell, spec, solver);
    const auto e = total_energy(shell, geom, sol.field, spec);
    rows[k] = {aspects[k], e.bulk, e.surface, e.total, geom.total_mean_curvature};
  });
  return rows;
}

std::string landscape_csv(const std::vector<LandscapeRow>& rows) {
  std::string out = "parameter,bulk,surface,total,totalH\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g,%.12g\n", r.parameter, r.bulk, r.surface, r.total,
                  r.total_mean_curvature);
    out += line;
  }
  return out;
}

}  // namespace droplet
