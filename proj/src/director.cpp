#include "droplet/director.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/LU>

namespace droplet {

double ShellMesh::volume() const { return std::accumulate(tet_volume.begin(), tet_volume.end(), 0.0); }

namespace {

double tet_signed_volume(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3) {
  return (p1 - p0).dot((p2 - p0).cross(p3 - p0)) / 6.0;
}

// True when (a, b, c) sorted by index is an even permutation of the input.
bool sorted_is_even(const Triangle& t) {
  int inversions = 0;
  if (t[0] > t[1]) ++inversions;
  if (t[0] > t[2]) ++inversions;
  if (t[1] > t[2]) ++inversions;
  return inversions % 2 == 0;
}

}  // namespace

ShellMesh build_shell_mesh(const RadialSurface& surface, int layers) {
  require(layers >= kMinShellLayers && layers <= kMaxShellLayers, ErrorKind::InvalidInput,
          "shell layers must be in [2, 64], got " + std::to_string(layers));
  surface.validate();

  ShellMesh m;
  m.surface = surface;
  m.layers = layers;
  const int nv = static_cast<int>(surface.vertex_count());
  m.nodes.reserve(1 + static_cast<std::size_t>(layers) * nv);
  m.nodes.push_back(Vec3::Zero());
  for (int k = 1; k <= layers; ++k) {
    const double frac = static_cast<double>(k) / layers;
    for (int i = 0; i < nv; ++i) m.nodes.push_back(frac * surface.position(i));
  }
  m.boundary_nodes.resize(nv);
  for (int i = 0; i < nv; ++i) m.boundary_nodes[i] = m.node_index(layers, i);

  const auto& tris = surface.base->triangles;
  m.tets.reserve(tris.size() * (3 * (layers - 1) + 1));
  for (const auto& t : tris) {
    m.tets.push_back({0, m.node_index(1, t[0]), m.node_index(1, t[1]), m.node_index(1, t[2])});
  }
  // Prism split: each quad side takes the diagonal from the lower-index
  // bottom vertex to the higher-index top vertex, so neighbouring prisms agree.
  for (const auto& t : tris) {
    Triangle s = t;
    std::sort(s.begin(), s.end());
    const bool even = sorted_is_even(t);
    for (int k = 1; k < layers; ++k) {
      const int a = m.node_index(k, s[0]), b = m.node_index(k, s[1]), c = m.node_index(k, s[2]);
      const int a1 = m.node_index(k + 1, s[0]), b1 = m.node_index(k + 1, s[1]), c1 = m.node_index(k + 1, s[2]);
      std::array<Tet, 3> split{Tet{a, b, c, c1}, Tet{a, b, c1, b1}, Tet{a, a1, b1, c1}};
      for (auto& tet : split) {
        if (!even) std::swap(tet[0], tet[1]);
        m.tets.push_back(tet);
      }
    }
  }

  m.tet_volume.resize(m.tets.size());
  m.tet_gradient.resize(m.tets.size());
  for (std::size_t e = 0; e < m.tets.size(); ++e) {
    const auto& tet = m.tets[e];
    const Vec3& p0 = m.nodes[tet[0]];
    const double vol = tet_signed_volume(p0, m.nodes[tet[1]], m.nodes[tet[2]], m.nodes[tet[3]]);
    require(vol > 0, ErrorKind::DegenerateMesh, "inverted or flat tetrahedron " + std::to_string(e));
    m.tet_volume[e] = vol;
    Mat3 edges;
    edges.col(0) = m.nodes[tet[1]] - p0;
    edges.col(1) = m.nodes[tet[2]] - p0;
    edges.col(2) = m.nodes[tet[3]] - p0;
    const Mat3 inv = edges.inverse();
    auto& g = m.tet_gradient[e];
    g.block<3, 3>(1, 0) = inv;
    g.row(0) = -inv.colwise().sum();
  }
  return m;
}

DirectorField hedgehog(const ShellMesh& mesh) {
  DirectorField u;
  u.values.resize(mesh.node_count());
  for (std::size_t i = 0; i < mesh.node_count(); ++i) {
    const double r = mesh.nodes[i].norm();
    u.values[i] = r > 0 ? Vec3(mesh.nodes[i] / r) : Vec3(0, 0, 1);
  }
  return u;
}

DirectorField constant_field(const ShellMesh& mesh, const Vec3& value) {
  require(std::abs(value.norm() - 1.0) < 1e-9, ErrorKind::InvalidInput, "director value must be a unit vector");
  return DirectorField{std::vector<Vec3>(mesh.node_count(), value)};
}

Mat3 tet_gradient(const ShellMesh& mesh, std::span<const Vec3> values, std::size_t tet) {
  const auto& g = mesh.tet_gradient[tet];
  const auto& idx = mesh.tets[tet];
  Mat3 J = Mat3::Zero();
  for (int r = 0; r < 4; ++r) J += values[idx[r]] * g.row(r);
  return J;
}

double dirichlet_energy(const ShellMesh& mesh, std::span<const Vec3> values) {
  require(values.size() == mesh.node_count(), ErrorKind::InvalidInput,
          "field has " + std::to_string(values.size()) + " values, mesh has " + std::to_string(mesh.node_count()) +
              " nodes");
  double e = 0.0;
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    e += mesh.tet_volume[t] * tet_gradient(mesh, values, t).squaredNorm();
  }
  return e;
}

double dirichlet_energy(const ShellMesh& mesh, const DirectorField& u) { return dirichlet_energy(mesh, u.values); }

// ---------------------------------------------------------------------------

double StiffnessGraph::energy(std::span<const Vec3> u) const {
  double e = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) e += u[i].dot(diag[i] * u[i] + coupling(u, i));
  return e;
}

Vec3 StiffnessGraph::coupling(std::span<const Vec3> u, std::size_t i) const {
  Vec3 s = Vec3::Zero();
  for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) s += values[k] * u[columns[k]];
  return s;
}

StiffnessGraph assemble_stiffness(const ShellMesh& mesh) {
  struct Entry {
    int row, col;
    double value;
  };
  std::vector<Entry> entries;
  entries.reserve(mesh.tets.size() * 12);
  StiffnessGraph g;
  g.diag.assign(mesh.node_count(), 0.0);
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    const auto& grad = mesh.tet_gradient[t];
    const auto& idx = mesh.tets[t];
    for (int r = 0; r < 4; ++r) {
      g.diag[idx[r]] += mesh.tet_volume[t] * grad.row(r).squaredNorm();
      for (int s = 0; s < 4; ++s) {
        if (r == s) continue;
        entries.push_back({idx[r], idx[s], mesh.tet_volume[t] * grad.row(r).dot(grad.row(s))});
      }
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  g.offsets.assign(mesh.node_count() + 1, 0);
  for (std::size_t k = 0; k < entries.size();) {
    std::size_t next = k;
    double sum = 0.0;
    while (next < entries.size() && entries[next].row == entries[k].row && entries[next].col == entries[k].col) {
      sum += entries[next].value;
      ++next;
    }
    g.columns.push_back(entries[k].col);
    g.values.push_back(sum);
    g.offsets[entries[k].row + 1] += 1;
    if (sum > 0) g.has_negative_weights = true;
    k = next;
  }
  std::partial_sum(g.offsets.begin(), g.offsets.end(), g.offsets.begin());
  return g;
}

// ---------------------------------------------------------------------------

BoundaryCondition boundary_condition(const AnchoringSpec& spec) {
  spec.validate();
  if (spec.variant == AnchoringVariant::DirichletNormal) return DirichletNormal{};
  return FreeBoundary{spec.density()};
}

DirectorField initial_director(const ShellMesh& mesh, const BoundaryCondition& bc) {
  if (std::holds_alternative<DirichletNormal>(bc)) {
    DirectorField u = hedgehog(mesh);
    const auto geom = surface_geometry(mesh.surface);
    for (std::size_t i = 0; i < mesh.boundary_nodes.size(); ++i) u.values[mesh.boundary_nodes[i]] = geom.normal[i];
    return u;
  }
  return constant_field(mesh, Vec3(0, 0, 1));
}

namespace {

class Relaxation {
 public:
  Relaxation(const ShellMesh& mesh, const BoundaryCondition& bc)
      : mesh_(mesh), graph_(assemble_stiffness(mesh)), fixed_(mesh.node_count(), false) {
    const auto nb = mesh.boundary_nodes.size();
    if (const auto* custom = std::get_if<DirichletCustom>(&bc)) {
      require(custom->values.size() == nb, ErrorKind::InvalidInput, "custom boundary data has wrong length");
      prescribed_ = custom->values;
    } else {
      const auto geom = surface_geometry(mesh.surface);
      if (std::holds_alternative<DirichletNormal>(bc)) {
        prescribed_ = geom.normal;
      } else {
        density_ = std::get<FreeBoundary>(bc).density;
        free_ = true;
        normal_ = geom.normal;
        area_ = geom.vertex_area;
        boundary_slot_.assign(mesh.node_count(), -1);
        for (std::size_t i = 0; i < nb; ++i) boundary_slot_[mesh.boundary_nodes[i]] = static_cast<int>(i);
      }
    }
    if (!free_) {
      for (std::size_t i = 0; i < nb; ++i) {
        require(std::abs(prescribed_[i].norm() - 1.0) < 1e-9, ErrorKind::InvalidInput,
                "boundary data must be unit vectors");
        fixed_[mesh.boundary_nodes[i]] = true;
      }
    }
  }

  void impose(std::vector<Vec3>& u) const {
    if (free_) return;
    for (std::size_t i = 0; i < prescribed_.size(); ++i) u[mesh_.boundary_nodes[i]] = prescribed_[i];
  }

  double bulk(std::span<const Vec3> u) const { return graph_.energy(u); }

  double surface(std::span<const Vec3> u) const {
    if (!free_) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < mesh_.boundary_nodes.size(); ++i) {
      s += area_[i] * density_.value(u[mesh_.boundary_nodes[i]].dot(normal_[i]));
    }
    return s;
  }

  double energy(std::span<const Vec3> u) const { return bulk(u) + surface(u); }

  void sweep(std::vector<Vec3>& u) const {
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (fixed_[i]) continue;
      const Vec3 c = graph_.coupling(u, i);
      const int slot = free_ ? boundary_slot_[i] : -1;
      if (slot < 0) {
        // On the unit sphere the local energy is 2 u . c + const, so -c/|c|
        // is the exact minimizer whatever the signs of the weights.
        const double n = c.norm();
        if (n > 1e-300) u[i] = -c / n;
      } else {
        u[i] = relax_boundary(u[i], c, normal_[slot], area_[slot]);
      }
    }
  }

  /// Projected gradient step with backtracking; returns false when no
  /// decrease could be found.
  bool projected_gradient_step(std::vector<Vec3>& u, double& e) const {
    std::vector<Vec3> grad(u.size(), Vec3::Zero());
    double gnorm2 = 0.0;
    double dmax = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      dmax = std::max(dmax, graph_.diag[i]);
      if (fixed_[i]) continue;
      Vec3 g = 2.0 * (graph_.diag[i] * u[i] + graph_.coupling(u, i));
      if (free_ && boundary_slot_[i] >= 0) {
        const int s = boundary_slot_[i];
        g += area_[s] * density_.slope(u[i].dot(normal_[s])) * normal_[s];
      }
      grad[i] = g - g.dot(u[i]) * u[i];
      gnorm2 += grad[i].squaredNorm();
    }
    if (gnorm2 == 0.0) return true;
    for (double tau = 1.0 / dmax; tau > 1e-20 / dmax; tau *= 0.5) {
      std::vector<Vec3> trial = u;
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (!fixed_[i]) trial[i] = (u[i] - tau * grad[i]).normalized();
      }
      const double et = energy(trial);
      if (et < e) {
        u = std::move(trial);
        e = et;
        return true;
      }
    }
    return false;
  }

 private:
  Vec3 relax_boundary(Vec3 u, const Vec3& c, const Vec3& nu, double area) const {
    auto local = [&](const Vec3& v) { return 2.0 * v.dot(c) + area * density_.value(v.dot(nu)); };
    double current = local(u);
    for (int it = 0; it < 8; ++it) {
      const Vec3 g = 2.0 * c + area * density_.slope(u.dot(nu)) * nu;
      const double gn = g.norm();
      if (gn < 1e-300) break;
      const Vec3 target = -g / gn;
      bool moved = false;
      for (double s = 1.0; s > 1e-6; s *= 0.5) {
        const Vec3 blend = u + s * (target - u);
        if (blend.norm() < 1e-12) continue;
        const Vec3 trial = blend.normalized();
        const double value = local(trial);
        if (value < current) {
          u = trial;
          current = value;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    return u;
  }

  const ShellMesh& mesh_;
  StiffnessGraph graph_;
  std::vector<bool> fixed_;
  std::vector<Vec3> prescribed_;
  bool free_ = false;
  SurfaceDensity density_;
  std::vector<Vec3> normal_;
  std::vector<double> area_;
  std::vector<int> boundary_slot_;
};

}  // namespace

DirectorSolution minimize_director(const ShellMesh& mesh, const BoundaryCondition& bc, const SolverOptions& opts,
                                   const DirectorField* initial) {
  require(opts.tolerance > 0 && opts.max_sweeps > 0, ErrorKind::InvalidInput, "invalid solver options");
  const Relaxation relax(mesh, bc);

  DirectorSolution sol;
  sol.field = initial ? *initial : initial_director(mesh, bc);
  auto& u = sol.field.values;
  require(u.size() == mesh.node_count(), ErrorKind::InvalidInput, "initial field does not match mesh");
  for (auto& v : u) {
    const double n = v.norm();
    require(n > 0 && std::isfinite(n), ErrorKind::InvalidInput, "initial field has a zero or non-finite value");
    v /= n;
  }
  relax.impose(u);

  double e = relax.energy(u);
  sol.sweep_energies.push_back(e);
  while (sol.sweeps < opts.max_sweeps) {
    const double previous = e;
    if (!sol.used_projected_gradient) {
      std::vector<Vec3> before = u;
      relax.sweep(u);
      e = relax.energy(u);
      if (e > previous + 1e-12 * std::max(1.0, std::abs(previous))) {
        // Rounding-level increase: undo and switch to the monotone fallback.
        u = std::move(before);
        e = previous;
        sol.used_projected_gradient = true;
        continue;
      }
    } else if (!relax.projected_gradient_step(u, e)) {
      throw Error(ErrorKind::NumericalFailure, "projected-gradient fallback found no descent direction");
    }
    ++sol.sweeps;
    sol.sweep_energies.push_back(e);
    const double decrease = previous - e;
    if (decrease < opts.tolerance * std::max(std::abs(previous), 1e-300)) {
      sol.converged = true;
      break;
    }
  }
  sol.energy = e;
  sol.bulk = relax.bulk(u);
  if (!sol.converged) throw DirectorConvergenceFailure(std::move(sol));
  return sol;
}

}  // namespace droplet
