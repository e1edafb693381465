#include "droplet/flows.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

#include "droplet/error.hpp"

namespace droplet {

std::string FlowTrace::to_csv() const {
  std::string out = "t,area,volume,totalH,y,minH\n";
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.t, r.area, r.volume, r.total_H, r.y,
                  r.min_H);
    out += line;
  }
  return out;
}

FlowRow flow_row(double t, const SurfaceGeometry& geom) {
  return {t, geom.area, geom.volume, geom.total_mean_curvature, minkowski_ratio(geom), geom.min_H()};
}

std::vector<double> smooth_vertex_field(const IcosphereMesh& topology, const std::vector<double>& field,
                                        const std::vector<double>& weights) {
  // Half-step Laplacian pass: the amplification factor stays in [0, 1] for
  // every mode, so oscillations are damped and never sign-flipped.
  std::vector<double> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    double num = 0.0;
    double den = 0.0;
    for (int j : topology.neighbors[i]) {
      num += weights[j] * field[j];
      den += weights[j];
    }
    out[i] = 0.5 * field[i] + 0.5 * num / den;
  }
  return out;
}

namespace {

// Distance along `dir` from the origin to triangle (a, b, c), if hit.
std::optional<double> ray_hit(const Vec3& dir, const Vec3& a, const Vec3& b, const Vec3& c) {
  constexpr double kSlack = 1e-10;
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 p = dir.cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) < 1e-300) return std::nullopt;
  const Vec3 s = -a;
  const double beta = s.dot(p) / det;
  if (beta < -kSlack || beta > 1 + kSlack) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double gamma = dir.dot(q) / det;
  if (gamma < -kSlack || beta + gamma > 1 + kSlack) return std::nullopt;
  const double t = e2.dot(q) / det;
  if (t <= 0) return std::nullopt;
  return t;
}

}  // namespace

std::vector<double> reproject_radial(const IcosphereMesh& topology, const std::vector<Vec3>& moved) {
  // A closed surface whose every face is seen counterclockwise from the
  // origin is a radial graph: each ray crosses it exactly once.
  for (const auto& t : topology.triangles) {
    const double v = moved[t[0]].dot(moved[t[1]].cross(moved[t[2]]));
    require(v > 0, ErrorKind::NotStarShaped, "moved surface folds over as seen from the origin");
  }

  std::vector<double> rho(topology.vertex_count());
  std::vector<int> candidates;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const Vec3& dir = topology.vertices[i];
    std::optional<double> hit;
    auto try_triangles = [&](const std::vector<int>& tris) {
      for (int t : tris) {
        const auto& tri = topology.triangles[t];
        hit = ray_hit(dir, moved[tri[0]], moved[tri[1]], moved[tri[2]]);
        if (hit) return;
      }
    };
    try_triangles(topology.vertex_triangles[i]);
    if (!hit) {
      candidates.clear();
      for (int j : topology.neighbors[i]) {
        candidates.insert(candidates.end(), topology.vertex_triangles[j].begin(), topology.vertex_triangles[j].end());
      }
      try_triangles(candidates);
    }
    if (!hit) {
      candidates.resize(topology.triangles.size());
      for (std::size_t t = 0; t < candidates.size(); ++t) candidates[t] = static_cast<int>(t);
      try_triangles(candidates);
    }
    require(hit.has_value(), ErrorKind::NotStarShaped, "ray " + std::to_string(i) + " misses the moved surface");
    rho[i] = *hit;
  }
  return rho;
}

std::vector<double> reproject_tangent_planes(const IcosphereMesh& topology, const std::vector<Vec3>& moved,
                                             const std::vector<Vec3>& normals) {
  for (const auto& t : topology.triangles) {
    const double v = moved[t[0]].dot(moved[t[1]].cross(moved[t[2]]));
    require(v > 0, ErrorKind::NotStarShaped, "moved surface folds over as seen from the origin");
  }
  std::vector<double> rho(topology.vertex_count());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double cosine = topology.vertices[i].dot(normals[i]);
    require(cosine > 0, ErrorKind::NotStarShaped, "normal at vertex " + std::to_string(i) + " faces the origin");
    rho[i] = moved[i].dot(normals[i]) / cosine;
  }
  return rho;
}

namespace {

std::vector<double> flow_curvature(const RadialSurface& s, const SurfaceGeometry& g, const FlowOptions& opts) {
  return opts.smooth_curvature ? smooth_vertex_field(*s.base, g.H, g.vertex_area) : g.H;
}

RadialSurface move_and_reproject(const RadialSurface& s, const SurfaceGeometry& g, const std::vector<double>& speed,
                                 const FlowOptions& opts) {
  std::vector<Vec3> moved(g.position.size());
  for (std::size_t i = 0; i < moved.size(); ++i) moved[i] = g.position[i] + speed[i] * g.normal[i];
  if (opts.reprojection == Reprojection::MovedFaces) {
    return radial_surface(s.base, reproject_radial(*s.base, moved));
  }
  return radial_surface(s.base, reproject_tangent_planes(*s.base, moved, g.normal));
}

}  // namespace

double mcf_stable_dt(const SurfaceGeometry& geom, const FlowOptions& opts) {
  double max_h = 0.0;
  for (double h : geom.H) max_h = std::max(max_h, std::abs(h));
  return opts.cfl * geom.min_edge_length / max_h;
}

RadialSurface mcf_step(const RadialSurface& s, double dt, const FlowOptions& opts) {
  require(dt > 0, ErrorKind::InvalidTimestep, "time step must be positive");
  const auto g = surface_geometry(s);
  require(dt <= mcf_stable_dt(g, opts), ErrorKind::InvalidTimestep,
          "dt * max|H| exceeds the stability limit " + std::to_string(opts.cfl) + " * min edge length");
  const auto H = flow_curvature(s, g, opts);
  std::vector<double> speed(H.size());
  for (std::size_t i = 0; i < H.size(); ++i) speed[i] = -dt * H[i];
  return move_and_reproject(s, g, speed, opts);
}

ConvexifyResult mean_convexify(const RadialSurface& s, double delta_H, int budget, const FlowOptions& opts) {
  require(delta_H > 0, ErrorKind::InvalidInput, "delta_H must be positive");
  require(budget >= 0, ErrorKind::InvalidInput, "step budget must be nonnegative");
  ConvexifyResult r{s, 0};
  for (;;) {
    const auto g = surface_geometry(r.surface);
    if (g.min_H() >= delta_H) return r;
    require(r.steps < budget, ErrorKind::ConvergenceFailure,
            "min H still below " + std::to_string(delta_H) + " after " + std::to_string(budget) + " MCF steps");
    r.surface = mcf_step(r.surface, 0.5 * mcf_stable_dt(g, opts), opts);
    ++r.steps;
  }
}

RadialSurface imcf_step(const RadialSurface& s, double dt, const FlowOptions& opts) {
  require(dt > 0, ErrorKind::InvalidTimestep, "time step must be positive");
  const auto g = surface_geometry(s);
  const double min_h = g.min_H();
  require(min_h >= opts.h_floor, ErrorKind::MeanConvexityLost,
          "min H = " + std::to_string(min_h) + " is below the floor " + std::to_string(opts.h_floor));
  require(dt <= opts.cfl * min_h * g.min_edge_length, ErrorKind::InvalidTimestep,
          "dt exceeds the stability limit cfl * min H * min edge length");
  const auto H = flow_curvature(s, g, opts);
  std::vector<double> speed(H.size());
  for (std::size_t i = 0; i < H.size(); ++i) {
    require(H[i] >= opts.h_floor, ErrorKind::MeanConvexityLost, "smoothed H fell below the floor");
    speed[i] = dt / H[i];
  }
  return move_and_reproject(s, g, speed, opts);
}

namespace {

template <typename Step>
FlowTrace run_flow(const RadialSurface& s, double t_end, double dt, const FlowOptions& opts, Step step) {
  require(dt > 0 && t_end > 0 && std::isfinite(t_end), ErrorKind::InvalidInput, "need dt > 0 and t_end > 0");
  FlowTrace trace;
  trace.curvature_smoothing = opts.smooth_curvature;
  RadialSurface current = s;
  trace.rows.push_back(flow_row(0.0, surface_geometry(current)));
  const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  for (long k = 1; k <= steps; ++k) {
    current = step(current, dt, opts);
    trace.rows.push_back(flow_row(k * dt, surface_geometry(current)));
  }
  return trace;
}

}  // namespace

FlowTrace run_imcf(const RadialSurface& s, double t_end, double dt, const FlowOptions& opts) {
  const auto g = surface_geometry(s);
  require(g.min_H() >= opts.h_floor, ErrorKind::MeanConvexityLost, "initial surface is not mean convex");
  return run_flow(s, t_end, dt, opts,
                  [](const RadialSurface& c, double h, const FlowOptions& o) { return imcf_step(c, h, o); });
}

FlowTrace run_mcf(const RadialSurface& s, double t_end, double dt, const FlowOptions& opts) {
  return run_flow(s, t_end, dt, opts,
                  [](const RadialSurface& c, double h, const FlowOptions& o) { return mcf_step(c, h, o); });
}

}  // namespace droplet
