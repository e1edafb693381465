#include "droplet/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "droplet/error.hpp"

namespace droplet::io {

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json number(double x) { return Json(round12(x)); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, what + " is not valid JSON: " + e.what());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::InvalidInput, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::InvalidInput, "cannot write '" + path + "'");
  out << text;
  require(out.good(), ErrorKind::InvalidInput, "write to '" + path + "' failed");
}

namespace {

Json vec3(const Vec3& v) { return Json::array({number(v.x()), number(v.y()), number(v.z())}); }

template <typename T>
T get(const Json& j, const char* key, const std::string& what) {
  require(j.is_object() && j.contains(key), ErrorKind::InvalidInput, what + " is missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(ErrorKind::InvalidInput, what + " has a malformed \"" + key + "\"");
  }
}

template <typename T>
void maybe(const Json& j, const char* key, T& out, const std::string& what) {
  if (j.contains(key)) out = get<T>(j, key, what);
}

void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const std::string& what) {
  require(j.is_object(), ErrorKind::InvalidInput, what + " must be a JSON object");
  std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& item : j.items()) {
    require(known.count(item.key()) > 0, ErrorKind::InvalidInput, what + " has unknown key \"" + item.key() + "\"");
  }
}

}  // namespace

Json surface_json(const RadialSurface& s) {
  Json j;
  j["level"] = s.base->level;
  Json verts = Json::array();
  for (const auto& v : s.positions()) verts.push_back(vec3(v));
  j["vertices"] = std::move(verts);
  Json tris = Json::array();
  for (const auto& t : s.base->triangles) tris.push_back(Json::array({t[0], t[1], t[2]}));
  j["triangles"] = std::move(tris);
  Json rho = Json::array();
  for (double r : s.rho) rho.push_back(number(r));
  j["rho"] = std::move(rho);
  return j;
}

RadialSurface surface_from_json(const Json& j) {
  const int level = get<int>(j, "level", "surface");
  const auto rho = get<std::vector<double>>(j, "rho", "surface");
  auto mesh = std::make_shared<const IcosphereMesh>(build_icosphere(level));
  require(rho.size() == mesh->vertex_count(), ErrorKind::InvalidInput,
          "surface rho has " + std::to_string(rho.size()) + " entries, level " + std::to_string(level) + " needs " +
              std::to_string(mesh->vertex_count()));
  return radial_surface(mesh, rho);
}

std::string surface_obj(const RadialSurface& s) {
  std::string out;
  char line[160];
  for (const auto& v : s.positions()) {
    std::snprintf(line, sizeof line, "v %.12g %.12g %.12g\n", v.x(), v.y(), v.z());
    out += line;
  }
  for (const auto& t : s.base->triangles) {
    std::snprintf(line, sizeof line, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
    out += line;
  }
  return out;
}

Json field_json(const DirectorField& u) {
  Json values = Json::array();
  for (const auto& v : u.values) values.push_back(vec3(v));
  return Json{{"values", std::move(values)}};
}

DirectorField field_from_json(const Json& j) {
  const auto raw = get<std::vector<std::vector<double>>>(j, "values", "director field");
  DirectorField u;
  for (const auto& v : raw) {
    require(v.size() == 3, ErrorKind::InvalidInput, "director values must be 3-vectors");
    u.values.emplace_back(v[0], v[1], v[2]);
  }
  return u;
}

Json energy_report_json(const DirectorSolution& sol, const EnergyBreakdown& e) {
  return Json{{"bulk", number(e.bulk)},
              {"surface", number(e.surface)},
              {"total", number(e.total)},
              {"sweeps", sol.sweeps},
              {"converged", sol.converged}};
}

Json anchoring_json(const AnchoringSpec& spec) {
  Json j;
  j["variant"] = std::string(to_string(spec.variant));
  switch (spec.variant) {
    case AnchoringVariant::DirichletNormal:
      j["mu"] = number(spec.mu);
      break;
    case AnchoringVariant::ConstantAngle:
      j["mu"] = number(spec.mu);
      j["c"] = number(spec.c);
      j["mu_pen"] = number(spec.mu_pen);
      break;
    case AnchoringVariant::SurfaceEnergy:
      if (spec.envelope.empty()) {
        j["mu"] = number(spec.mu);
        j["w"] = number(spec.w);
      } else {
        Json env = Json::array();
        for (const auto& l : spec.envelope) env.push_back(Json::array({number(l.slope), number(l.intercept)}));
        j["envelope"] = std::move(env);
      }
      break;
  }
  return j;
}

AnchoringSpec anchoring_from_json(const Json& j) {
  reject_unknown(j, {"variant", "mu", "w", "c", "mu_pen", "envelope"}, "anchoring");
  AnchoringSpec spec;
  spec.variant = parse_anchoring_variant(get<std::string>(j, "variant", "anchoring"));
  maybe(j, "mu", spec.mu, "anchoring");
  maybe(j, "w", spec.w, "anchoring");
  maybe(j, "c", spec.c, "anchoring");
  maybe(j, "mu_pen", spec.mu_pen, "anchoring");
  if (j.contains("envelope")) {
    for (const auto& line : get<std::vector<std::vector<double>>>(j, "envelope", "anchoring")) {
      require(line.size() == 2, ErrorKind::InvalidInput, "envelope lines must be [slope, intercept]");
      spec.envelope.push_back({line[0], line[1]});
    }
  }
  spec.validate();
  return spec;
}

Json config_json(const OptimizationConfig& cfg) {
  Json j;
  j["initial"] = format_shape(cfg.initial);
  j["anchoring"] = anchoring_json(cfg.anchoring);
  j["volume"] = number(cfg.volume);
  j["containment_radius"] = number(cfg.r0());
  j["level"] = cfg.level;
  j["layers"] = cfg.layers;
  j["convexify_delta_H"] = number(cfg.convexify_delta_H);
  j["basis_size"] = cfg.basis_size;
  j["translation_modes"] = cfg.translation_modes;
  j["fd_increment"] = number(cfg.fd_increment);
  j["initial_step"] = number(cfg.initial_step);
  j["backtrack"] = number(cfg.backtrack);
  j["armijo"] = number(cfg.armijo);
  j["max_backtracks"] = cfg.max_backtracks;
  j["max_iterations"] = cfg.max_iterations;
  j["tolerance"] = number(cfg.tolerance);
  j["seed"] = cfg.seed;
  j["solver"] = Json{{"tolerance", number(cfg.solver.tolerance)}, {"max_sweeps", cfg.solver.max_sweeps}};
  return j;
}

OptimizationConfig config_from_json(const Json& j) {
  const std::string what = "optimization config";
  reject_unknown(j,
                 {"initial", "anchoring", "volume", "containment_radius", "level", "layers", "convexify_delta_H",
                  "basis_size", "translation_modes", "fd_increment", "initial_step", "backtrack", "armijo",
                  "max_backtracks", "max_iterations", "tolerance", "seed", "threads", "solver"},
                 what);
  OptimizationConfig cfg;
  if (j.contains("initial")) cfg.initial = parse_shape(get<std::string>(j, "initial", what));
  if (j.contains("anchoring")) cfg.anchoring = anchoring_from_json(j.at("anchoring"));
  maybe(j, "volume", cfg.volume, what);
  maybe(j, "containment_radius", cfg.containment_radius, what);
  maybe(j, "level", cfg.level, what);
  maybe(j, "layers", cfg.layers, what);
  maybe(j, "convexify_delta_H", cfg.convexify_delta_H, what);
  maybe(j, "basis_size", cfg.basis_size, what);
  maybe(j, "translation_modes", cfg.translation_modes, what);
  maybe(j, "fd_increment", cfg.fd_increment, what);
  maybe(j, "initial_step", cfg.initial_step, what);
  maybe(j, "backtrack", cfg.backtrack, what);
  maybe(j, "armijo", cfg.armijo, what);
  maybe(j, "max_backtracks", cfg.max_backtracks, what);
  maybe(j, "max_iterations", cfg.max_iterations, what);
  maybe(j, "tolerance", cfg.tolerance, what);
  maybe(j, "seed", cfg.seed, what);
  maybe(j, "threads", cfg.threads, what);
  if (j.contains("solver")) {
    const Json& s = j.at("solver");
    reject_unknown(s, {"tolerance", "max_sweeps"}, "solver options");
    maybe(s, "tolerance", cfg.solver.tolerance, "solver options");
    maybe(s, "max_sweeps", cfg.solver.max_sweeps, "solver options");
    require(cfg.solver.tolerance > 0 && cfg.solver.max_sweeps > 0, ErrorKind::InvalidInput,
            "solver options must be positive");
  }
  cfg.validate();
  return cfg;
}

Json optimization_json(const OptimizationResult& r) {
  Json j;
  j["termination"] = r.termination;
  j["energy"] = Json{{"bulk", number(r.energy.bulk)}, {"surface", number(r.energy.surface)}, {"total", number(r.energy.total)}};
  const auto geom = surface_geometry(r.surface);
  j["volume"] = number(geom.volume);
  j["area"] = number(geom.area);
  j["asphericity"] = number(r.surface.asphericity());
  j["iterations"] = r.history.empty() ? 0 : r.history.back().iteration;
  j["clamped"] = r.clamped;
  j["fd_increment"] = number(r.final_fd_increment);
  Json hist = Json::array();
  for (const auto& h : r.history) {
    hist.push_back(Json{{"iteration", h.iteration},
                        {"total", number(h.total)},
                        {"bulk", number(h.bulk)},
                        {"surface", number(h.surface)},
                        {"volume", number(h.volume)},
                        {"asphericity", number(h.asphericity)}});
  }
  j["history"] = std::move(hist);
  j["surface"] = surface_json(r.surface);
  j["field"] = field_json(r.field);
  return j;
}

Json polygon_json(const planar::Polygon2D& p) {
  Json verts = Json::array();
  for (const auto& v : p.vertices) verts.push_back(Json::array({number(v.x()), number(v.y())}));
  return Json{{"vertices", std::move(verts)}};
}

planar::Polygon2D polygon_from_json(const Json& j) {
  std::vector<planar::Vec2> verts;
  for (const auto& v : get<std::vector<std::vector<double>>>(j, "vertices", "polygon")) {
    require(v.size() == 2, ErrorKind::InvalidInput, "polygon vertices must be [x, y] pairs");
    verts.emplace_back(v[0], v[1]);
  }
  return planar::make_polygon(std::move(verts));
}

namespace {

Json pair_json(const planar::PairResult& p) {
  return Json{{"x", Json::array({number(p.x.x()), number(p.x.y())})},
              {"y", Json::array({number(p.y.x()), number(p.y.y())})},
              {"feasible", p.feasible},
              {"M", number(p.M)}};
}

}  // namespace

Json uniformity_json(const planar::UniformityReport& r) {
  Json j;
  j["M_estimate"] = number(r.M_estimate);
  j["pairs_tested"] = r.pairs_tested;
  j["M_max"] = number(r.M_max);
  j["all_feasible"] = r.all_feasible;
  j["uniform_at_M_max"] = r.all_feasible;
  j["worst_pair"] = pair_json(r.worst);
  Json table = Json::array();
  for (const auto& p : r.pairs) table.push_back(pair_json(p));
  j["feasibility"] = std::move(table);
  j["note"] = r.note;
  return j;
}

Json density_json(const planar::DensityReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"r", number(row.r)},
                        {"min_interior", number(row.min_interior)},
                        {"min_exterior", number(row.min_exterior)}});
  }
  return Json{{"c", number(r.c)},
              {"samples", r.samples},
              {"rows", std::move(rows)},
              {"interior_condition", r.interior_condition},
              {"exterior_condition", r.exterior_condition}};
}

Json landscape_json(const std::vector<LandscapeRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back(Json{{"parameter", number(r.parameter)},
                       {"bulk", number(r.bulk)},
                       {"surface", number(r.surface)},
                       {"total", number(r.total)},
                       {"totalH", number(r.total_mean_curvature)}});
  }
  return out;
}

}  // namespace droplet::io
