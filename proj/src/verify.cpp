#include "droplet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <cstdio>
#include <random>

#include "droplet/energy.hpp"
#include "droplet/error.hpp"
#include "droplet/flows.hpp"
#include "droplet/optimizer.hpp"
#include "droplet/parallel.hpp"

namespace droplet {

bool VerificationReport::pass() const {
  return std::all_of(cases.begin(), cases.end(), [](const VerificationCase& c) { return c.pass; });
}

io::Json VerificationReport::to_json() const {
  io::Json rows = io::Json::array();
  for (const auto& c : cases) {
    io::Json row{{"id", c.id},
                 {"lhs", io::number(c.lhs)},
                 {"rhs", io::number(c.rhs)},
                 {"margin", io::number(c.margin)},
                 {"tol", io::number(c.tol)},
                 {"pass", c.pass}};
    if (!c.flags.empty()) {
      io::Json flags = io::Json::object();
      for (const auto& [name, value] : c.flags) flags[name] = value;
      row["flags"] = std::move(flags);
    }
    if (!c.note.empty()) row["note"] = c.note;
    rows.push_back(std::move(row));
  }
  return io::Json{{"suite", suite}, {"cases", std::move(rows)}, {"pass", pass()}};
}

namespace {

constexpr double kPi = std::numbers::pi;

VerificationCase failed_case(const std::string& id, const std::string& why, double tol) {
  VerificationCase c;
  c.id = id;
  c.lhs = std::numeric_limits<double>::quiet_NaN();
  c.rhs = std::numeric_limits<double>::quiet_NaN();
  c.margin = std::numeric_limits<double>::quiet_NaN();
  c.tol = tol;
  c.pass = false;
  c.note = why;
  return c;
}

// Runs body(i) for every shape, turning library errors into failed rows.
template <typename Body>
std::vector<VerificationCase> per_shape(const std::vector<NamedSurface>& shapes, int threads, double tol, Body body) {
  std::vector<VerificationCase> rows(shapes.size());
  parallel_for(shapes.size(), threads, [&](std::size_t i) {
    try {
      rows[i] = body(shapes[i]);
    } catch (const Error& e) {
      rows[i] = failed_case(shapes[i].id, e.what(), tol);
    }
  });
  return rows;
}

}  // namespace

std::vector<NamedSurface> default_shapes(int level, unsigned seed) {
  const auto mesh = std::make_shared<const IcosphereMesh>(build_icosphere(level));
  std::vector<NamedSurface> out;
  for (const char* text : {"sphere:0.5", "sphere:1", "sphere:2", "ellipsoid:1,1,1.2", "ellipsoid:1,1,1.5",
                           "ellipsoid:1,1,2", "ellipsoid:0.8,1,1.25"}) {
    out.push_back({text, radial_surface(mesh, parse_shape(text))});
  }
  for (unsigned s : {seed, seed + 1}) {
    const auto raw = radial_surface(mesh, seeded_perturbation(1.0, 0.05, s));
    out.push_back({"random:1,0.05," + std::to_string(s), mean_convexify(raw, 0.1, kConvexifyBudget).surface});
  }
  return out;
}

VerificationReport verify_bulk_vs_totalH(const std::vector<NamedSurface>& shapes, const Resolution& res) {
  VerificationReport rep{"bulk-vs-totalH", {}};
  rep.cases = per_shape(shapes, res.threads, kBulkTolerance, [&](const NamedSurface& s) {
    const auto geom = surface_geometry(s.surface);
    if (geom.min_H() <= 0) return failed_case(s.id, "shape is not mean convex", kBulkTolerance);
    const ShellMesh mesh = build_shell_mesh(s.surface, res.layers);
    VerificationCase c;
    c.id = s.id;
    c.tol = kBulkTolerance;
    try {
      const auto sol = minimize_director(mesh, DirichletNormal{}, res.solver);
      c.lhs = sol.bulk;
      c.note = "sweeps=" + std::to_string(sol.sweeps);
    } catch (const DirectorConvergenceFailure& e) {
      return failed_case(s.id, e.what(), kBulkTolerance);
    }
    c.rhs = geom.total_mean_curvature;
    c.margin = c.lhs - (1.0 - kBulkTolerance) * c.rhs;
    c.pass = c.margin >= 0;
    return c;
  });
  return rep;
}

VerificationReport verify_minkowski(const std::vector<NamedSurface>& shapes) {
  VerificationReport rep{"minkowski", {}};
  rep.cases = per_shape(shapes, 1, kMinkowskiTolerance, [&](const NamedSurface& s) {
    const auto geom = surface_geometry(s.surface);
    VerificationCase c;
    c.id = s.id;
    c.tol = kMinkowskiTolerance;
    c.lhs = geom.total_mean_curvature;
    c.rhs = 4.0 * std::sqrt(kPi * geom.area);
    const double deficit = c.lhs - c.rhs;
    const double band = kMinkowskiTolerance * c.lhs;
    const bool equality = s.surface.asphericity() < kEqualityAsphericity;
    c.flags.emplace_back("equality", equality);
    c.margin = std::min(deficit + band, equality ? band - std::abs(deficit) : deficit);
    c.pass = equality ? c.margin >= 0 : c.margin > 0;
    return c;
  });
  return rep;
}

VerificationReport verify_isoperimetric(const std::vector<NamedSurface>& shapes) {
  VerificationReport rep{"isoperimetric", {}};
  rep.cases = per_shape(shapes, 1, kIsoperimetricTolerance, [&](const NamedSurface& s) {
    const auto geom = surface_geometry(s.surface);
    VerificationCase c;
    c.id = s.id;
    c.tol = kIsoperimetricTolerance;
    c.lhs = geom.area;
    c.rhs = 4.0 * kPi * std::pow(3.0 * geom.volume / (4.0 * kPi), 2.0 / 3.0);
    c.margin = c.lhs - (1.0 - kIsoperimetricTolerance) * c.rhs;
    c.pass = c.margin >= 0;
    return c;
  });
  return rep;
}

std::vector<VerificationCase> divergence_identity_cases(const ShellMesh& mesh, const DirectorField& u,
                                                        const std::string& id) {
  require(u.values.size() == mesh.node_count(), ErrorKind::InvalidInput, "field does not conform to mesh");
  double worst_slack = std::numeric_limits<double>::infinity();
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  double worst_residual = 0.0;
  double residual_scale = 1.0;
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    const Mat3 J = tet_gradient(mesh, u.values, t);
    Vec3 mean = Vec3::Zero();
    Vec3 center = Vec3::Zero();
    for (int a : mesh.tets[t]) {
      mean += 0.25 * u.values[a];
      center += 0.25 * mesh.nodes[a];
    }
    // Tangential part: a unit field has a gradient orthogonal to itself.
    Mat3 JT = J;
    if (mean.norm() > 1e-8) {
      const Vec3 n = mean.normalized();
      JT = (Mat3::Identity() - n * n.transpose()) * J;
    }
    const double lhs = J.squaredNorm();
    const double rhs = JT.trace() * JT.trace() - (JT * JT).trace();
    if (lhs - rhs < worst_slack) {
      worst_slack = lhs - rhs;
      worst_lhs = lhs;
      worst_rhs = rhs;
    }

    // div of w = (tr J) u - J u on the affine interpolant, by central
    // differences (exact for affine w up to rounding).
    const double h = std::cbrt(mesh.tet_volume[t]);
    auto w = [&](const Vec3& x) {
      const Vec3 ux = mean + J * (x - center);
      return Vec3(J.trace() * ux - J * ux);
    };
    double div = 0.0;
    for (int a = 0; a < 3; ++a) {
      const Vec3 e = h * Vec3::Unit(a);
      div += (w(center + e)[a] - w(center - e)[a]) / (2.0 * h);
    }
    const double expected = J.trace() * J.trace() - (J * J).trace();
    worst_residual = std::max(worst_residual, std::abs(div - expected));
    residual_scale = std::max(residual_scale, 1.0 + lhs);
  }

  VerificationCase ineq;
  ineq.id = id + "/inequality";
  ineq.lhs = worst_lhs;
  ineq.rhs = worst_rhs;
  ineq.tol = kDivergenceSlack;
  ineq.margin = worst_slack + kDivergenceSlack;
  ineq.pass = ineq.margin >= 0;
  ineq.note = "worst of " + std::to_string(mesh.tets.size()) + " tets";

  VerificationCase ident;
  ident.id = id + "/identity";
  ident.lhs = worst_residual;
  ident.rhs = 0.0;
  ident.tol = 1e-9 * residual_scale;
  ident.margin = ident.tol - worst_residual;
  ident.pass = ident.margin >= 0;
  ident.note = "max |div w - ((tr J)^2 - tr(J^2))| over tets";
  return {ineq, ident};
}

VerificationReport verify_divergence_identity(const ShellMesh& mesh, const DirectorField& u, const std::string& id) {
  return {"divergence-identity", divergence_identity_cases(mesh, u, id)};
}

DirectorField random_unit_field(const ShellMesh& mesh, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  DirectorField u;
  u.values.resize(mesh.node_count());
  for (auto& v : u.values) {
    do {
      v = Vec3(normal(rng), normal(rng), normal(rng));
    } while (v.norm() < 1e-6);
    v.normalize();
  }
  return u;
}

namespace {

double minimized_total(const RadialSurface& s, const AnchoringSpec& spec, const Resolution& res) {
  const ShellMesh mesh = build_shell_mesh(s, res.layers);
  const auto sol = minimize_director(mesh, boundary_condition(spec), res.solver);
  return total_energy(mesh, sol.field, spec).total;
}

}  // namespace

VerificationReport lsc_experiment(const std::vector<NamedSurface>& family, const NamedSurface& limit,
                                  const AnchoringSpec& spec, const Resolution& res) {
  spec.validate();
  require(!family.empty(), ErrorKind::InvalidInput, "empty shape family");
  VerificationReport rep{"lsc", {}};
  double e_limit = 0.0;
  try {
    e_limit = minimized_total(limit.surface, spec, res);
  } catch (const Error& e) {
    rep.cases.push_back(failed_case("limit:" + limit.id, e.what(), kLiminfTolerance));
    return rep;
  }
  std::vector<double> energies(family.size(), std::numeric_limits<double>::quiet_NaN());
  auto rows = per_shape(family, res.threads, kLiminfTolerance, [&](const NamedSurface& s) {
    VerificationCase c;
    c.id = s.id;
    c.tol = kLiminfTolerance;
    c.lhs = minimized_total(s.surface, spec, res);
    c.rhs = e_limit;
    c.margin = c.lhs - (1.0 - kLiminfTolerance) * e_limit;
    c.pass = c.margin >= 0;
    return c;
  });
  for (std::size_t i = 0; i < rows.size(); ++i) energies[i] = rows[i].lhs;
  rep.cases = std::move(rows);

  const std::size_t tail = family.size() / 2;
  double tail_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = tail; i < energies.size(); ++i) tail_min = std::min(tail_min, energies[i]);
  VerificationCase c;
  c.id = "liminf";
  c.tol = kLiminfTolerance;
  c.lhs = tail_min;
  c.rhs = e_limit;
  c.margin = tail_min - (1.0 - kLiminfTolerance) * e_limit;
  c.pass = c.margin >= 0;
  c.note = "minimum over the last " + std::to_string(family.size() - tail) + " members; limit " + limit.id;
  rep.cases.push_back(c);
  return rep;
}

VerificationReport verify_penalty_limit(const NamedSurface& shape, double c, const std::vector<double>& mu_pens,
                                        const Resolution& res) {
  require(mu_pens.size() >= 2, ErrorKind::InvalidInput, "need at least two penalty weights");
  VerificationReport rep{"penalty-limit", {}};
  const ShellMesh mesh = build_shell_mesh(shape.surface, res.layers);
  const auto geom = surface_geometry(shape.surface);
  std::vector<double> violation(mu_pens.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> errors(mu_pens.size());
  parallel_for(mu_pens.size(), res.threads, [&](std::size_t k) {
    try {
      const auto spec = AnchoringSpec::constant_angle(1.0, c, mu_pens[k]);
      const auto sol = minimize_director(mesh, boundary_condition(spec), res.solver);
      violation[k] = contact_angle_violation(geom, boundary_trace(mesh, sol.field), c);
    } catch (const Error& e) {
      errors[k] = e.what();
    }
  });
  for (std::size_t k = 1; k < mu_pens.size(); ++k) {
    char id[96];
    std::snprintf(id, sizeof id, "%s/mu_pen=%g<%g", shape.id.c_str(), mu_pens[k], mu_pens[k - 1]);
    if (!errors[k].empty() || !errors[k - 1].empty()) {
      rep.cases.push_back(failed_case(id, errors[k].empty() ? errors[k - 1] : errors[k], 0.0));
      continue;
    }
    VerificationCase row;
    row.id = id;
    row.lhs = violation[k];
    row.rhs = violation[k - 1];
    row.tol = 0.0;
    row.margin = row.rhs - row.lhs;
    row.pass = row.margin > 0;
    row.note = "integral of (u.nu - c)^2 at the larger weight vs the smaller";
    rep.cases.push_back(row);
  }
  return rep;
}

namespace {

VerificationCase bound_case(std::string id, double measured, double bound, std::string note = {}) {
  VerificationCase c;
  c.id = std::move(id);
  c.lhs = measured;
  c.rhs = bound;
  c.tol = bound;
  c.margin = bound - measured;
  c.pass = measured <= bound;
  c.note = std::move(note);
  return c;
}

Vec3 quarter_turn_x(const Vec3& v) { return {v.x(), -v.z(), v.y()}; }

}  // namespace

VerificationReport verify_invariants(const Resolution& res, unsigned seed) {
  VerificationReport rep{"invariants", {}};
  auto guarded = [&](const std::string& id, auto body) {
    try {
      body();
    } catch (const Error& e) {
      rep.cases.push_back(failed_case(id, e.what(), 0.0));
    }
  };
  const auto mesh = std::make_shared<const IcosphereMesh>(build_icosphere(res.level));

  // Director solves: unit norm, monotone sweeps, Dirichlet data untouched.
  guarded("director", [&] {
    struct Setup {
      std::string id;
      AnchoringSpec spec;
    };
    const auto surface = radial_surface(mesh, EllipsoidShape{1.0, 1.0, 1.3});
    const ShellMesh shell = build_shell_mesh(surface, res.layers);
    const auto geom = surface_geometry(surface);
    for (const Setup& s : {Setup{"dirichlet-normal", AnchoringSpec::dirichlet_normal(1.0)},
                           Setup{"surface-energy", AnchoringSpec::quadratic(1.0, 0.5)},
                           Setup{"constant-angle", AnchoringSpec::constant_angle(1.0, 0.0, 10.0)}}) {
      const auto sol = minimize_director(shell, boundary_condition(s.spec), res.solver);
      double norm_err = 0.0;
      for (const auto& v : sol.field.values) norm_err = std::max(norm_err, std::abs(v.norm() - 1.0));
      rep.cases.push_back(bound_case("unit-norm/" + s.id, norm_err, 1e-9));
      double rise = 0.0;
      for (std::size_t k = 1; k < sol.sweep_energies.size(); ++k) {
        rise = std::max(rise, (sol.sweep_energies[k] - sol.sweep_energies[k - 1]) / std::abs(sol.sweep_energies[0]));
      }
      rep.cases.push_back(bound_case("monotone-sweeps/" + s.id, rise, 1e-12, "largest relative rise per sweep"));
      if (s.spec.variant == AnchoringVariant::DirichletNormal) {
        double moved = 0.0;
        for (std::size_t i = 0; i < shell.boundary_nodes.size(); ++i) {
          moved = std::max(moved, (sol.field.values[shell.boundary_nodes[i]] - geom.normal[i]).cwiseAbs().maxCoeff());
        }
        rep.cases.push_back(bound_case("dirichlet-immutable", moved, 0.0));
      }
    }
  });

  guarded("gauss-bonnet", [&] {
    for (const auto& s : default_shapes(res.level, seed)) {
      const auto geom = surface_geometry(s.surface);
      double total_k = 0.0;
      for (std::size_t i = 0; i < geom.K.size(); ++i) total_k += geom.K[i] * geom.vertex_area[i];
      rep.cases.push_back(bound_case("gauss-bonnet/" + s.id, std::abs(total_k - 4.0 * kPi), 1e-8));
    }
  });

  // Short optimizer run: descent, volume restore, containment.
  OptimizationConfig cfg;
  cfg.level = std::min(res.level, 2);
  cfg.layers = std::min(res.layers, 6);
  cfg.max_iterations = 4;
  cfg.solver = res.solver;
  cfg.threads = res.threads;
  guarded("optimizer", [&] {
    const auto r = optimize(cfg);
    double rise = 0.0;
    double vol_err = 0.0;
    for (std::size_t k = 0; k < r.history.size(); ++k) {
      vol_err = std::max(vol_err, std::abs(r.history[k].volume - cfg.volume) / cfg.volume);
      if (k > 0) rise = std::max(rise, r.history[k].total - r.history[k - 1].total);
    }
    rep.cases.push_back(bound_case("optimizer-descent", rise, 1e-10, "largest rise of accepted totals"));
    rep.cases.push_back(bound_case("volume-restore", vol_err, 1e-6, "max |V - V0| / V0 over history"));
    const double max_rho = *std::max_element(r.surface.rho.begin(), r.surface.rho.end());
    rep.cases.push_back(bound_case("containment", max_rho, cfg.r0()));
  });

  // The rotated problem keeps labels and connectivity and turns the ray
  // directions, so mesh, basis and sweep order all map onto each other.
  guarded("frame-covariance", [&] {
    const auto small = std::make_shared<const IcosphereMesh>(build_icosphere(cfg.level));
    IcosphereMesh turned = *small;
    for (auto& v : turned.vertices) v = quarter_turn_x(v);
    const auto turned_mesh = std::make_shared<const IcosphereMesh>(std::move(turned));
    const auto shape = seeded_perturbation(1.0, 0.2, seed);
    std::vector<double> rho(small->vertex_count());
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = shape_radius(shape, small->vertices[i]);
    const auto a = optimize(cfg, radial_surface(small, rho));
    const auto b = optimize(cfg, radial_surface(turned_mesh, rho));
    const double rel = std::abs(a.energy.total - b.energy.total) / std::abs(a.energy.total);
    double drho = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) drho = std::max(drho, std::abs(a.surface.rho[i] - b.surface.rho[i]));
    double dfield = 0.0;
    for (std::size_t i = 0; i < a.field.values.size(); ++i) {
      dfield = std::max(dfield, (quarter_turn_x(a.field.values[i]) - b.field.values[i]).norm());
    }
    rep.cases.push_back(bound_case("frame-covariance/energy", rel, 1e-8, "quarter turn about x; relative gap"));
    // Energies stop at 1e-8 relative per sweep; iterates are only accurate
    // to about the square root of that.
    rep.cases.push_back(bound_case("frame-covariance/shape", drho, 1e-6, "max |rho - rho_turned|"));
    rep.cases.push_back(bound_case("frame-covariance/field", dfield, 1e-4, "max |R u - u_turned|"));
  });

  guarded("determinism", [&] {
    const auto shapes = default_shapes(res.level, seed);
    const std::string first = io::dump(verify_minkowski(shapes).to_json());
    const std::string second = io::dump(verify_minkowski(default_shapes(res.level, seed)).to_json());
    const auto run = [&] {
      const auto r = optimize(cfg);
      return io::dump(io::optimization_json(r));
    };
    const std::string third = run();
    const std::string fourth = run();
    rep.cases.push_back(bound_case("rerun-bytes/minkowski", first == second ? 0.0 : 1.0, 0.0));
    rep.cases.push_back(bound_case("rerun-bytes/optimizer", third == fourth ? 0.0 : 1.0, 0.0));
  });
  return rep;
}

std::vector<VerificationReport> run_suite(const std::string& name, unsigned seed, int threads) {
  const bool all = name == "all";
  require(all || std::find(kSuiteNames.begin(), kSuiteNames.end(), name) != kSuiteNames.end(), ErrorKind::InvalidInput,
          "unknown suite '" + name + "'");
  std::vector<VerificationReport> out;
  Resolution fine{4, 16, {}, threads};
  Resolution coarse{3, 8, {}, threads};
  auto wants = [&](const char* s) { return all || name == s; };

  if (wants("bulk")) {
    std::vector<NamedSurface> convex;
    for (auto& s : default_shapes(fine.level, seed)) {
      if (surface_geometry(s.surface).min_H() > 0) convex.push_back(std::move(s));
    }
    out.push_back(verify_bulk_vs_totalH(convex, fine));
  }
  // Geometry-only suites run finer: the discretization bias of the sphere
  // deficit (about -0.015 at level 4) would swamp small perturbations.
  if (wants("minkowski")) out.push_back(verify_minkowski(default_shapes(kGeometryLevel, seed)));
  if (wants("isoperimetric")) out.push_back(verify_isoperimetric(default_shapes(kGeometryLevel, seed)));
  if (wants("divergence")) {
    const auto mesh = std::make_shared<const IcosphereMesh>(build_icosphere(coarse.level));
    VerificationReport rep{"divergence-identity", {}};
    auto add = [&](const ShellMesh& m, const DirectorField& u, const std::string& id) {
      for (auto& c : divergence_identity_cases(m, u, id)) rep.cases.push_back(std::move(c));
    };
    const ShellMesh ball = build_shell_mesh(radial_surface(mesh, SphereShape{1.0}), coarse.layers);
    add(ball, constant_field(ball, Vec3::UnitZ()), "constant");
    add(ball, hedgehog(ball), "hedgehog");
    add(ball, random_unit_field(ball, seed), "random");
    const ShellMesh egg = build_shell_mesh(radial_surface(mesh, EllipsoidShape{1.0, 1.0, 1.5}), coarse.layers);
    add(egg, minimize_director(egg, DirichletNormal{}, coarse.solver).field, "minimized");
    out.push_back(std::move(rep));
  }
  if (wants("lsc")) {
    const auto mesh = std::make_shared<const IcosphereMesh>(build_icosphere(coarse.level));
    std::vector<NamedSurface> family;
    for (int h : {2, 4, 8, 16}) {
      const double c = 1.0 + 1.0 / h;
      const EllipsoidShape shape{1.0, 1.0, c};
      family.push_back({format_shape(shape), radial_surface(mesh, shape)});
    }
    out.push_back(lsc_experiment(family, {"sphere:1", radial_surface(mesh, SphereShape{1.0})},
                                 AnchoringSpec::dirichlet_normal(1.0), coarse));
  }
  if (wants("penalty")) {
    const auto mesh = std::make_shared<const IcosphereMesh>(build_icosphere(coarse.level));
    out.push_back(
        verify_penalty_limit({"sphere:1", radial_surface(mesh, SphereShape{1.0})}, 0.0, {1.0, 10.0, 100.0}, coarse));
  }
  if (wants("invariants")) out.push_back(verify_invariants(coarse, seed));
  return out;
}

}  // namespace droplet
