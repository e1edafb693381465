// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "droplet/director.hpp"
#include "droplet/error.hpp"
#include "droplet/flows.hpp"
#include "droplet/muniform.hpp"
#include "droplet/optimizer.hpp"
#include "droplet/verify.hpp"

using namespace droplet;
namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::shared_ptr<const IcosphereMesh> ico(int level) {
  return std::make_shared<const IcosphereMesh>(build_icosphere(level));
}

Outcome hedgehog_energy() {
  std::vector<double> err;
  double e4 = 0.0;
  for (auto [level, layers] : {std::pair{2, 4}, {3, 8}, {4, 16}}) {
    const auto mesh = build_shell_mesh(radial_surface(ico(level), SphereShape{1.0}), layers);
    const double e = dirichlet_energy(mesh, hedgehog(mesh));
    err.push_back(std::abs(e - 8 * kPi) / (8 * kPi));
    e4 = e;
  }
  const bool ok = err[2] <= 0.05 && err[1] < err[0] && err[2] < err[1];
  return {ok, fmt("E(L4/16)=%.6f vs 8pi=%.6f; rel err %.4f %.4f %.4f", e4, 8 * kPi, err[0], err[1], err[2])};
}

Outcome sphere_geometry() {
  const auto g = surface_geometry(radial_surface(ico(4), SphereShape{1.0}));
  const double ea = std::abs(g.area / (4 * kPi) - 1);
  const double ev = std::abs(g.volume / (4 * kPi / 3) - 1);
  const double eh = std::abs(g.total_mean_curvature / (8 * kPi) - 1);
  return {ea <= 0.005 && ev <= 0.005 && eh <= 0.02,
          fmt("rel err area %.2e volume %.2e totalH %.2e", ea, ev, eh)};
}

Outcome minkowski() {
  const auto shapes = default_shapes(kGeometryLevel, 0);
  const auto rep = verify_minkowski(shapes);
  bool flags_ok = true;
  double worst = 1e300;
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const bool sphere = shapes[k].id.rfind("sphere", 0) == 0;
    flags_ok = flags_ok && rep.cases[k].flags.at(0).second == sphere;
    worst = std::min(worst, rep.cases[k].margin);
  }
  return {rep.pass() && flags_ok, fmt("%zu shapes, smallest margin %.3e, equality flags on spheres only: %s",
                                      shapes.size(), worst, flags_ok ? "yes" : "no")};
}

Outcome imcf() {
  const auto trace = run_imcf(radial_surface(ico(4), EllipsoidShape{1, 1, 1.5}), 3.0, 1e-3);
  const auto& rows = trace.rows;
  bool mono = true;
  double worst_area = 0.0;
  for (std::size_t k = 1; k < rows.size(); ++k) mono = mono && rows[k].y <= rows[k - 1].y + 1e-4;
  for (const auto& r : rows) {
    worst_area = std::max(worst_area, std::abs(r.area / rows.front().area / std::exp(r.t) - 1));
  }
  const double y0 = rows.front().y, y3 = rows.back().y;
  const bool ok = y0 > 1 && mono && std::abs(y3 - 1) <= 0.02 && worst_area <= 0.01 &&
                  std::abs(rows.back().t - 3.0) < 1e-9;
  return {ok, fmt("y(0)=%.6f y(3)=%.6f non-increasing=%s max|A/A0/e^t-1|=%.2e", y0, y3, mono ? "yes" : "no",
                  worst_area)};
}

Outcome bulk() {
  const auto all = default_shapes(4, 0);
  std::vector<NamedSurface> convex;
  for (const auto& s : all) {
    if (surface_geometry(s.surface).min_H() > 0) convex.push_back(s);
  }
  const auto rep = verify_bulk_vs_totalH(convex, Resolution{4, 16, {}, 1});
  double worst = 1e300;
  for (const auto& c : rep.cases) worst = std::min(worst, c.lhs / c.rhs);
  return {rep.pass() && convex.size() == all.size(),
          fmt("%zu/%zu shapes mean convex, smallest bulk/totalH %.4f", convex.size(), all.size(), worst)};
}

Outcome optimizer() {
  OptimizationConfig cfg;  // ellipsoid(1,1,1.3), dirichlet-normal, mu = 1, V = 4pi/3, level 3
  const auto r = optimize(cfg);
  const double target = 12 * kPi;
  const double err = std::abs(r.energy.total - target) / target;
  const double asph = r.surface.asphericity();
  return {err <= 0.03 && asph < 0.05, fmt("E=%.6f vs 12pi=%.6f (rel %.4f), asphericity %.4f, %d iterations, %s",
                                          r.energy.total, target, err, asph,
                                          r.history.empty() ? 0 : r.history.back().iteration, r.termination.c_str())};
}

Outcome landscape() {
  std::vector<double> aspects;
  for (int k = 6; k <= 16; ++k) aspects.push_back(k / 10.0);
  bool ok = true;
  std::string detail;
  for (double mu : {0.0, 1.0}) {
    const auto rows = energy_landscape_scan(aspects, AnchoringSpec::dirichlet_normal(mu), 4 * kPi / 3, 3, 8);
    const auto best = std::min_element(rows.begin(), rows.end(),
                                       [](const LandscapeRow& a, const LandscapeRow& b) { return a.total < b.total; });
    ok = ok && std::abs(best->parameter - 1.0) <= 0.1 + 1e-12;
    detail += fmt("mu=%g: min at aspect %.1f (E=%.5f); ", mu, best->parameter, best->total);
  }
  return {ok, detail};
}

Outcome muniform() {
  using namespace planar;
  const std::vector<std::pair<std::string, Polygon2D>> convex{
      {"square", axis_box({0, 0}, {1, 1})},
      {"rectangle", axis_box({0, 0}, {3, 1})},
      {"triangle", make_polygon({{0, 0}, {1, 0}, {0.3, 0.8}})},
      {"hexagon", regular_polygon(6, 1.0)},
      {"disk64", regular_polygon(64, 1.0)}};
  bool ok = true;
  double worst_convex = 0.0, worst_refine = 0.0;
  auto estimate = [](const Polygon2D& p, double divisor) {
    return uniformity_report(p, 100, p.diameter() / divisor, 100.0, 0);
  };
  for (const auto& [name, p] : convex) {
    const auto r = estimate(p, 128);
    ok = ok && r.all_feasible;
    worst_convex = std::max(worst_convex, r.M_estimate);
    const auto fine = estimate(p, 256);
    worst_refine = std::max(worst_refine, std::abs(fine.M_estimate - r.M_estimate) / r.M_estimate);
  }
  std::vector<double> neck;
  for (double w : {0.2, 0.1, 0.05}) {
    const auto r = estimate(dumbbell(w), 128);
    neck.push_back(r.M_estimate);
  }
  ok = ok && neck[0] < neck[1] && neck[1] < neck[2] && worst_refine < 0.10;
  return {ok, fmt("convex max M %.4f; dumbbell M %.3f %.3f %.3f; worst convex refinement change %.3f", worst_convex,
                  neck[0], neck[1], neck[2], worst_refine)};
}

Outcome convergence() {
  using namespace planar;
  const auto disk = regular_polygon(1024, 1.0);
  std::vector<Polygon2D> family;
  const std::vector<int> ns{8, 16, 32, 64};
  for (int n : ns) family.push_back(regular_polygon(n, 1.0));
  const double h = 2.0 / 256;
  const auto rep = convergence_experiment(family, disk, h, {2 * h, 3 * h, 4 * h, 0.05, 0.1, 0.2});
  bool incl = true;
  for (const auto& row : rep.rows) {
    const auto& last = row.holds.back();
    incl = incl && last[0] && last[1] && last[2];
  }
  bool closed_form = true;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const double n = ns[k];
    closed_form = closed_form && std::abs(family[k].perimeter() - 2 * n * std::sin(kPi / n)) <= 1e-12 * n;
  }
  const double p64 = 2 * 64 * std::sin(kPi / 64);
  const double gap = std::abs(p64 - 2 * kPi) / (2 * kPi);
  const bool ok = incl && closed_form && gap <= 0.005 && rep.perimeter_monotone && rep.family_convex;
  return {ok, fmt("inclusions (i)-(iii) at n=64 for %zu eps >= 2h: %s; P(64-gon)=%.6f, rel gap to 2pi %.2e",
                  rep.rows.size(), incl ? "yes" : "no", p64, gap)};
}

Outcome penalty() {
  const NamedSurface sphere{"sphere:1", radial_surface(ico(3), SphereShape{1.0})};
  const auto rep = verify_penalty_limit(sphere, 0.0, {1.0, 10.0, 100.0}, Resolution{3, 8, {}, 1});
  std::string detail;
  for (const auto& c : rep.cases) detail += fmt("%s: %.4e -> %.4e; ", c.id.c_str(), c.rhs, c.lhs);
  return {rep.pass(), detail};
}

Outcome suites() {
  const auto reps = run_suite("all", 0);
  bool ok = true;
  std::string detail;
  for (const auto& r : reps) {
    ok = ok && r.pass();
    std::size_t failed = 0;
    for (const auto& c : r.cases) failed += c.pass ? 0 : 1;
    detail += fmt("%s %zu/%zu; ", r.suite.c_str(), r.cases.size() - failed, r.cases.size());
  }
  return {ok, detail};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "hedgehog energy", 30, hedgehog_energy},
      {2, "sphere geometry", 5, sphere_geometry},
      {3, "minkowski suite", 60, minkowski},
      {4, "IMCF monotonicity", 300, imcf},
      {5, "bulk >= totalH", 600, bulk},
      {6, "optimizer end-to-end", 1800, optimizer},
      {7, "landscape", 1800, landscape},
      {8, "M-uniformity", 300, muniform},
      {9, "convergence lemmas", 120, convergence},
      {10, "penalty trace limit", 900, penalty},
      {11, "invariant suites", 1800, suites},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = out.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s #%d %s: %s [%.1fs, limit %.0fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(),
                secs, c.limit_s, in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
