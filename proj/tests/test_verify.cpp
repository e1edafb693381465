#include <doctest.h>

#include <cmath>
#include <numbers>

#include "droplet/error.hpp"
#include "droplet/verify.hpp"

using namespace droplet;
namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const IcosphereMesh> ico(int level) {
  return std::make_shared<const IcosphereMesh>(build_icosphere(level));
}

NamedSurface named(int level, const char* text) { return {text, radial_surface(ico(level), parse_shape(text))}; }

// Independent evaluation of the per-tet quantities from the raw P1 formula.
Mat3 p1_gradient(const ShellMesh& m, const std::vector<Vec3>& u, std::size_t t) {
  const auto& tet = m.tets[t];
  Eigen::Matrix3d E, D;
  for (int k = 0; k < 3; ++k) {
    E.col(k) = m.nodes[tet[k + 1]] - m.nodes[tet[0]];
    D.col(k) = u[tet[k + 1]] - u[tet[0]];
  }
  return D * E.inverse();
}

}  // namespace

TEST_CASE("report JSON layout") {
  VerificationReport rep{"demo", {}};
  VerificationCase c;
  c.id = "a";
  c.lhs = 1.0 / 3.0;
  c.rhs = 0.25;
  c.margin = c.lhs - c.rhs;
  c.tol = 0.01;
  c.pass = true;
  rep.cases.push_back(c);
  c.id = "b";
  c.pass = false;
  c.flags.emplace_back("equality", true);
  rep.cases.push_back(c);
  const auto j = rep.to_json();
  CHECK(j["suite"] == "demo");
  CHECK(j["pass"] == false);
  CHECK(j["cases"].size() == 2);
  CHECK(j["cases"][0]["lhs"].get<double>() == 0.333333333333);
  CHECK(j["cases"][1]["flags"]["equality"] == true);
  CHECK_FALSE(j["cases"][0].contains("flags"));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j["cases"][0].items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"id", "lhs", "rhs", "margin", "tol", "pass"});
  rep.cases[1].pass = true;
  CHECK(rep.pass());
}

TEST_CASE("bulk suite") {
  const Resolution res{3, 8, {}, 1};
  const auto rep = verify_bulk_vs_totalH({named(3, "sphere:1"), named(3, "ellipsoid:1,1,1.5"),
                                          named(3, "perturbed:1,6:-0.45")},
                                         res);
  REQUIRE(rep.cases.size() == 3);
  CHECK(rep.cases[0].pass);
  CHECK(rep.cases[1].pass);
  CHECK(rep.cases[1].lhs >= 0.95 * rep.cases[1].rhs);
  // The pinched shape is not mean convex: recorded, suite carries on.
  CHECK_FALSE(rep.cases[2].pass);
  CHECK_FALSE(rep.cases[2].note.empty());
}

TEST_CASE("bulk suite records solver failures per case") {
  Resolution res{2, 4, {}, 1};
  res.solver.max_sweeps = 2;
  const auto rep = verify_bulk_vs_totalH({named(2, "sphere:1"), named(2, "ellipsoid:1,1,1.2")}, res);
  REQUIRE(rep.cases.size() == 2);
  for (const auto& c : rep.cases) {
    CHECK_FALSE(c.pass);
    CHECK(c.note.find("ConvergenceFailure") != std::string::npos);
  }
}

TEST_CASE("minkowski suite") {
  const auto rep = verify_minkowski({named(5, "sphere:2"), named(5, "ellipsoid:1,1,2"), named(5, "ellipsoid:0.7,1,1")});
  REQUIRE(rep.cases.size() == 3);
  CHECK(rep.pass());
  CHECK(rep.cases[0].flags[0] == std::pair<std::string, bool>{"equality", true});
  CHECK(std::abs(rep.cases[0].lhs - rep.cases[0].rhs) <= 0.02 * rep.cases[0].lhs);
  CHECK(rep.cases[1].flags[0].second == false);
  CHECK(rep.cases[1].lhs > rep.cases[1].rhs);

  const auto shapes = default_shapes(kGeometryLevel, 0);
  CHECK(shapes.size() == 9);
  const auto full = verify_minkowski(shapes);
  CHECK(full.pass());
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    CHECK(full.cases[k].flags[0].second == (shapes[k].id.rfind("sphere", 0) == 0));
  }
}

TEST_CASE("isoperimetric suite") {
  const auto rep =
      verify_isoperimetric({named(4, "sphere:1"), named(4, "ellipsoid:1,1,2"), named(4, "perturbed:1,6:0.1")});
  CHECK(rep.pass());
  CHECK(std::abs(rep.cases[0].lhs - rep.cases[0].rhs) <= 0.01 * rep.cases[0].rhs);
  CHECK(rep.cases[1].lhs > rep.cases[1].rhs);
  CHECK(rep.cases[2].lhs > rep.cases[2].rhs);
}

TEST_CASE("divergence identity") {
  const auto ball = build_shell_mesh(radial_surface(ico(2), SphereShape{1.0}), 4);

  SUBCASE("constant field") {
    const auto cases = divergence_identity_cases(ball, constant_field(ball, Vec3::UnitX()), "constant");
    CHECK(cases[0].lhs == 0.0);
    CHECK(cases[0].rhs == 0.0);
    CHECK(cases[0].pass);
    CHECK(cases[1].pass);
  }
  SUBCASE("hedgehog and random unit fields, checked tet by tet") {
    for (const auto& u : {hedgehog(ball), random_unit_field(ball, 4)}) {
      const auto rep = verify_divergence_identity(ball, u, "field");
      CHECK(rep.pass());
      // Brute force over every tet with an independently assembled gradient.
      for (std::size_t t = 0; t < ball.tets.size(); ++t) {
        const Mat3 J = p1_gradient(ball, u.values, t);
        Vec3 mean = Vec3::Zero();
        for (int a : ball.tets[t]) mean += u.values[a];
        const Vec3 n = mean.normalized();
        const Mat3 JT = (Mat3::Identity() - n * n.transpose()) * J;
        CHECK(J.squaredNorm() >= JT.trace() * JT.trace() - (JT * JT).trace() - 1e-10);
      }
    }
  }
  SUBCASE("random fields are deterministic per seed") {
    CHECK(random_unit_field(ball, 9).values == random_unit_field(ball, 9).values);
    for (const auto& v : random_unit_field(ball, 9).values) CHECK(std::abs(v.norm() - 1) < 1e-15);
  }
  SUBCASE("mismatched field") {
    CHECK_THROWS_AS(divergence_identity_cases(ball, DirectorField{{Vec3::UnitZ()}}, "x"), Error);
  }
}

TEST_CASE("lsc experiment") {
  const Resolution res{3, 8, {}, 1};
  const auto spec = AnchoringSpec::dirichlet_normal(1.0);
  std::vector<NamedSurface> family;
  for (int h : {2, 4, 8, 16}) {
    const EllipsoidShape e{1, 1, 1 + 1.0 / h};
    family.push_back({format_shape(e), radial_surface(ico(3), e)});
  }
  const NamedSurface limit = named(3, "sphere:1");
  const auto rep = lsc_experiment(family, limit, spec, res);
  CHECK(rep.pass());
  CHECK(rep.cases.back().id == "liminf");
  CHECK(rep.cases.back().lhs >= 0.98 * rep.cases.back().rhs);

  // Constant family: every member equals the limit.
  const auto same = lsc_experiment({limit, limit, limit}, limit, spec, res);
  REQUIRE(same.cases.size() == 4);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(std::abs(same.cases[k].lhs - same.cases[k].rhs) <= 1e-6 * same.cases[k].rhs);
  }
  CHECK_THROWS_AS(lsc_experiment({}, limit, spec, res), Error);
}

TEST_CASE("penalty limit") {
  const Resolution res{2, 4, {}, 1};
  const auto rep = verify_penalty_limit(named(2, "sphere:1"), 0.0, {1.0, 10.0, 100.0}, res);
  REQUIRE(rep.cases.size() == 2);
  CHECK(rep.pass());
  CHECK(rep.cases[1].lhs < rep.cases[0].lhs);
  CHECK_THROWS_AS(verify_penalty_limit(named(2, "sphere:1"), 0.0, {1.0}, res), Error);
}

TEST_CASE("suite dispatch") {
  CHECK_THROWS_AS(run_suite("nonsense", 0), Error);
  const auto reps = run_suite("isoperimetric", 0);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].suite == "isoperimetric");
  CHECK(io::dump(reps[0].to_json()) == io::dump(run_suite("isoperimetric", 0)[0].to_json()));
}
