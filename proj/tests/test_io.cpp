#include <doctest.h>

#include <cmath>
#include <sstream>

#include "droplet/error.hpp"
#include "droplet/io.hpp"

using namespace droplet;

TEST_CASE("twelve significant digits") {
  CHECK(io::round12(1.0 / 3.0) == 0.333333333333);
  CHECK(io::round12(123456.7890123456) == 123456.789012);
  CHECK(io::round12(0.0) == 0.0);
  CHECK(std::isinf(io::round12(INFINITY)));
  CHECK(std::isnan(io::round12(NAN)));
  const std::string text = io::dump(io::Json{{"x", io::number(2.0 / 3.0)}});
  CHECK(text == "{\n  \"x\": 0.666666666667\n}\n");
}

TEST_CASE("malformed JSON") {
  try {
    io::parse("{\"a\": ", "config");
    FAIL("expected InvalidInput");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
    CHECK(std::string(e.what()).find("config") != std::string::npos);
  }
  CHECK_THROWS_AS(io::read_text("/nonexistent/file.json"), Error);
}

TEST_CASE("surface round trip and OBJ") {
  const auto mesh = std::make_shared<const IcosphereMesh>(build_icosphere(2));
  const auto s = radial_surface(mesh, EllipsoidShape{1, 1.2, 0.8});
  const auto j = io::surface_json(s);
  CHECK(j["vertices"].size() == 162);
  CHECK(j["triangles"].size() == 320);
  const auto back = io::surface_from_json(io::parse(io::dump(j), "surface"));
  REQUIRE(back.rho.size() == s.rho.size());
  for (std::size_t i = 0; i < s.rho.size(); ++i) CHECK(std::abs(back.rho[i] - s.rho[i]) <= 5e-12 * s.rho[i]);  // half a unit in the 12th digit

  auto wrong = j;
  wrong["level"] = 3;
  CHECK_THROWS_AS(io::surface_from_json(wrong), Error);

  std::istringstream obj(io::surface_obj(s));
  std::string line;
  int v = 0, f = 0;
  while (std::getline(obj, line)) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("f ", 0) == 0) {
      ++f;
      int a, b, c;
      std::sscanf(line.c_str(), "f %d %d %d", &a, &b, &c);
      CHECK(std::min({a, b, c}) >= 1);
      CHECK(std::max({a, b, c}) <= 162);
    }
  }
  CHECK(v == 162);
  CHECK(f == 320);
}

TEST_CASE("director field round trip") {
  DirectorField u{{Vec3(1, 0, 0), Vec3(0, 0.6, 0.8)}};
  const auto back = io::field_from_json(io::field_json(u));
  CHECK(back.values == u.values);
  CHECK_THROWS_AS(io::field_from_json(io::Json{{"values", {{1.0, 0.0}}}}), Error);
}

TEST_CASE("anchoring round trip") {
  for (const auto& spec : {AnchoringSpec::dirichlet_normal(2.0), AnchoringSpec::constant_angle(1.0, 0.3, 50.0),
                           AnchoringSpec::quadratic(1.5, -0.25)}) {
    const auto back = io::anchoring_from_json(io::anchoring_json(spec));
    CHECK(back.variant == spec.variant);
    CHECK(back.mu == spec.mu);
    CHECK(back.density().value(0.4) == doctest::Approx(spec.density().value(0.4)));
  }
  CHECK_THROWS_AS(io::anchoring_from_json(io::Json{{"variant", "dirichlet-normal"}, {"strength", 1.0}}), Error);
  CHECK_THROWS_AS(io::anchoring_from_json(io::Json{{"variant", "tangential"}}), Error);
}

TEST_CASE("config round trip") {
  OptimizationConfig cfg;
  cfg.level = 2;
  cfg.layers = 5;
  cfg.initial = EllipsoidShape{1, 1, 1.3};
  cfg.anchoring = AnchoringSpec::quadratic(2.0, 0.5);
  cfg.max_iterations = 7;
  cfg.seed = 42;
  const auto j = io::config_json(cfg);
  const auto back = io::config_from_json(io::parse(io::dump(j), "config"));
  CHECK(io::dump(io::config_json(back)) == io::dump(j));

  const auto partial = io::config_from_json(io::Json{{"layers", 12}});
  CHECK(partial.layers == 12);
  CHECK(partial.level == OptimizationConfig{}.level);

  CHECK_THROWS_AS(io::config_from_json(io::Json{{"layer", 12}}), Error);
  CHECK_THROWS_AS(io::config_from_json(io::Json{{"layers", "twelve"}}), Error);
  CHECK_THROWS_AS(io::config_from_json(io::Json{{"solver", {{"sweeps", 3}}}}), Error);
  CHECK_THROWS_AS(io::config_from_json(io::Json{{"initial", "cube:1"}}), Error);
}

TEST_CASE("polygon round trip") {
  const auto p = planar::regular_polygon(7, 1.0);
  const auto back = io::polygon_from_json(io::polygon_json(p));
  CHECK(back.signed_area() == doctest::Approx(p.signed_area()).epsilon(1e-11));
  CHECK_THROWS_AS(io::polygon_from_json(io::Json{{"vertices", {{0.0, 0.0}, {1.0, 0.0}}}}), Error);
}
