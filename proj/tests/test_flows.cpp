#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "droplet/error.hpp"
#include "droplet/flows.hpp"

using namespace droplet;
namespace {

constexpr double kPi = std::numbers::pi;

RadialSurface surface(int level, const ShapeDescriptor& shape) {
  return radial_surface(std::make_shared<const IcosphereMesh>(build_icosphere(level)), shape);
}

double mean_rho(const RadialSurface& s) {
  double sum = 0.0;
  for (double r : s.rho) sum += r;
  return sum / static_cast<double>(s.rho.size());
}

// Polar dimples with H < 0 from a negative degree-2 mode.
const char* kPinched = "perturbed:1,6:-0.45";

}  // namespace

TEST_CASE("MCF shrinks a sphere at rate 2/R") {
  for (double R : {1.0, 2.0}) {
    const auto s = surface(3, SphereShape{R});
    const double dt = 0.5 * mcf_stable_dt(surface_geometry(s));
    const auto next = mcf_step(s, dt);
    CHECK(std::abs(mean_rho(next) - (R - 2.0 / R * dt)) < 0.01 * (2.0 / R * dt));
  }
}

TEST_CASE("MCF step guard") {
  const auto s = surface(3, SphereShape{1.0});
  const double limit = mcf_stable_dt(surface_geometry(s));
  CHECK_THROWS_AS(mcf_step(s, 1.01 * limit), Error);
  CHECK_THROWS_AS(mcf_step(s, -1e-4), Error);
  try {
    mcf_step(s, 2 * limit);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidTimestep);
  }
}

TEST_CASE("MCF raises min H on a mildly prolate shape") {
  auto s = surface(3, EllipsoidShape{1, 1, 1.2});
  const double before = surface_geometry(s).min_H();
  for (int k = 0; k < 10; ++k) s = mcf_step(s, 0.5 * mcf_stable_dt(surface_geometry(s)));
  CHECK(surface_geometry(s).min_H() >= before);
}

TEST_CASE("mean convexification") {
  const auto sphere = surface(3, SphereShape{1.0});
  const auto same = mean_convexify(sphere, 0.5, 10);
  CHECK(same.steps == 0);
  CHECK(same.surface.rho == sphere.rho);

  const auto pinched = surface(3, parse_shape(kPinched));
  REQUIRE(surface_geometry(pinched).min_H() < 0);
  const auto fixed = mean_convexify(pinched, 0.1, kConvexifyBudget);
  CHECK(surface_geometry(fixed.surface).min_H() >= 0.1);
  CHECK(fixed.steps > 0);

  CHECK_THROWS_AS(mean_convexify(sphere, 0.0, 10), Error);
  CHECK_THROWS_AS(mean_convexify(pinched, 0.1, 2), Error);
}

TEST_CASE("IMCF on a sphere") {
  const auto s = surface(3, SphereShape{1.0});
  const auto trace = run_imcf(s, 1.0, 1e-3);
  const auto& last = trace.rows.back();
  CHECK(last.t == doctest::Approx(1.0));
  const double radius = std::sqrt(last.area / (4 * kPi));
  CHECK(std::abs(radius / std::sqrt(trace.rows.front().area / (4 * kPi)) - std::exp(0.5)) < 0.01 * std::exp(0.5));
  for (const auto& row : trace.rows) CHECK(std::abs(row.y - trace.rows.front().y) < 1e-3);
  for (std::size_t k = 1; k < trace.rows.size(); ++k) CHECK(trace.rows[k].t > trace.rows[k - 1].t);
}

TEST_CASE("IMCF area element grows like e^t") {
  const auto s = surface(3, EllipsoidShape{1, 1, 1.5});
  const auto g0 = surface_geometry(s);
  const double dt = 1e-3;
  const auto g1 = surface_geometry(imcf_step(s, dt));
  CHECK(std::abs(g1.area / g0.area - (1 + dt)) < 10 * dt * dt);

  const auto trace = run_imcf(surface(2, SphereShape{1.0}), 2.0, 1e-3);
  CHECK(std::abs(trace.rows.back().area / trace.rows.front().area / std::exp(2.0) - 1) < 0.01);
}

TEST_CASE("IMCF monotone quantity on mean-convex shapes") {
  for (const char* text : {"ellipsoid:1,1,1.5", "ellipsoid:0.8,1,1.25", "perturbed:1,6:0.1,9:0.05"}) {
    const auto trace = run_imcf(surface(3, parse_shape(text)), 0.5, 1e-3);
    CHECK(trace.rows.front().y > 1);
    for (std::size_t k = 1; k < trace.rows.size(); ++k) {
      CHECK(trace.rows[k].y <= trace.rows[k - 1].y + 1e-4);
      CHECK(trace.rows[k].volume > trace.rows[k - 1].volume);
    }
    for (const auto& row : trace.rows) {
      CHECK(row.y >= 0.98);
      CHECK(std::abs(std::log(row.area / trace.rows.front().area) - row.t) <= 0.01 * row.t + 1e-12);
    }
  }
}

TEST_CASE("IMCF refuses non-mean-convex input") {
  const auto pinched = surface(3, parse_shape(kPinched));
  try {
    run_imcf(pinched, 0.1, 1e-3);
    FAIL("expected MeanConvexityLost");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MeanConvexityLost);
  }
}

TEST_CASE("MCF then IMCF returns to the start") {
  const auto s = surface(3, SphereShape{1.0});
  for (double dt : {2e-4, 1e-4}) {
    const auto back = imcf_step(mcf_step(s, dt), dt);
    // Radius changes by -2 dt then by about +dt/2: the composition is not the
    // identity at first order; compare with the closed form instead.
    const double r1 = 1 - 2 * dt;
    const double expect = r1 * std::exp(dt / 2);
    CHECK(std::abs(mean_rho(back) - expect) < 50 * dt * dt);
  }
}

TEST_CASE("trace CSV") {
  const auto trace = run_mcf(surface(2, SphereShape{1.0}), 2e-3, 1e-4);
  const std::string csv = trace.to_csv();
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,area,volume,totalH,y,minH");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == trace.rows.size());
  CHECK(trace.curvature_smoothing);
}
