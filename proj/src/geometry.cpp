#include "droplet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "droplet/error.hpp"

namespace droplet {

namespace {

constexpr double kPi = std::numbers::pi;

double signed_volume6(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

}  // namespace

void IcosphereMesh::build_topology() {
  const auto nv = vertices.size();
  neighbors.assign(nv, {});
  vertex_triangles.assign(nv, {});
  edges.clear();
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int i = tri[k];
      const int j = tri[(k + 1) % 3];
      require(i >= 0 && static_cast<std::size_t>(i) < nv, ErrorKind::InvalidInput,
              "triangle index out of range");
      vertex_triangles[i].push_back(static_cast<int>(t));
      neighbors[i].push_back(j);
      neighbors[j].push_back(i);
    }
  }
  for (std::size_t i = 0; i < nv; ++i) {
    auto& n = neighbors[i];
    std::sort(n.begin(), n.end());
    n.erase(std::unique(n.begin(), n.end()), n.end());
    for (int j : n) {
      if (static_cast<int>(i) < j) edges.push_back({static_cast<int>(i), j});
    }
  }
}

IcosphereMesh build_icosphere(int level) {
  require(level >= 0 && level <= kMaxIcosphereLevel, ErrorKind::InvalidInput,
          "icosphere level must be in [0, " + std::to_string(kMaxIcosphereLevel) + "], got " +
              std::to_string(level));

  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  IcosphereMesh mesh;
  mesh.level = level;
  mesh.vertices = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  };
  for (auto& v : mesh.vertices) v.normalize();
  mesh.triangles = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  for (auto& t : mesh.triangles) {
    if (signed_volume6(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]) < 0) {
      std::swap(t[1], t[2]);
    }
  }

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<Triangle> next;
    next.reserve(mesh.triangles.size() * 4);
    for (const auto& t : mesh.triangles) {
      const int ab = mid(t[0], t[1]);
      const int bc = mid(t[1], t[2]);
      const int ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    mesh.triangles = std::move(next);
  }
  mesh.build_topology();
  return mesh;
}

// ---------------------------------------------------------------------------

namespace {

struct ModeTable {
  std::array<double, kSphereModeCount> scale{};

  ModeTable() {
    for (int k = 0; k < kSphereModeCount; ++k) {
      const int l = mode_degree(k);
      const int m = std::abs(k - l * l - l);
      // sup of |P_l^m(z)| over [-1, 1]; the azimuthal factor reaches 1.
      double best = 0.0;
      constexpr int kSamples = 200000;
      for (int s = 0; s <= kSamples; ++s) {
        const double z = -1.0 + 2.0 * s / kSamples;
        best = std::max(best, std::abs(std::assoc_legendre(l, m, z)));
      }
      scale[k] = 1.0 / best;
    }
  }
};

const ModeTable& mode_table() {
  static const ModeTable table;
  return table;
}

}  // namespace

int mode_degree(int k) {
  require(k >= 0 && k < kSphereModeCount, ErrorKind::InvalidInput,
          "sphere mode index out of range: " + std::to_string(k));
  return static_cast<int>(std::floor(std::sqrt(static_cast<double>(k))));
}

double sphere_mode(int k, const Vec3& d) {
  const int l = mode_degree(k);
  const int m = k - l * l - l;
  const double z = std::clamp(d.z(), -1.0, 1.0);
  const double legendre = std::assoc_legendre(l, std::abs(m), z);
  double azimuth = 1.0;
  if (m != 0) {
    const double phi = std::atan2(d.y(), d.x());
    azimuth = m > 0 ? std::cos(m * phi) : std::sin(-m * phi);
  }
  return mode_table().scale[k] * legendre * azimuth;
}

double sphere_harmonic(int k, const Vec3& d) {
  const int l = mode_degree(k);
  const int m = std::abs(k - l * l - l);
  double ratio = 1.0;  // (l - m)! / (l + m)!
  for (int i = l - m + 1; i <= l + m; ++i) ratio /= i;
  double norm = std::sqrt((2 * l + 1) / (4 * std::numbers::pi) * ratio);
  if (m != 0) norm *= std::sqrt(2.0);
  return norm * sphere_mode(k, d) / mode_table().scale[k];
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      require(used == item.size(), ErrorKind::InvalidInput, "trailing characters in '" + item + "'");
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidInput, "not a number: '" + item + "'");
    }
  }
  return out;
}

}  // namespace

ShapeDescriptor parse_shape(std::string_view text) {
  const auto colon = text.find(':');
  require(colon != std::string_view::npos, ErrorKind::InvalidInput,
          "shape must look like kind:params, got '" + std::string(text) + "'");
  const auto kind = text.substr(0, colon);
  const auto params = text.substr(colon + 1);
  if (kind == "sphere") {
    const auto v = parse_numbers(params);
    require(v.size() == 1 && v[0] > 0, ErrorKind::InvalidInput, "sphere:R needs one positive radius");
    return SphereShape{v[0]};
  }
  if (kind == "ellipsoid") {
    const auto v = parse_numbers(params);
    require(v.size() == 3 && v[0] > 0 && v[1] > 0 && v[2] > 0, ErrorKind::InvalidInput,
            "ellipsoid:a,b,c needs three positive semi-axes");
    return EllipsoidShape{v[0], v[1], v[2]};
  }
  if (kind == "perturbed") {
    PerturbedSphereShape shape;
    std::string item;
    std::istringstream in{std::string(params)};
    bool first = true;
    while (std::getline(in, item, ',')) {
      if (first) {
        shape.radius = parse_numbers(item).at(0);
        require(shape.radius > 0, ErrorKind::InvalidInput, "perturbed radius must be positive");
        first = false;
        continue;
      }
      const auto sep = item.find(':');
      require(sep != std::string::npos, ErrorKind::InvalidInput, "perturbation term must be mode:amplitude");
      const auto mode = parse_numbers(item.substr(0, sep));
      const auto amp = parse_numbers(item.substr(sep + 1));
      require(mode.size() == 1 && amp.size() == 1, ErrorKind::InvalidInput, "bad perturbation term '" + item + "'");
      const int k = static_cast<int>(mode[0]);
      require(k >= 0 && k < kSphereModeCount && k == mode[0], ErrorKind::InvalidInput,
              "perturbation mode out of range in '" + item + "'");
      shape.modes.push_back({k, amp[0]});
    }
    require(!first, ErrorKind::InvalidInput, "perturbed shape needs a radius");
    return shape;
  }
  if (kind == "random") {
    const auto v = parse_numbers(params);
    require(v.size() == 3 && v[2] >= 0 && v[2] == std::floor(v[2]), ErrorKind::InvalidInput,
            "random:R,amplitude,seed needs a radius, an amplitude and an integer seed");
    return seeded_perturbation(v[0], v[1], static_cast<unsigned>(v[2]));
  }
  throw Error(ErrorKind::InvalidInput, "unknown shape kind '" + std::string(kind) + "'");
}

std::string format_shape(const ShapeDescriptor& shape) {
  std::ostringstream out;
  out.precision(12);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SphereShape>) {
          out << "sphere:" << s.radius;
        } else if constexpr (std::is_same_v<T, EllipsoidShape>) {
          out << "ellipsoid:" << s.a << ',' << s.b << ',' << s.c;
        } else {
          out << "perturbed:" << s.radius;
          for (const auto& m : s.modes) out << ',' << m.mode << ':' << m.amplitude;
        }
      },
      shape);
  return out.str();
}

double shape_radius(const ShapeDescriptor& shape, const Vec3& dir) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SphereShape>) {
          return s.radius;
        } else if constexpr (std::is_same_v<T, EllipsoidShape>) {
          const double q = dir.x() * dir.x() / (s.a * s.a) + dir.y() * dir.y() / (s.b * s.b) +
                           dir.z() * dir.z() / (s.c * s.c);
          return 1.0 / std::sqrt(q);
        } else {
          double factor = 1.0;
          for (const auto& m : s.modes) factor += m.amplitude * sphere_mode(m.mode, dir);
          return s.radius * factor;
        }
      },
      shape);
}

PerturbedSphereShape seeded_perturbation(double radius, double amplitude, unsigned seed) {
  require(radius > 0 && amplitude >= 0 && amplitude < 1, ErrorKind::InvalidInput,
          "perturbation needs radius > 0 and amplitude in [0, 1)");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  PerturbedSphereShape shape{radius, {}};
  double total = 0.0;
  for (int k = 4; k < kSphereModeCount; ++k) {
    const double a = uniform(rng);
    shape.modes.push_back({k, a});
    total += std::abs(a);
  }
  for (auto& m : shape.modes) m.amplitude *= amplitude / total;
  return shape;
}

// ---------------------------------------------------------------------------

std::vector<Vec3> RadialSurface::positions() const {
  std::vector<Vec3> out(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) out[i] = position(i);
  return out;
}

double RadialSurface::asphericity() const {
  const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
  return *hi / *lo - 1.0;
}

RadialSurface RadialSurface::scaled(double factor) const {
  RadialSurface out = *this;
  for (auto& r : out.rho) r *= factor;
  return out;
}

void RadialSurface::validate() const {
  require(base != nullptr, ErrorKind::InvalidInput, "radial surface without base mesh");
  require(rho.size() == base->vertex_count(), ErrorKind::InvalidInput,
          "rho count does not match base mesh vertex count");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    require(std::isfinite(rho[i]), ErrorKind::InvalidInput, "non-finite rho at vertex " + std::to_string(i));
    require(rho[i] > 0, ErrorKind::NotStarShaped, "rho <= 0 at vertex " + std::to_string(i));
  }
}

RadialSurface radial_surface(std::shared_ptr<const IcosphereMesh> mesh, const ShapeDescriptor& shape) {
  require(mesh != nullptr, ErrorKind::InvalidInput, "null mesh");
  std::vector<double> rho(mesh->vertex_count());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = shape_radius(shape, mesh->vertices[i]);
  return radial_surface(std::move(mesh), std::move(rho));
}

RadialSurface radial_surface(std::shared_ptr<const IcosphereMesh> mesh, std::vector<double> rho) {
  RadialSurface s{std::move(mesh), std::move(rho)};
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------

double SurfaceGeometry::min_H() const { return *std::min_element(H.begin(), H.end()); }

SurfaceGeometry surface_geometry(const IcosphereMesh& topology, const std::vector<Vec3>& x) {
  const auto nv = x.size();
  require(nv == topology.vertex_count(), ErrorKind::InvalidInput, "position count mismatch");

  SurfaceGeometry g;
  g.position = x;
  g.normal.assign(nv, Vec3::Zero());
  g.vertex_area.assign(nv, 0.0);
  g.H.assign(nv, 0.0);
  g.K.assign(nv, 0.0);
  std::vector<Vec3> mean_curvature_normal(nv, Vec3::Zero());
  std::vector<double> angle_sum(nv, 0.0);

  double triangle_area_sum = 0.0;
  for (const auto& t : topology.triangles) {
    const Vec3& p0 = x[t[0]];
    const Vec3& p1 = x[t[1]];
    const Vec3& p2 = x[t[2]];
    const Vec3 n = (p1 - p0).cross(p2 - p0);
    const double area = 0.5 * n.norm();
    require(area >= kDegenerateTriangleArea, ErrorKind::DegenerateMesh, "triangle with near-zero area");
    triangle_area_sum += area;
    g.volume += signed_volume6(p0, p1, p2) / 6.0;

    std::array<double, 3> cot{};
    std::array<double, 3> angle{};
    for (int k = 0; k < 3; ++k) {
      const Vec3 e1 = x[t[(k + 1) % 3]] - x[t[k]];
      const Vec3 e2 = x[t[(k + 2) % 3]] - x[t[k]];
      const double c = e1.dot(e2);
      const double s = e1.cross(e2).norm();
      cot[k] = c / s;
      angle[k] = std::atan2(s, c);
    }
    for (int k = 0; k < 3; ++k) {
      const int i = t[k];
      const int j = t[(k + 1) % 3];
      const int l = t[(k + 2) % 3];
      g.normal[i] += n;
      angle_sum[i] += angle[k];
      // Edge (j, l) is opposite corner k.
      mean_curvature_normal[j] += 0.5 * cot[k] * (x[j] - x[l]);
      mean_curvature_normal[l] += 0.5 * cot[k] * (x[l] - x[j]);
    }

    const bool obtuse = angle[0] > kPi / 2 || angle[1] > kPi / 2 || angle[2] > kPi / 2;
    for (int k = 0; k < 3; ++k) {
      const int i = t[k];
      if (!obtuse) {
        const int j = t[(k + 1) % 3];
        const int l = t[(k + 2) % 3];
        // Voronoi region: |x_i - x_l|^2 cot(angle at j) + |x_i - x_j|^2 cot(angle at l).
        g.vertex_area[i] += ((x[i] - x[l]).squaredNorm() * cot[(k + 1) % 3] +
                             (x[i] - x[j]).squaredNorm() * cot[(k + 2) % 3]) /
                            8.0;
      } else {
        g.vertex_area[i] += angle[k] > kPi / 2 ? area / 2.0 : area / 4.0;
      }
    }
  }

  for (std::size_t i = 0; i < nv; ++i) {
    g.normal[i].normalize();
    const Vec3 hn = mean_curvature_normal[i] / g.vertex_area[i];
    g.H[i] = hn.dot(g.normal[i]);
    g.K[i] = (2.0 * kPi - angle_sum[i]) / g.vertex_area[i];
    g.total_mean_curvature += g.H[i] * g.vertex_area[i];
  }
  g.area = triangle_area_sum;

  g.min_edge_length = std::numeric_limits<double>::infinity();
  for (const auto& e : topology.edges) {
    g.min_edge_length = std::min(g.min_edge_length, (x[e[0]] - x[e[1]]).norm());
  }
  return g;
}

SurfaceGeometry surface_geometry(const RadialSurface& surface) {
  surface.validate();
  return surface_geometry(*surface.base, surface.positions());
}

double minkowski_deficit(const SurfaceGeometry& geom) {
  return geom.total_mean_curvature - 4.0 * std::sqrt(kPi * geom.area);
}

double minkowski_deficit(const RadialSurface& surface) { return minkowski_deficit(surface_geometry(surface)); }

double minkowski_ratio(const SurfaceGeometry& geom) {
  return geom.total_mean_curvature / (4.0 * std::sqrt(kPi * geom.area));
}

}  // namespace droplet
