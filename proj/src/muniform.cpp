#include "droplet/muniform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>

#include "droplet/error.hpp"

namespace droplet::planar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = cross2(b - a, c - a);
  const double scale = (b - a).norm() * (c - a).norm();
  if (std::abs(v) <= 1e-14 * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= p.y() &&
         p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double t = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

}  // namespace

double Polygon2D::signed_area() const {
  double s = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) s += cross2(vertices[i], vertices[(i + 1) % n]);
  return 0.5 * s;
}

double Polygon2D::perimeter() const {
  double s = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) s += (vertices[(i + 1) % n] - vertices[i]).norm();
  return s;
}

double Polygon2D::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) d = std::max(d, (vertices[i] - vertices[j]).norm());
  }
  return d;
}

bool Polygon2D::contains(const Vec2& p) const {
  bool inside = false;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = vertices[i];
    const Vec2& b = vertices[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double Polygon2D::boundary_distance(const Vec2& p) const {
  double d = kInf;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) d = std::min(d, segment_distance(p, vertices[i], vertices[(i + 1) % n]));
  return d;
}

bool Polygon2D::is_convex() const {
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (orientation(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]) < 0) return false;
  }
  return true;
}

void Polygon2D::validate() const {
  const std::size_t n = vertices.size();
  require(n >= 3, ErrorKind::InvalidInput, "polygon needs at least 3 vertices");
  for (const auto& v : vertices) {
    require(std::isfinite(v.x()) && std::isfinite(v.y()), ErrorKind::InvalidInput, "polygon vertex is not finite");
  }
  for (std::size_t i = 0; i < n; ++i) {
    require((vertices[(i + 1) % n] - vertices[i]).norm() > 0, ErrorKind::InvalidInput, "polygon has a repeated vertex");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      require(!segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]),
              ErrorKind::InvalidInput, "polygon edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
    }
  }
  require(signed_area() > 0, ErrorKind::InvalidInput, "polygon must be counterclockwise with positive area");
}

Polygon2D make_polygon(std::vector<Vec2> vertices) {
  Polygon2D p{std::move(vertices)};
  p.validate();
  return p;
}

Polygon2D regular_polygon(int n, double radius, const Vec2& center) {
  require(n >= 3 && radius > 0, ErrorKind::InvalidInput, "regular polygon needs n >= 3 and radius > 0");
  std::vector<Vec2> v(n);
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    v[k] = center + radius * Vec2(std::cos(a), std::sin(a));
  }
  return make_polygon(std::move(v));
}

Polygon2D axis_box(const Vec2& lo, const Vec2& hi) {
  return make_polygon({lo, {hi.x(), lo.y()}, hi, {lo.x(), hi.y()}});
}

Polygon2D dumbbell(double w) {
  require(w > 0 && w < 1, ErrorKind::InvalidInput, "neck width must lie in (0, 1)");
  const double n = 0.5 * w;
  return make_polygon({{-1.5, -0.5},
                       {-0.5, -0.5},
                       {-0.5, -n},
                       {0.5, -n},
                       {0.5, -0.5},
                       {1.5, -0.5},
                       {1.5, 0.5},
                       {0.5, 0.5},
                       {0.5, n},
                       {-0.5, n},
                       {-0.5, 0.5},
                       {-1.5, 0.5}});
}

Polygon2D slit_square(double depth, double slit_width) {
  require(depth > 0 && depth < 1 && slit_width > 0 && slit_width < 0.5, ErrorKind::InvalidInput,
          "slit depth must lie in (0, 1) and width in (0, 1/2)");
  const double a = 0.5 - 0.5 * slit_width;
  const double b = 0.5 + 0.5 * slit_width;
  return make_polygon({{0, 0}, {a, 0}, {a, depth}, {b, depth}, {b, 0}, {1, 0}, {1, 1}, {0, 1}});
}

std::optional<std::size_t> GridFrame::locate(const Vec2& p) const {
  const Vec2 q = (p - origin) / h;
  const int i = static_cast<int>(std::floor(q.x()));
  const int j = static_cast<int>(std::floor(q.y()));
  if (i < 0 || j < 0 || i >= nx || j >= ny) return std::nullopt;
  return index(i, j);
}

GridFrame covering_frame(const std::vector<Polygon2D>& polygons, double h, double margin) {
  require(h > 0 && margin >= 0, ErrorKind::InvalidInput, "need h > 0 and margin >= 0");
  require(!polygons.empty(), ErrorKind::InvalidInput, "no polygons to cover");
  Vec2 lo = Vec2::Constant(kInf);
  Vec2 hi = Vec2::Constant(-kInf);
  for (const auto& p : polygons) {
    for (const auto& v : p.vertices) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  }
  const double m = std::max(margin, 3.0 * h);
  GridFrame f;
  f.h = h;
  f.origin = lo - Vec2::Constant(m);
  f.nx = static_cast<int>(std::ceil((hi.x() - lo.x() + 2 * m) / h));
  f.ny = static_cast<int>(std::ceil((hi.y() - lo.y() + 2 * m) / h));
  return f;
}

double GridDomain::area() const { return static_cast<double>(occupied_count()) * frame.h * frame.h; }

std::size_t GridDomain::occupied_count() const {
  return static_cast<std::size_t>(std::count(occupied.begin(), occupied.end(), std::uint8_t{1}));
}

namespace {

// Felzenszwalb-Huttenlocher lower envelope of parabolas, in place.
void edt_1d(std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  int first = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] < kInf) {
      first = q;
      break;
    }
  }
  if (first < 0) return;
  v[0] = first;
  for (int q = first + 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    double s = 0.0;
    for (;;) {
      const int p = v[k];
      s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[k] && k > 0) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
  f.swap(d);
}

}  // namespace

std::vector<double> distance_transform(const GridFrame& frame, const std::vector<std::uint8_t>& mask) {
  const int nx = frame.nx;
  const int ny = frame.ny;
  std::vector<double> sq(frame.cell_count());
  for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = mask[k] ? 0.0 : kInf;
  const int n = std::max(nx, ny);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);
  f.resize(ny);
  d.resize(ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) f[j] = sq[frame.index(i, j)];
    edt_1d(f, d, v, z);
    for (int j = 0; j < ny; ++j) sq[frame.index(i, j)] = f[j];
  }
  f.assign(nx, 0.0);
  d.assign(nx, 0.0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) f[i] = sq[frame.index(i, j)];
    edt_1d(f, d, v, z);
    for (int i = 0; i < nx; ++i) sq[frame.index(i, j)] = f[i];
  }
  for (double& s : sq) s = s == kInf ? kInf : std::sqrt(s) * frame.h;
  return sq;
}

GridDomain grid_from_mask(const GridFrame& frame, std::vector<std::uint8_t> occupied) {
  require(occupied.size() == frame.cell_count(), ErrorKind::InvalidInput, "mask does not match the frame");
  GridDomain g;
  g.frame = frame;
  g.occupied = std::move(occupied);
  std::vector<std::uint8_t> outside(g.occupied.size());
  for (std::size_t k = 0; k < outside.size(); ++k) outside[k] = g.occupied[k] ? 0 : 1;
  const auto dist = distance_transform(frame, outside);
  g.clearance.assign(g.occupied.size(), 0.0);
  for (std::size_t k = 0; k < dist.size(); ++k) {
    // A frame with no unoccupied cell has no complement in view; treat the
    // frame edge as the boundary.
    if (g.occupied[k]) g.clearance[k] = dist[k] == kInf ? 0.0 : std::max(0.0, dist[k] - 0.5 * frame.h);
  }
  return g;
}

GridDomain rasterize(const Polygon2D& p, const GridFrame& frame) {
  p.validate();
  require(frame.h > 0 && frame.h <= p.diameter() / 32.0, ErrorKind::InvalidInput, "cell size must be at most diameter/32");
  std::vector<std::uint8_t> occ(frame.cell_count(), 0);
  const std::size_t n = p.vertices.size();
  std::vector<double> xs;
  for (int j = 0; j < frame.ny; ++j) {
    const double y = frame.origin.y() + frame.h * (j + 0.5);
    xs.clear();
    for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
      const Vec2& pa = p.vertices[a];
      const Vec2& pb = p.vertices[b];
      if ((pa.y() > y) != (pb.y() > y)) xs.push_back(pa.x() + (y - pa.y()) * (pb.x() - pa.x()) / (pb.y() - pa.y()));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t s = 0; s + 1 < xs.size(); s += 2) {
      // Cells whose centers lie strictly between the two crossings.
      const int i0 = std::max(0, static_cast<int>(std::ceil((xs[s] - frame.origin.x()) / frame.h - 0.5)));
      const int i1 = std::min(frame.nx - 1, static_cast<int>(std::floor((xs[s + 1] - frame.origin.x()) / frame.h - 0.5)));
      for (int i = i0; i <= i1; ++i) occ[frame.index(i, j)] = 1;
    }
  }
  return grid_from_mask(frame, std::move(occ));
}

GridDomain rasterize(const Polygon2D& p, double h, double margin) {
  p.validate();
  require(h > 0 && h <= p.diameter() / 32.0, ErrorKind::InvalidInput, "cell size must be at most diameter/32");
  return rasterize(p, covering_frame({p}, h, margin));
}

// ---------------------------------------------------------------------------

namespace {

std::size_t interior_cell(const GridDomain& g, const Vec2& p, const char* name) {
  const auto k = g.frame.locate(p);
  require(k.has_value() && g.is_interior(*k), ErrorKind::InvalidInput,
          std::string("point ") + name + " is not in an interior cell");
  return *k;
}

}  // namespace

std::optional<double> admissible_path_length(const GridDomain& g, const Vec2& x, const Vec2& y, double M) {
    const std::size_t src = interior_cell(g, x, "x");
    const std::size_t dst = interior_cell(g, y, "y");
    if (src == dst) return 0.0;
    const GridFrame& f = g.frame;
    const double h = f.h;
    auto admissible = [&](std::size_t k) {
      if (!g.occupied[k]) return false;
      if (k == src || k == dst) return true;
      const Vec2 c = f.center(k);
      return g.clearance[k] >= std::min((c - x).norm(), (c - y).norm()) / M;
    };
    // A* with the Euclidean heuristic, which is consistent for 8-connected
    // moves with Euclidean weights.
    const Vec2 goal = f.center(dst);
    std::vector<double> dist(f.cell_count(), kInf);
    std::vector<std::uint8_t> state(f.cell_count(), 0);  // 1 admissible-checked ok, 2 rejected, 4 closed
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    dist[src] = 0.0;
    open.emplace((f.center(src) - goal).norm(), src);
    constexpr int di[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    constexpr int dj[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    const double diag = std::sqrt(2.0) * h;
    while (!open.empty()) {
      const auto [score, k] = open.top();
      open.pop();
      if (state[k] & 4) continue;
      state[k] |= 4;
      if (k == dst) return dist[k];
      const int i = static_cast<int>(k % f.nx);
      const int j = static_cast<int>(k / f.nx);
      for (int e = 0; e < 8; ++e) {
        const int ni = i + di[e];
        const int nj = j + dj[e];
        if (ni < 0 || nj < 0 || ni >= f.nx || nj >= f.ny) continue;
        const std::size_t nk = f.index(ni, nj);
        if (state[nk] & 4) continue;
        if (!(state[nk] & 3)) state[nk] |= admissible(nk) ? 1 : 2;
        if (state[nk] & 2) continue;
        const double nd = dist[k] + (e < 4 ? h : diag);
        if (nd < dist[nk]) {
          dist[nk] = nd;
          open.emplace(nd + (f.center(nk) - goal).norm(), nk);
        }
      }
    }
    return std::nullopt;
}

bool uniformity_feasible(const GridDomain& g, const Vec2& x, const Vec2& y, double M) {
  const auto len = admissible_path_length(g, x, y, M);
  return len && *len <= kPathLengthAllowance * M * (x - y).norm();
}

double estimate_uniformity(const GridDomain& g, const Vec2& x, const Vec2& y, double M_max) {
  require(M_max >= 1, ErrorKind::InvalidInput, "M_max must be at least 1");
  interior_cell(g, x, "x");
  interior_cell(g, y, "y");
  require(uniformity_feasible(g, x, y, M_max), ErrorKind::Infeasible, "pair is infeasible at M_max");
  double lo = 1.0;
  double hi = M_max;
  if (uniformity_feasible(g, x, y, lo)) return lo;
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    (uniformity_feasible(g, x, y, mid) ? hi : lo) = mid;
  }
  return hi;
}

namespace {

double radical_inverse(unsigned long i, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

std::vector<std::pair<Vec2, Vec2>> sample_pairs(const Polygon2D& p, int samples, unsigned seed) {
  require(samples >= 1, ErrorKind::InvalidInput, "need at least one sample pair");
  p.validate();
  Vec2 lo = Vec2::Constant(kInf);
  Vec2 hi = Vec2::Constant(-kInf);
  for (const auto& v : p.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  // Halton points with a seeded Cranley-Patterson rotation.
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double shift_x = unit(rng);
  const double shift_y = unit(rng);
  const double margin = 0.05 * p.diameter();
  std::vector<Vec2> points;
  const std::size_t want = 2 * static_cast<std::size_t>(samples);
  for (unsigned long i = 1; points.size() < want; ++i) {
    require(i < 10'000'000, ErrorKind::InvalidInput, "polygon has no room for interior samples");
    const double u = std::fmod(radical_inverse(i, 2) + shift_x, 1.0);
    const double v = std::fmod(radical_inverse(i, 3) + shift_y, 1.0);
    const Vec2 q = lo + Vec2(u * (hi.x() - lo.x()), v * (hi.y() - lo.y()));
    if (p.contains(q) && p.boundary_distance(q) >= margin) points.push_back(q);
  }
  std::vector<std::pair<Vec2, Vec2>> pairs(samples);
  for (int k = 0; k < samples; ++k) pairs[k] = {points[2 * k], points[2 * k + 1]};
  return pairs;
}

UniformityReport uniformity_report(const Polygon2D& p, int samples, double h, double M_max, unsigned seed) {
  require(M_max >= 1, ErrorKind::InvalidInput, "M_max must be at least 1");
  const auto g = rasterize(p, h);
  const auto pairs = sample_pairs(p, samples, seed);
  UniformityReport r;
  r.M_max = M_max;
  r.pairs_tested = samples;
  r.pairs.resize(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    PairResult& row = r.pairs[k];
    row.x = pairs[k].first;
    row.y = pairs[k].second;
    try {
      row.M = estimate_uniformity(g, row.x, row.y, M_max);
      row.feasible = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Infeasible) throw;
      row.M = M_max;
      row.feasible = false;
      r.all_feasible = false;
    }
  }
  r.worst = *std::max_element(r.pairs.begin(), r.pairs.end(),
                              [](const PairResult& a, const PairResult& b) { return a.M < b.M; });
  r.M_estimate = r.worst.M;
  return r;
}

// ---------------------------------------------------------------------------

DensityAt density_at(const GridDomain& g, const Vec2& x, double r) {
  require(r > 0, ErrorKind::InvalidInput, "radius must be positive");
  const GridFrame& f = g.frame;
  const Vec2 q = (x - f.origin) / f.h;
  const int reach = static_cast<int>(std::ceil(r / f.h)) + 1;
  const int ci = static_cast<int>(std::floor(q.x()));
  const int cj = static_cast<int>(std::floor(q.y()));
  long in = 0;
  long out = 0;
  for (int j = cj - reach; j <= cj + reach; ++j) {
    for (int i = ci - reach; i <= ci + reach; ++i) {
      if ((f.center(i, j) - x).squaredNorm() > r * r) continue;
      const bool occ = i >= 0 && j >= 0 && i < f.nx && j < f.ny && g.occupied[f.index(i, j)];
      (occ ? in : out) += 1;
    }
  }
  const double cell = f.h * f.h / (r * r);
  return {in * cell, out * cell};
}

std::vector<std::size_t> boundary_cells(const GridDomain& g) {
  const GridFrame& f = g.frame;
  std::vector<std::size_t> cells;
  for (int j = 0; j < f.ny; ++j) {
    for (int i = 0; i < f.nx; ++i) {
      const std::size_t k = f.index(i, j);
      if (!g.occupied[k]) continue;
      const bool edge = i == 0 || j == 0 || i == f.nx - 1 || j == f.ny - 1 || !g.occupied[f.index(i - 1, j)] ||
                        !g.occupied[f.index(i + 1, j)] || !g.occupied[f.index(i, j - 1)] ||
                        !g.occupied[f.index(i, j + 1)];
      if (edge) cells.push_back(k);
    }
  }
  return cells;
}

DensityReport density_check(const GridDomain& g, double c, const std::vector<double>& radii, unsigned seed) {
  require(c > 0 && c < std::numbers::pi, ErrorKind::InvalidInput, "density constant must lie in (0, pi)");
  require(!radii.empty(), ErrorKind::InvalidInput, "need at least one radius");
  auto cells = boundary_cells(g);
  require(!cells.empty(), ErrorKind::InvalidInput, "domain has no boundary cells");
  constexpr std::size_t kMaxSamples = 4096;
  if (cells.size() > kMaxSamples) {
    std::mt19937 rng(seed);
    std::shuffle(cells.begin(), cells.end(), rng);
    cells.resize(kMaxSamples);
    std::sort(cells.begin(), cells.end());
  }
  DensityReport rep;
  rep.c = c;
  rep.samples = static_cast<int>(cells.size());
  for (double r : radii) {
    DensityRow row{r, kInf, kInf};
    for (std::size_t k : cells) {
      const auto d = density_at(g, g.frame.center(k), r);
      row.min_interior = std::min(row.min_interior, d.interior);
      row.min_exterior = std::min(row.min_exterior, d.exterior);
    }
    rep.interior_condition = rep.interior_condition && row.min_interior > c;
    rep.exterior_condition = rep.exterior_condition && row.min_exterior > c;
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------

SetDistances set_distances(const GridDomain& a, const GridDomain& b) {
  require(a.frame == b.frame, ErrorKind::InvalidInput, "domains live on different grid frames");
  SetDistances d;
  std::size_t diff = 0;
  for (std::size_t k = 0; k < a.occupied.size(); ++k) diff += a.occupied[k] != b.occupied[k];
  d.l1 = static_cast<double>(diff) * a.frame.h * a.frame.h;
  if (diff == 0) return d;
  const auto da = distance_transform(a.frame, a.occupied);
  const auto db = distance_transform(b.frame, b.occupied);
  for (std::size_t k = 0; k < a.occupied.size(); ++k) {
    if (b.occupied[k]) d.hausdorff = std::max(d.hausdorff, da[k]);
    if (a.occupied[k]) d.hausdorff = std::max(d.hausdorff, db[k]);
  }
  return d;
}

namespace {

GridDomain outer_from_distance(const GridFrame& f, const std::vector<double>& dist, double eps) {
  std::vector<std::uint8_t> occ(dist.size());
  for (std::size_t k = 0; k < dist.size(); ++k) occ[k] = dist[k] <= eps + 1e-12 * f.h ? 1 : 0;
  return grid_from_mask(f, std::move(occ));
}

GridDomain inner_from_clearance(const GridDomain& g, double eps) {
  std::vector<std::uint8_t> occ(g.occupied.size());
  for (std::size_t k = 0; k < occ.size(); ++k) occ[k] = g.occupied[k] && g.clearance[k] >= eps ? 1 : 0;
  return grid_from_mask(g.frame, std::move(occ));
}

}  // namespace

GridDomain neighborhood(const GridDomain& g, double eps, NeighborhoodMode mode) {
  require(eps >= g.frame.h, ErrorKind::InvalidInput, "eps must be at least the cell size");
  if (mode == NeighborhoodMode::Inner) return inner_from_clearance(g, eps);
  return outer_from_distance(g.frame, distance_transform(g.frame, g.occupied), eps);
}

bool is_subset(const GridDomain& a, const GridDomain& b) {
  require(a.frame == b.frame, ErrorKind::InvalidInput, "domains live on different grid frames");
  for (std::size_t k = 0; k < a.occupied.size(); ++k) {
    if (a.occupied[k] && !b.occupied[k]) return false;
  }
  return true;
}

ConvergenceReport convergence_experiment(const std::vector<Polygon2D>& family, const Polygon2D& limit, double h,
                                         const std::vector<double>& eps_grid) {
  require(!family.empty(), ErrorKind::InvalidInput, "empty polygon family");
  require(!eps_grid.empty(), ErrorKind::InvalidInput, "empty eps grid");
  const double max_eps = *std::max_element(eps_grid.begin(), eps_grid.end());
  std::vector<Polygon2D> all = family;
  all.push_back(limit);
  const GridFrame frame = covering_frame(all, h, max_eps + 3 * h);

  const GridDomain lim = rasterize(limit, frame);
  const auto lim_dist = distance_transform(frame, lim.occupied);
  std::vector<GridDomain> doms;
  std::vector<std::vector<double>> dists;
  for (const auto& p : family) {
    doms.push_back(rasterize(p, frame));
    dists.push_back(distance_transform(frame, doms.back().occupied));
  }

  ConvergenceReport rep;
  rep.h = h;
  const int n = static_cast<int>(family.size());
  for (double eps : eps_grid) {
    require(eps >= h, ErrorKind::InvalidInput, "eps must be at least the cell size");
    ConvergenceRow row;
    row.eps = eps;
    const GridDomain lim_outer = outer_from_distance(frame, lim_dist, eps);
    for (int i = 0; i < n; ++i) {
      const bool p1 = is_subset(lim, outer_from_distance(frame, dists[i], eps));
      const bool p2 = is_subset(inner_from_clearance(doms[i], eps), lim);
      const bool p3 = is_subset(doms[i], lim_outer);
      row.holds.push_back({p1, p2, p3});
    }
    auto first_from = [&](int which) -> std::optional<int> {
      int first = n;
      while (first > 0 && row.holds[first - 1][which]) --first;
      if (first == n) return std::nullopt;
      return first;
    };
    row.first_i = first_from(0);
    row.first_ii = first_from(1);
    row.first_iii = first_from(2);
    rep.rows.push_back(std::move(row));
  }

  rep.family_convex = limit.is_convex();
  for (int i = 0; i < n; ++i) {
    rep.distances.push_back(set_distances(doms[i], lim));
    rep.perimeter_gap.push_back(std::abs(family[i].perimeter() - limit.perimeter()));
    rep.family_convex = rep.family_convex && family[i].is_convex();
  }
  rep.perimeter_monotone = true;
  for (int i = 1; i < n; ++i) rep.perimeter_monotone = rep.perimeter_monotone && rep.perimeter_gap[i] <= rep.perimeter_gap[i - 1];
  return rep;
}

}  // namespace droplet::planar
