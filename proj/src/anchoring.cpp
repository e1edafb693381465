#include "droplet/anchoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "droplet/error.hpp"

namespace droplet {

SurfaceDensity::SurfaceDensity(std::vector<AffineLine> envelope) : envelope_(std::move(envelope)) {
  require(!envelope_.empty(), ErrorKind::InvalidInput, "affine envelope must be nonempty");
}

double SurfaceDensity::value(double t) const {
  if (envelope_.empty()) return quadratic_.value(t);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& l : envelope_) best = std::max(best, l.slope * t + l.intercept);
  return best;
}

double SurfaceDensity::slope(double t) const {
  if (envelope_.empty()) return quadratic_.slope(t);
  double best = -std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (const auto& l : envelope_) {
    const double v = l.slope * t + l.intercept;
    if (v > best) {
      best = v;
      s = l.slope;
    }
  }
  return s;
}

std::string_view to_string(AnchoringVariant v) {
  switch (v) {
    case AnchoringVariant::DirichletNormal: return "dirichlet-normal";
    case AnchoringVariant::ConstantAngle: return "constant-angle";
    case AnchoringVariant::SurfaceEnergy: return "surface-energy";
  }
  return "unknown";
}

AnchoringVariant parse_anchoring_variant(std::string_view text) {
  if (text == "dirichlet-normal") return AnchoringVariant::DirichletNormal;
  if (text == "constant-angle") return AnchoringVariant::ConstantAngle;
  if (text == "surface-energy") return AnchoringVariant::SurfaceEnergy;
  throw Error(ErrorKind::InvalidInput, "unknown anchoring variant '" + std::string(text) + "'");
}

void AnchoringSpec::validate() const {
  switch (variant) {
    case AnchoringVariant::DirichletNormal:
      require(mu >= 0, ErrorKind::InvalidInput, "surface tension mu must be >= 0");
      break;
    case AnchoringVariant::ConstantAngle:
      require(mu >= 0, ErrorKind::InvalidInput, "surface tension mu must be >= 0");
      require(c >= -1 && c <= 1, ErrorKind::InvalidInput, "contact angle c must lie in [-1, 1]");
      require(mu_pen > 0, ErrorKind::InvalidInput, "penalty weight mu_pen must be > 0");
      break;
    case AnchoringVariant::SurfaceEnergy:
      if (envelope.empty()) {
        require(mu > 0, ErrorKind::InvalidInput, "quadratic anchoring needs mu > 0");
        require(w > -1 && w < 1, ErrorKind::InvalidInput, "quadratic anchoring needs -1 < w < 1");
      } else {
        const SurfaceDensity f(envelope);
        for (int k = 0; k <= 200; ++k) {
          const double t = -1.0 + k / 100.0;
          require(f.value(t) >= 0, ErrorKind::InvalidInput, "affine envelope must be nonnegative on [-1, 1]");
        }
      }
      break;
  }
}

SurfaceDensity AnchoringSpec::density() const {
  switch (variant) {
    case AnchoringVariant::DirichletNormal: return SurfaceDensity(QuadraticDensity{});
    case AnchoringVariant::ConstantAngle: return SurfaceDensity(QuadraticDensity::penalty(mu_pen, c));
    case AnchoringVariant::SurfaceEnergy:
      return envelope.empty() ? SurfaceDensity(QuadraticDensity::anchoring(mu, w)) : SurfaceDensity(envelope);
  }
  return SurfaceDensity{};
}

double AnchoringSpec::tension() const { return variant == AnchoringVariant::SurfaceEnergy ? 0.0 : mu; }

namespace {

// Chebyshev points plus the vertex of f when it lies inside [-1, 1]; the
// vertex tangent keeps the envelope of a nonnegative f nonnegative.
std::vector<double> tangency_points(const QuadraticDensity& f, int n) {
  std::vector<double> p(n);
  for (int k = 0; k < n; ++k) p[k] = std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
  if (f.a2 > 0) {
    const double vertex = -f.a1 / (2.0 * f.a2);
    if (vertex > -1.0 && vertex < 1.0 && std::find(p.begin(), p.end(), vertex) == p.end()) p.push_back(vertex);
  }
  return p;
}

}  // namespace

std::vector<AffineLine> affine_envelope(const QuadraticDensity& f, int n) {
  require(n >= 2, ErrorKind::InvalidInput, "affine envelope needs at least 2 lines");
  require(f.a2 >= 0, ErrorKind::NotConvex, "quadratic density is concave (negative t^2 coefficient)");
  std::vector<AffineLine> lines;
  for (double t : tangency_points(f, n)) {
    const double s = f.slope(t);
    lines.push_back({s, f.value(t) - s * t});
  }
  return lines;
}

double affine_envelope_gap(const QuadraticDensity& f, int n) {
  require(n >= 2, ErrorKind::InvalidInput, "affine envelope needs at least 2 lines");
  // Tangent of a t^2 at p lies below by a2 (t - p)^2, so the gap at t is a2
  // times the squared distance to the nearest tangency point. The farthest
  // point is either an endpoint or a midpoint between neighbours.
  auto p = tangency_points(f, n);
  std::sort(p.begin(), p.end());
  double reach = std::max(p.front() + 1.0, 1.0 - p.back());
  for (std::size_t k = 0; k + 1 < p.size(); ++k) reach = std::max(reach, 0.5 * (p[k + 1] - p[k]));
  return f.a2 * reach * reach;
}

}  // namespace droplet
