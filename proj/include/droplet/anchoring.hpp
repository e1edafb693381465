#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace droplet {

/// Convex-or-not quadratic f(t) = a2 t^2 + a1 t + a0.
struct QuadraticDensity {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;

  /// mu (1 + w t^2)
  static QuadraticDensity anchoring(double mu, double w) { return {mu * w, 0.0, mu}; }
  /// mu (t - c)^2
  static QuadraticDensity penalty(double mu, double c) { return {mu, -2.0 * mu * c, mu * c * c}; }

  double value(double t) const { return (a2 * t + a1) * t + a0; }
  double slope(double t) const { return 2.0 * a2 * t + a1; }
};

struct AffineLine {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Surface density f applied to u . nu: either a quadratic or the pointwise
/// maximum of a list of affine functions.
class SurfaceDensity {
 public:
  SurfaceDensity() = default;
  explicit SurfaceDensity(QuadraticDensity q) : quadratic_(q) {}
  explicit SurfaceDensity(std::vector<AffineLine> envelope);

  double value(double t) const;
  /// A subgradient (the active line's slope for envelopes).
  double slope(double t) const;
  bool is_envelope() const { return !envelope_.empty(); }

 private:
  QuadraticDensity quadratic_{};
  std::vector<AffineLine> envelope_;
};

enum class AnchoringVariant { DirichletNormal, ConstantAngle, SurfaceEnergy };

std::string_view to_string(AnchoringVariant v);
AnchoringVariant parse_anchoring_variant(std::string_view text);

/// Boundary model for the droplet energy.
///   DirichletNormal: u = nu on the boundary, surface energy mu * area.
///   ConstantAngle:   mu * area + mu_pen * (u . nu - c)^2 integrated.
///   SurfaceEnergy:   f(u . nu) integrated, f = mu (1 + w t^2) or the envelope.
struct AnchoringSpec {
  AnchoringVariant variant = AnchoringVariant::DirichletNormal;
  double mu = 1.0;
  double w = 0.0;
  double c = 1.0;
  double mu_pen = 0.0;
  std::vector<AffineLine> envelope;

  void validate() const;
  /// The u-dependent part of the surface density (zero for DirichletNormal).
  SurfaceDensity density() const;
  /// The u-independent surface-tension coefficient multiplying the area.
  double tension() const;

  static AnchoringSpec dirichlet_normal(double mu) { return {AnchoringVariant::DirichletNormal, mu, 0.0, 1.0, 0.0, {}}; }
  static AnchoringSpec constant_angle(double mu, double c, double mu_pen) {
    return {AnchoringVariant::ConstantAngle, mu, 0.0, c, mu_pen, {}};
  }
  static AnchoringSpec quadratic(double mu, double w) {
    return {AnchoringVariant::SurfaceEnergy, mu, w, 1.0, 0.0, {}};
  }
};

/// Tangent lines of a convex quadratic at n Chebyshev points of [-1, 1], plus
/// the horizontal tangent at the vertex of f when it lies inside (-1, 1).
/// The maximum of the lines never exceeds f on [-1, 1].
std::vector<AffineLine> affine_envelope(const QuadraticDensity& f, int n);

/// Exact sup over [-1, 1] of f(t) - max_i line_i(t) for the tangent
/// construction: a2 times the squared largest distance to a tangency point.
double affine_envelope_gap(const QuadraticDensity& f, int n);

}  // namespace droplet
