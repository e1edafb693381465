#pragma once

#include <string>
#include <utility>
#include <vector>

#include "droplet/anchoring.hpp"
#include "droplet/director.hpp"
#include "droplet/geometry.hpp"
#include "droplet/io.hpp"

namespace droplet {

struct VerificationCase {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // slack of the pass condition, negative on failure
  double tol = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, bool>> flags;
  std::string note;
};

struct VerificationReport {
  std::string suite;
  std::vector<VerificationCase> cases;

  bool pass() const;
  io::Json to_json() const;
};

struct NamedSurface {
  std::string id;
  RadialSurface surface;
};

struct Resolution {
  int level = 4;
  int layers = 16;
  SolverOptions solver;
  int threads = 1;
};

inline constexpr double kBulkTolerance = 0.05;
inline constexpr double kMinkowskiTolerance = 0.02;
inline constexpr double kIsoperimetricTolerance = 0.01;
inline constexpr double kEqualityAsphericity = 1e-3;
inline constexpr double kDivergenceSlack = 1e-10;
inline constexpr double kLiminfTolerance = 0.02;
/// Icosphere level of the geometry-only suites (Minkowski, isoperimetric).
inline constexpr int kGeometryLevel = 6;

/// Spheres {0.5, 1, 2}, ellipsoids {(1,1,1.2), (1,1,1.5), (1,1,2), (0.8,1,1.25)}
/// and two seeded perturbed spheres (amplitude 0.05) after mean convexification.
std::vector<NamedSurface> default_shapes(int level, unsigned seed);

/// Minimized normal-anchoring Dirichlet energy against total mean curvature.
VerificationReport verify_bulk_vs_totalH(const std::vector<NamedSurface>& shapes, const Resolution& res);

/// Minkowski deficit >= -2% totalH for every shape. Shapes with asphericity
/// below 1e-3 carry the equality flag and need |deficit| <= 2% totalH; the
/// others need a positive deficit.
VerificationReport verify_minkowski(const std::vector<NamedSurface>& shapes);

VerificationReport verify_isoperimetric(const std::vector<NamedSurface>& shapes);

/// Per tet: |J|^2 >= (tr J_T)^2 - tr(J_T^2) where J_T is J with the component
/// along the tet-mean director removed, and the identity
/// div((tr J) u - J u) = (tr J)^2 - tr(J^2) on the affine interpolant.
std::vector<VerificationCase> divergence_identity_cases(const ShellMesh& mesh, const DirectorField& u,
                                                        const std::string& id);
VerificationReport verify_divergence_identity(const ShellMesh& mesh, const DirectorField& u,
                                              const std::string& id = "field");

DirectorField random_unit_field(const ShellMesh& mesh, unsigned seed);

/// Minimized energies along `family` against the minimized energy on `limit`;
/// every member and the tail minimum must stay above (1 - 2%) of the limit.
VerificationReport lsc_experiment(const std::vector<NamedSurface>& family, const NamedSurface& limit,
                                  const AnchoringSpec& spec, const Resolution& res);

/// Boundary violation of u . nu = c for constant-angle minimizers with
/// increasing penalty weights; must decrease strictly.
VerificationReport verify_penalty_limit(const NamedSurface& shape, double c, const std::vector<double>& mu_pens,
                                        const Resolution& res);

/// Unit norm, monotone descent, Dirichlet immutability, Gauss-Bonnet, volume
/// restore, frame covariance and byte-identical reruns.
VerificationReport verify_invariants(const Resolution& res, unsigned seed);

inline const std::vector<std::string> kSuiteNames = {"bulk",  "minkowski", "isoperimetric", "divergence",
                                                     "lsc",   "penalty",   "invariants"};

/// Runs one named suite, or every suite for "all", with default inputs.
std::vector<VerificationReport> run_suite(const std::string& name, unsigned seed, int threads = 1);

}  // namespace droplet
