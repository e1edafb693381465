// Batch command-line front end. Every invocation writes manifest.json into
// --out-dir, also when it fails.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "droplet/error.hpp"
#include "droplet/flows.hpp"
#include "droplet/io.hpp"
#include "droplet/muniform.hpp"
#include "droplet/optimizer.hpp"
#include "droplet/verify.hpp"

#ifndef DROPLET_VERSION
#define DROPLET_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using namespace droplet;
using io::Json;

namespace {

enum Exit { kOk = 0, kVerificationFailed = 1, kInvalidInput = 2, kNumericalFailure = 3 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::NotConvex:
    case ErrorKind::InvalidTimestep:
      return kInvalidInput;
    default:
      return kNumericalFailure;
  }
}

struct Globals {
  unsigned seed = 0;
  int threads = 1;
  std::string out_dir = ".";
};

struct Run {
  std::string command;
  std::optional<std::string> config;
  std::vector<std::string> outputs;
  Globals g;
  std::string failure;

  std::string path(const std::string& name) const {
    const fs::path p(name);
    return p.is_absolute() ? name : (fs::path(g.out_dir) / p).string();
  }
  void write(const std::string& name, const std::string& text) {
    const std::string p = path(name);
    io::write_text(p, text);
    outputs.push_back(p);
  }
};

void write_manifest(const Run& run, int code, double seconds) {
  Json m;
  m["command"] = run.command;
  m["config"] = run.config ? Json(*run.config) : Json(nullptr);
  m["outputs"] = run.outputs;
  m["seed"] = run.g.seed;
  m["threads"] = run.g.threads;
  m["version"] = DROPLET_VERSION;
  m["wall_time_s"] = io::number(seconds);
  m["exit_code"] = code;
  m["status"] = code == kOk ? "ok" : code == kVerificationFailed ? "verification-failed" : "error";
  if (!run.failure.empty()) m["failure"] = run.failure;
  try {
    fs::create_directories(run.g.out_dir);
    io::write_text((fs::path(run.g.out_dir) / "manifest.json").string(), io::dump(m));
  } catch (const std::exception& e) {
    std::cerr << "error: cannot write manifest: " << e.what() << "\n";
  }
}

Json reports_json(const std::vector<VerificationReport>& reports) {
  Json arr = Json::array();
  bool pass = true;
  for (const auto& r : reports) {
    arr.push_back(r.to_json());
    pass = pass && r.pass();
  }
  return Json{{"reports", std::move(arr)}, {"pass", pass}};
}

// Named planar shapes: square, disk:n, dumbbell:w, slit:depth.
planar::Polygon2D named_polygon(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto value = [&](double fallback) {
    if (arg.empty()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(arg, &used);
      require(used == arg.size(), ErrorKind::InvalidInput, "bad shape parameter '" + arg + "'");
      return v;
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidInput, "bad shape parameter '" + arg + "'");
    }
  };
  if (kind == "square") return planar::axis_box({0.0, 0.0}, {1.0, 1.0});
  if (kind == "disk") return planar::regular_polygon(static_cast<int>(value(64)), 1.0);
  if (kind == "dumbbell") return planar::dumbbell(value(0.2));
  if (kind == "slit") return planar::slit_square(value(0.5), 0.02);
  throw Error(ErrorKind::InvalidInput, "unknown polygon '" + text + "' (square, disk:n, dumbbell:w, slit:depth)");
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  Run run;
  CLI::App app{"Star-shaped liquid-crystal droplet toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DROPLET_VERSION);
  app.add_option("--seed", run.g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--threads", run.g.threads, "Worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  app.add_option("--out-dir", run.g.out_dir, "Directory for outputs and the manifest")->capture_default_str();

  // mesh
  int mesh_level = 3;
  std::string mesh_shape = "sphere:1";
  std::string mesh_out = "mesh.json";
  std::string mesh_obj;
  auto* mesh = app.add_subcommand("mesh", "Sample a shape on an icosphere");
  mesh->add_option("--level", mesh_level)->capture_default_str();
  mesh->add_option("--shape", mesh_shape)->capture_default_str();
  mesh->add_option("--out", mesh_out)->capture_default_str();
  mesh->add_option("--obj", mesh_obj, "Also write an OBJ file");

  // optimize
  std::string opt_config;
  std::string opt_out = "optimize.json";
  std::string opt_history = "history.csv";
  std::string opt_obj = "optimized.obj";
  auto* optimize_cmd = app.add_subcommand("optimize", "Shape optimization at fixed volume");
  optimize_cmd->add_option("--config", opt_config, "OptimizationConfig JSON; defaults when omitted");
  optimize_cmd->add_option("--out", opt_out)->capture_default_str();
  optimize_cmd->add_option("--history", opt_history)->capture_default_str();
  optimize_cmd->add_option("--obj", opt_obj)->capture_default_str();

  // imcf / mcf
  struct FlowArgs {
    std::string shape = "ellipsoid:1,1,1.5";
    int level = 3;
    double t_end = 1.0;
    double dt = 1e-3;
    std::string trace;
    bool no_smoothing = false;
  };
  FlowArgs imcf_args{.trace = "imcf.csv"};
  FlowArgs mcf_args{.t_end = 0.05, .dt = 1e-4, .trace = "mcf.csv"};
  auto add_flow = [&](const char* name, const char* help, FlowArgs& a) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--shape", a.shape)->capture_default_str();
    sub->add_option("--level", a.level)->capture_default_str();
    sub->add_option("--t-end", a.t_end)->capture_default_str();
    sub->add_option("--dt", a.dt)->capture_default_str();
    sub->add_option("--trace", a.trace, "CSV trace")->capture_default_str();
    sub->add_flag("--no-smoothing", a.no_smoothing, "Skip the damped curvature smoothing pass");
    return sub;
  };
  auto* imcf = add_flow("imcf", "Inverse mean curvature flow", imcf_args);
  auto* mcf = add_flow("mcf", "Mean curvature flow", mcf_args);

  // verify
  std::string suite = "all";
  std::string verify_out = "verify.json";
  auto* verify = app.add_subcommand("verify", "Run verification suites");
  std::vector<std::string> suite_choices = kSuiteNames;
  suite_choices.push_back("all");
  verify->add_option("--suite", suite)->check(CLI::IsMember(suite_choices))->capture_default_str();
  verify->add_option("--out", verify_out)->capture_default_str();

  // muniform
  std::string mu_polygon;
  std::string mu_shape = "square";
  double mu_h = 0.0;
  int mu_samples = 100;
  double mu_mmax = 100.0;
  std::optional<double> mu_density;
  std::string mu_out = "muniform.json";
  auto* muniform = app.add_subcommand("muniform", "Estimate the uniformity constant of a polygon");
  auto* poly_opt = muniform->add_option("--polygon", mu_polygon, "Polygon JSON {\"vertices\": [[x,y]...]}");
  muniform->add_option("--shape", mu_shape, "square, disk:n, dumbbell:w or slit:depth")
      ->capture_default_str()
      ->excludes(poly_opt);
  muniform->add_option("--cell-size", mu_h, "Grid cell size h; default diameter/128");
  muniform->add_option("--samples", mu_samples)->check(CLI::PositiveNumber)->capture_default_str();
  muniform->add_option("--mmax", mu_mmax)->capture_default_str();
  muniform->add_option("--density", mu_density, "Also check the density classes with this c");
  muniform->add_option("--out", mu_out)->capture_default_str();

  // landscape
  double land_mu = 1.0;
  int land_level = 3;
  int land_layers = 8;
  double land_volume = 4.0 * std::numbers::pi / 3.0;
  std::vector<double> aspects = {0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6};
  std::string land_csv = "landscape.csv";
  std::string land_out = "landscape.json";
  auto* landscape = app.add_subcommand("landscape", "Energy of ellipsoids (1,1,a) at fixed volume");
  landscape->add_option("--mu", land_mu)->capture_default_str();
  landscape->add_option("--level", land_level)->capture_default_str();
  landscape->add_option("--layers", land_layers)->capture_default_str();
  landscape->add_option("--volume", land_volume)->capture_default_str();
  landscape->add_option("--aspects", aspects)->delimiter(',');
  landscape->add_option("--csv", land_csv)->capture_default_str();
  landscape->add_option("--out", land_out)->capture_default_str();

  int code = kOk;
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    run.command = app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
    run.failure = e.what();
    write_manifest(run, kInvalidInput, 0.0);
    return kInvalidInput;
  }
  run.command = app.get_subcommands().front()->get_name();

  try {
    fs::create_directories(run.g.out_dir);
    if (mesh->parsed()) {
      const auto base = std::make_shared<const IcosphereMesh>(build_icosphere(mesh_level));
      const auto s = radial_surface(base, parse_shape(mesh_shape));
      run.write(mesh_out, io::dump(io::surface_json(s)));
      if (!mesh_obj.empty()) run.write(mesh_obj, io::surface_obj(s));
    } else if (optimize_cmd->parsed()) {
      OptimizationConfig cfg;
      if (!opt_config.empty()) {
        run.config = opt_config;
        cfg = io::config_from_json(io::parse(io::read_text(opt_config), opt_config));
      }
      if (app.count("--seed")) cfg.seed = run.g.seed;
      if (app.count("--threads")) cfg.threads = run.g.threads;
      run.g.seed = cfg.seed;
      const auto r = optimize(cfg);
      run.write(opt_out, io::dump(io::optimization_json(r)));
      run.write(opt_history, r.history_csv());
      run.write(opt_obj, io::surface_obj(r.surface));
      std::cerr << "termination: " << r.termination << ", total energy " << r.energy.total << "\n";
      if (r.termination == "director-failure") {
        run.failure = "director relaxation failed; partial result written";
        code = kNumericalFailure;
      }
    } else if (imcf->parsed() || mcf->parsed()) {
      const bool inverse = imcf->parsed();
      const FlowArgs& a = inverse ? imcf_args : mcf_args;
      const auto base = std::make_shared<const IcosphereMesh>(build_icosphere(a.level));
      const auto s = radial_surface(base, parse_shape(a.shape));
      FlowOptions opts;
      opts.smooth_curvature = !a.no_smoothing;
      const auto trace = inverse ? run_imcf(s, a.t_end, a.dt, opts) : run_mcf(s, a.t_end, a.dt, opts);
      run.write(a.trace, trace.to_csv());
    } else if (verify->parsed()) {
      const auto reports = run_suite(suite, run.g.seed, run.g.threads);
      const Json j = reports_json(reports);
      run.write(verify_out, io::dump(j));
      for (const auto& r : reports) {
        for (const auto& c : r.cases) {
          if (!c.pass) std::cerr << "FAIL " << r.suite << "/" << c.id << (c.note.empty() ? "" : ": " + c.note) << "\n";
        }
      }
      if (!j.at("pass").get<bool>()) {
        run.failure = "verification cases failed";
        code = kVerificationFailed;
      }
    } else if (muniform->parsed()) {
      planar::Polygon2D p;
      if (!mu_polygon.empty()) {
        run.config = mu_polygon;
        p = io::polygon_from_json(io::parse(io::read_text(mu_polygon), mu_polygon));
      } else {
        p = named_polygon(mu_shape);
      }
      const double h = mu_h > 0 ? mu_h : p.diameter() / 128.0;
      Json j = io::uniformity_json(planar::uniformity_report(p, mu_samples, h, mu_mmax, run.g.seed));
      if (mu_density) {
        const auto g = planar::rasterize(p, h);
        j["density"] = io::density_json(planar::density_check(g, *mu_density, {4 * h, 8 * h, 16 * h}, run.g.seed));
      }
      j["polygon"] = io::polygon_json(p);
      j["h"] = io::number(h);
      run.write(mu_out, io::dump(j));
    } else if (landscape->parsed()) {
      const auto rows = energy_landscape_scan(aspects, AnchoringSpec::dirichlet_normal(land_mu), land_volume,
                                              land_level, land_layers, {}, run.g.threads);
      run.write(land_out, io::dump(io::landscape_json(rows)));
      run.write(land_csv, landscape_csv(rows));
    }
  } catch (const Error& e) {
    run.failure = e.what();
    code = exit_code(e.kind());
  } catch (const std::exception& e) {
    run.failure = e.what();
    code = kNumericalFailure;
  }
  if (!run.failure.empty()) std::cerr << "error: " << run.failure << "\n";
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(run, code, seconds);
  return code;
}
