#pragma once

#include <string>

#include <json.hpp>

#include "droplet/anchoring.hpp"
#include "droplet/director.hpp"
#include "droplet/energy.hpp"
#include "droplet/geometry.hpp"
#include "droplet/muniform.hpp"
#include "droplet/optimizer.hpp"

namespace droplet::io {

using Json = nlohmann::ordered_json;

/// Rounds to 12 significant digits; non-finite values pass through.
double round12(double x);
Json number(double x);
/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);
/// Parses text; malformed JSON raises InvalidInput naming `what`.
Json parse(const std::string& text, const std::string& what);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

Json surface_json(const RadialSurface& s);
RadialSurface surface_from_json(const Json& j);
/// v and f records of the embedded surface, 1-based faces.
std::string surface_obj(const RadialSurface& s);

Json field_json(const DirectorField& u);
DirectorField field_from_json(const Json& j);
Json energy_report_json(const DirectorSolution& sol, const EnergyBreakdown& e);

Json anchoring_json(const AnchoringSpec& spec);
AnchoringSpec anchoring_from_json(const Json& j);

Json config_json(const OptimizationConfig& cfg);
/// Missing keys keep their defaults; unknown keys raise InvalidInput.
OptimizationConfig config_from_json(const Json& j);
Json optimization_json(const OptimizationResult& r);

Json polygon_json(const planar::Polygon2D& p);
planar::Polygon2D polygon_from_json(const Json& j);
Json uniformity_json(const planar::UniformityReport& r);
Json density_json(const planar::DensityReport& r);

Json landscape_json(const std::vector<LandscapeRow>& rows);

}  // namespace droplet::io
