#pragma once

#include <json.hpp>

#include "hardylab/rearrange.hpp"

namespace hardylab {

/// {"kind": "...", "lambda": ..., "samples": [[r, psi], ...]}
nlohmann::json warping_to_json(const WarpingSpec& spec);
WarpingSpec warping_from_json(const nlohmann::json& j);

/// Profile catalog: bump, truncated_power, piecewise_linear, phi_eps,
/// extremal, custom_breakpoints. phi_eps and extremal need the dimension.
RadialProfile profile_from_json(int N, const nlohmann::json& j);

/// {"sectors": [{"weight_fraction": w/omega_N, "profile": {...}}, ...]}
SectorFunction sector_function_from_json(const ModelManifold& m, const nlohmann::json& j);

/// Named catalog entries usable as the CLI "function" shorthand.
SectorFunction catalog_function(const ModelManifold& m, const std::string& name);

}  // namespace hardylab
