#pragma once

#include <string>
#include <vector>

#include "homoglab/grid.hpp"
#include "homoglab/reports.hpp"

namespace homoglab {

struct ScenarioInfo {
    std::string name;
    std::string description;
};

/// Alphabetical registry listing; filter = case-sensitive substring of name.
std::vector<ScenarioInfo> list_scenarios(const std::string& filter = "");

/// Default parameter block for one scenario (throws ScenarioUnknown).
Json scenario_defaults(const std::string& name);

/// All registry names (alphabetical), for error reporting.
std::vector<std::string> scenario_registry_names();

struct ScenarioConfig {
    std::string scenario;
    std::string output_dir = "out";
    int jobs = 1;
    Json params;  ///< fully resolved: defaults overlaid with the user's values
};

/// Parses a JSON config: top-level keys {scenario, output_dir, jobs, params};
/// unknown keys anywhere are hard errors (ConfigInvalid / ScenarioUnknown).
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Runs one scenario, writes summary.json (+ CSV / plot data) into the output
/// directory (HOMOGLAB_OUT overrides), and returns the summary document.
/// Identical configs produce byte-identical numeric payloads.
Json run_scenario(const ScenarioConfig& cfg);

/// Shared test family for the discrete Sobolev-inequality suite: shape ∈
/// {0: square tent, 1: cone, 2: bump (1+|x|²)⁻¹, 3: steep bump}, shifted and
/// dilated, sampled on [-half, half]² at n cells per unit.
ScalarField gns_shape(int shape, Vec2 shift, double dilate, int half, int n);

/// The 12-member family: 4 shapes × {original, translate (1,1), dilate ½}.
std::vector<ScalarField> gns_family(int half, int n);

} // namespace homoglab
