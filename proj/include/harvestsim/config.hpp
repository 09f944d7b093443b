#pragma once

#include <cstdint>
#include <string>

#include "harvestsim/cycle.hpp"

namespace harvest::cfg {

// Everything the CLI and the batch runners need, assembled from defaults and
// an optional JSON file. Angles are degrees in the file and radians here.
struct RunConfig {
    kin::LinkParams links;
    kin::JointLimits limits = kin::JointLimits::stock();
    sim::PlantModel plant;
    sim::CycleOptions cycle;
    sim::SceneConfig scene;
    std::vector<kin::CartesianPoint> compare_cases;
    int compare_repetitions = 5;
    std::uint64_t seed = 0;
};

RunConfig defaults();

// Parses `path` and overlays it on the defaults. Unknown keys anywhere in the
// tree and values that break the model invariants raise ConfigError with the
// offending key path.
RunConfig load(const std::string& path);

// Overlay from an in-memory JSON document (used by load and by tests).
RunConfig from_json_text(const std::string& text);

void validate(const RunConfig& cfg);

} // namespace harvest::cfg
