#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dtplace/cost.hpp"
#include "dtplace/domain.hpp"
#include "dtplace/harness.hpp"
#include "dtplace/saa.hpp"

namespace dtplace::io {

using nlohmann::json;

json to_json(const Instance& inst);
/// Distances are recomputed from positions; violations raise ConfigError.
Instance instance_from_json(const json& j);

/// {"placement": [[device, component, server], ...]}
json to_json(const Instance& inst, const Placement& pl);
Placement placement_from_json(const Instance& inst, const json& j);

/// Seed, dimensions and raw cycle values.
json to_json(const SampleSet& samples);
SampleSet samples_from_json(const json& j);

/// Any missing key keeps its default.
ExperimentConfig experiment_config_from_json(const json& j);
json to_json(const ExperimentConfig& cfg);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace dtplace::io
