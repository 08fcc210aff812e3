#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "pdsr/dataset.hpp"
#include "pdsr/fusion.hpp"
#include "pdsr/mission.hpp"
#include "pdsr/scene.hpp"

namespace pdsr {

struct MissionKnobs {
  int dwell_samples = 5;
  double move_cost = 1.0;
  double sense_cost = 0.5;
  double battery = 36000.0;
  double reserve_fraction = 0.1;
  int la_speed = 2;
  double sensing_altitude = 1.5;
  double visible_detection_prob = 0.9;
  double vote_threshold = 0.5;
  Cell base{0, 0};
  int la_count = 0;  // 0: sized from the cluster load
  FleetPolicy policy;
};

// One document per run; every field has a default, unknown keys are
// rejected. CLI flags override file values.
struct RunConfig {
  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "out";
  ScenarioSpec scene;
  GenParams gen;  // radar configs plus dataset sampling knobs
  Protocol protocol;
  Family family = Family::StableCombined;
  LrHyper lr;
  TreeHyper dt;
  ForestHyper rf;
  int importance_repeats = 5;
  MissionKnobs mission;
};

RunConfig load_config(const std::filesystem::path& path);  // throws IoError
RunConfig parse_config(std::string_view text);
void apply_overrides(RunConfig& config, const std::string& dotted_key,
                     const std::string& value);  // "radar.fmcw.gain" style

// Canonical key=value rendering of everything except the seed and the
// output directory; the digest of this string is embedded in every
// artifact.
std::string canonical_config(const RunConfig& config);
std::string config_digest(const RunConfig& config);  // 16 hex chars

MissionParams make_mission_params(const RunConfig& config);

}  // namespace pdsr
