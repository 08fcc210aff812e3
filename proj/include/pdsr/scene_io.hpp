#pragma once

#include <filesystem>
#include <string>

#include "pdsr/scene.hpp"

namespace pdsr {

// Scenario document: [meta] provenance, [grid], [materials] keyed by
// "x,y", [[victims]], and optional [[clusters]] (recomputed on load when
// absent). save(load(save(s))) is byte-identical to save(s).
std::string scenario_toml(const Scenario& scenario);
void save_scenario(const Scenario& scenario,
                   const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(std::string_view text);

}  // namespace pdsr
