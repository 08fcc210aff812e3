#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "pdsr/fusion.hpp"

namespace pdsr {

// Versioned JSON document holding the complete model. Doubles survive
// the round trip exactly, so reloaded models predict bit-identically.
std::string model_to_json(const Model& model, std::uint64_t seed,
                          const std::string& config_digest);
Model model_from_json(const std::string& text);  // throws IoError

void save_model(const Model& model, const std::filesystem::path& path,
                std::uint64_t seed, const std::string& config_digest);
Model load_model(const std::filesystem::path& path);

std::string_view model_kind(const Model& model);  // lr, dt, rf

}  // namespace pdsr
