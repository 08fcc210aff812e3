#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pdsr/radar.hpp"
#include "pdsr/rng.hpp"

namespace pdsr {

// Synthetic sensing protocols the classifiers are trained on. The three
// base families correspond to the scenario tags; the combined families
// concatenate base-family rows (generated from the same per-family
// sub-streams, so a combined dataset is literally the union of the
// standalone ones for a given seed).
enum class Family {
  StableWood,
  StableWoodBricks,
  HoverWoodBricks,
  StableCombined,  // both stable families
  Combined,        // all three
};

std::string_view family_name(Family f);
Family family_from_name(std::string_view name);  // throws IoError

struct Protocol {
  std::vector<double> altitudes = {1.5, 1.75, 2.0};
  int per_class_per_altitude = 2000;
  double test_fraction = 0.2;
};

// Sampling knobs shared by all families.
struct GenParams {
  UwbConfig uwb;
  FmcwConfig fmcw;
  Attenuation att;
  double jitter_sigma_hz = 0.35;  // hovering families
  double brick_share = 0.5;       // wood-and-bricks families
  double thickness_lo = 0.03;     // m
  double thickness_hi = 0.10;
  double respiration_lo = 0.2;  // Hz
  double respiration_hi = 0.4;
  double heartbeat_lo = 1.0;  // Hz
  double heartbeat_hi = 1.5;
  double chest_amplitude_lo = 0.003;  // m
  double chest_amplitude_hi = 0.008;
};

struct Split {
  std::vector<int> train;
  std::vector<int> test;
};

struct Dataset {
  std::vector<FeatureVector> rows;
  std::optional<Split> split;
  std::uint64_t seed = 0;
  std::string config_digest;
};

// Balanced dataset per the default protocol: for each base family,
// per_class_per_altitude rows of each label at each altitude. Rows are
// ordered family-major, then altitude, then label 1 before label 0.
// Includes a stratified train/test split keyed on (tag, altitude, label).
// Throws DomainError on empty protocol values.
Dataset generate_dataset(Family family, const Protocol& protocol,
                         std::uint64_t seed, const GenParams& params = {});

// Stratified split over arbitrary rows; exposed for reloaded CSVs.
Split stratified_split(const std::vector<FeatureVector>& rows,
                       double test_fraction, std::uint64_t seed);

inline constexpr std::string_view kDatasetHeader =
    "scenario,altitude_m,doppler_hz,uwb_detect,fmcw_reading,label";

void save_dataset_csv(const Dataset& dataset,
                      const std::filesystem::path& path);
std::string dataset_csv(const Dataset& dataset);

// Strict reader for the schema above; comment lines (leading '#') are
// skipped. Throws IoError naming the offending column or line.
Dataset load_dataset_csv(const std::filesystem::path& path);
Dataset parse_dataset_csv(std::string_view text);

}  // namespace pdsr
