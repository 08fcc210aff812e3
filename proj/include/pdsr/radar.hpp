#pragma once

#include <string_view>

#include "pdsr/rng.hpp"
#include "pdsr/scene.hpp"

namespace pdsr {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

// Per-meter attenuation at the 10 GHz anchor; scaled by mmw_scale at
// 24 GHz, linearly interpolated in between and clamped outside.
struct Attenuation {
  double wood = 1.4;
  double brick = 12.0;
  double concrete = 16.0;
  double mmw_scale = 1.3;

  double alpha(Material m, double carrier_hz) const;
};

struct UwbConfig {
  double carrier_hz = 10e9;
  double doppler_threshold_hz = 0.3;
  double noise_sigma_hz = 0.1;
  double range_exponent = 2.0;
  double reference_altitude = 1.5;  // m
};

struct FmcwConfig {
  double carrier_hz = 24e9;
  double gain = 50.0;
  double noise_sigma = 0.05;
  double hover_penalty = 6.0;
  double range_exponent = 2.0;
  double reference_altitude = 1.5;  // m
};

enum class Stability { Stable, Hovering };

struct PlatformState {
  double altitude = 1.5;  // m
  Stability stability = Stability::Stable;
  double jitter_sigma_hz = 0.0;  // positive iff Hovering
};

enum class ScenarioTag { StableWood, StableWoodBricks, HoverWoodBricks };

std::string_view scenario_tag_name(ScenarioTag tag);
ScenarioTag scenario_tag_from_name(std::string_view name);  // throws IoError

// The four features fed to the classifiers, in column order
// doppler, uwb, fmcw, altitude.
struct FeatureVector {
  double doppler_hz = 0.0;
  int uwb_detect = 0;
  double fmcw = 0.0;
  double altitude = 0.0;
  int label = 0;
  ScenarioTag tag = ScenarioTag::StableWood;

  double feature(int index) const;
};

inline constexpr int kFeatureCount = 4;
std::string_view feature_name(int index);  // doppler, uwb, fmcw, altitude

// exp(-sum alpha * thickness); 1.0 for an empty column.
double penetration_factor(const RubbleColumn& column, double carrier_hz,
                          const Attenuation& att = {});

// Effective chest-surface velocity amplitude. Heartbeat contributes a
// secondary term at 20% of the respiration amplitude.
double chest_velocity(const Victim& victim);

// Doppler shift in Hz. The signal term scales with penetration and an
// inverse power of altitude; additive Gaussian noise has sigma
// noise_sigma_hz combined with the platform jitter (independent sources,
// so variances add). Pass nullptr for an empty cell: noise only.
double micro_doppler(const Victim* victim, const PlatformState& platform,
                     const UwbConfig& cfg, const RubbleColumn& column,
                     Rng& rng, const Attenuation& att = {});

// 1 iff |doppler| >= threshold; equality counts as detection.
int uwb_detect(double doppler_hz, const UwbConfig& cfg);

// Dimensionless micromotion reading. Hovering multiplies the noise sigma
// by hover_penalty: the FMCW channel degrades under platform motion much
// more than the UWB channel does.
double fmcw_reading(const Victim* victim, const PlatformState& platform,
                    const FmcwConfig& cfg, const RubbleColumn& column,
                    Rng& rng, const Attenuation& att = {});

// Composes the two radars into one labeled feature vector for a grid
// cell. A buried victim is sensed through the cell's rubble column; a
// visible victim lies on top of it, so no overburden applies. Draw order
// is doppler first, then fmcw. Throws DomainError for out-of-grid cells.
FeatureVector sample_features(const Scenario& scenario, Cell cell,
                              const PlatformState& platform,
                              const UwbConfig& uwb, const FmcwConfig& fmcw,
                              Rng& rng, const Attenuation& att = {},
                              ScenarioTag tag = ScenarioTag::StableWood);

}  // namespace pdsr
