#include "pdsr/radar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pdsr/errors.hpp"

namespace pdsr {

double Attenuation::alpha(Material m, double carrier_hz) const {
  double base = 0.0;
  switch (m) {
    case Material::Air: return 0.0;
    case Material::Wood: base = wood; break;
    case Material::Brick: base = brick; break;
    case Material::Concrete: base = concrete; break;
  }
  constexpr double f_lo = 10e9, f_hi = 24e9;
  const double t = std::clamp((carrier_hz - f_lo) / (f_hi - f_lo), 0.0, 1.0);
  return base * (1.0 + t * (mmw_scale - 1.0));
}

std::string_view scenario_tag_name(ScenarioTag tag) {
  switch (tag) {
    case ScenarioTag::StableWood: return "stable_wood";
    case ScenarioTag::StableWoodBricks: return "stable_wood_bricks";
    case ScenarioTag::HoverWoodBricks: return "hover_wood_bricks";
  }
  return "stable_wood";
}

ScenarioTag scenario_tag_from_name(std::string_view name) {
  if (name == "stable_wood") return ScenarioTag::StableWood;
  if (name == "stable_wood_bricks") return ScenarioTag::StableWoodBricks;
  if (name == "hover_wood_bricks") return ScenarioTag::HoverWoodBricks;
  throw IoError("unknown scenario tag '" + std::string(name) + "'");
}

double FeatureVector::feature(int index) const {
  switch (index) {
    case 0: return doppler_hz;
    case 1: return static_cast<double>(uwb_detect);
    case 2: return fmcw;
    case 3: return altitude;
  }
  throw DomainError("feature index " + std::to_string(index) +
                    " out of range");
}

std::string_view feature_name(int index) {
  switch (index) {
    case 0: return "doppler";
    case 1: return "uwb";
    case 2: return "fmcw";
    case 3: return "altitude";
  }
  throw DomainError("feature index " + std::to_string(index) +
                    " out of range");
}

double penetration_factor(const RubbleColumn& column, double carrier_hz,
                          const Attenuation& att) {
  double depth = 0.0;
  for (const RubbleLayer& layer : column) {
    depth += att.alpha(layer.material, carrier_hz) * layer.thickness_m;
  }
  return std::exp(-depth);
}

double chest_velocity(const Victim& victim) {
  return 2.0 * std::numbers::pi * victim.chest_amplitude *
         (victim.respiration_rate + 0.2 * victim.heartbeat_rate);
}

namespace {

double range_scale(double reference, double altitude, double exponent) {
  return std::pow(reference / altitude, exponent);
}

double platform_jitter(const PlatformState& platform) {
  return platform.stability == Stability::Hovering ? platform.jitter_sigma_hz
                                                   : 0.0;
}

}  // namespace

double micro_doppler(const Victim* victim, const PlatformState& platform,
                     const UwbConfig& cfg, const RubbleColumn& column,
                     Rng& rng, const Attenuation& att) {
  double signal = 0.0;
  if (victim) {
    signal = 2.0 * chest_velocity(*victim) * cfg.carrier_hz / kSpeedOfLight *
             penetration_factor(column, cfg.carrier_hz, att) *
             range_scale(cfg.reference_altitude, platform.altitude,
                         cfg.range_exponent);
  }
  // Receiver noise and platform jitter are independent, so their
  // variances add.
  const double sigma = std::hypot(cfg.noise_sigma_hz, platform_jitter(platform));
  return signal + rng.normal(0.0, sigma);
}

int uwb_detect(double doppler_hz, const UwbConfig& cfg) {
  return std::abs(doppler_hz) >= cfg.doppler_threshold_hz ? 1 : 0;
}

double fmcw_reading(const Victim* victim, const PlatformState& platform,
                    const FmcwConfig& cfg, const RubbleColumn& column,
                    Rng& rng, const Attenuation& att) {
  double signal = 0.0;
  if (victim) {
    signal = cfg.gain * chest_velocity(*victim) *
             penetration_factor(column, cfg.carrier_hz, att) *
             range_scale(cfg.reference_altitude, platform.altitude,
                         cfg.range_exponent);
  }
  const double sigma =
      cfg.noise_sigma *
      (platform.stability == Stability::Hovering ? cfg.hover_penalty : 1.0);
  return signal + rng.normal(0.0, sigma);
}

FeatureVector sample_features(const Scenario& scenario, Cell cell,
                              const PlatformState& platform,
                              const UwbConfig& uwb, const FmcwConfig& fmcw,
                              Rng& rng, const Attenuation& att,
                              ScenarioTag tag) {
  const RubbleColumn& column = overburden(scenario, cell);
  const Victim* victim = scenario.victim_at(cell);
  static const RubbleColumn surface;
  const RubbleColumn& effective =
      (victim && !victim->buried) ? surface : column;

  FeatureVector f;
  f.doppler_hz = micro_doppler(victim, platform, uwb, effective, rng, att);
  f.uwb_detect = uwb_detect(f.doppler_hz, uwb);
  f.fmcw = fmcw_reading(victim, platform, fmcw, effective, rng, att);
  f.altitude = platform.altitude;
  f.label = victim ? 1 : 0;
  f.tag = tag;
  return f;
}

}  // namespace pdsr
