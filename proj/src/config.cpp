#include "pdsr/config.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "pdsr/errors.hpp"
#include "pdsr/tomlmini.hpp"

namespace pdsr {

namespace {

using toml::Table;
using toml::Value;

std::string joined(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

void check_keys(const Table& table, const std::string& prefix,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : table) {
    bool known = false;
    for (std::string_view a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw IoError("unknown config key '" + joined(prefix, key) + "'");
    }
  }
}

double read_double(const Table& table, const std::string& prefix,
                   std::string_view key, double fallback) {
  const Value* v = toml::find(table, key);
  if (!v) return fallback;
  if (!v->is_float() && !v->is_integer()) {
    throw IoError("config key '" + joined(prefix, key) +
                  "' must be a number");
  }
  return v->as_float();
}

int read_int(const Table& table, const std::string& prefix,
             std::string_view key, int fallback) {
  const Value* v = toml::find(table, key);
  if (!v) return fallback;
  if (!v->is_integer()) {
    throw IoError("config key '" + joined(prefix, key) +
                  "' must be an integer");
  }
  return static_cast<int>(v->as_integer());
}

bool read_bool(const Table& table, const std::string& prefix,
               std::string_view key, bool fallback) {
  const Value* v = toml::find(table, key);
  if (!v) return fallback;
  if (!v->is_boolean()) {
    throw IoError("config key '" + joined(prefix, key) +
                  "' must be a boolean");
  }
  return v->as_boolean();
}

std::string read_string(const Table& table, const std::string& prefix,
                        std::string_view key, std::string fallback) {
  const Value* v = toml::find(table, key);
  if (!v) return fallback;
  if (!v->is_string()) {
    throw IoError("config key '" + joined(prefix, key) +
                  "' must be a string");
  }
  return v->as_string();
}

std::uint64_t read_u64(const Table& table, const std::string& prefix,
                       std::string_view key, std::uint64_t fallback) {
  const Value* v = toml::find(table, key);
  if (!v) return fallback;
  if (!v->is_integer() || v->as_integer() < 0) {
    throw IoError("config key '" + joined(prefix, key) +
                  "' must be a non-negative integer");
  }
  return static_cast<std::uint64_t>(v->as_integer());
}

Cell read_cell(const Table& table, const std::string& prefix,
               std::string_view key, Cell fallback) {
  const Value* v = toml::find(table, key);
  if (!v) return fallback;
  if (!v->is_array() || v->as_array().size() != 2 ||
      !v->as_array()[0].is_integer() || !v->as_array()[1].is_integer()) {
    throw IoError("config key '" + joined(prefix, key) +
                  "' must be an array of two integers");
  }
  return Cell{static_cast<int>(v->as_array()[0].as_integer()),
              static_cast<int>(v->as_array()[1].as_integer())};
}

std::vector<double> read_doubles(const Table& table, const std::string& prefix,
                                 std::string_view key,
                                 std::vector<double> fallback) {
  const Value* v = toml::find(table, key);
  if (!v) return fallback;
  if (!v->is_array()) {
    throw IoError("config key '" + joined(prefix, key) +
                  "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const Value& e : v->as_array()) {
    if (!e.is_float() && !e.is_integer()) {
      throw IoError("config key '" + joined(prefix, key) +
                    "' must be an array of numbers");
    }
    out.push_back(e.as_float());
  }
  return out;
}

const Table* read_table(const Table& table, const std::string& prefix,
                        std::string_view key) {
  const Value* v = toml::find(table, key);
  if (!v) return nullptr;
  if (!v->is_table()) {
    throw IoError("config key '" + joined(prefix, key) + "' must be a table");
  }
  return &v->as_table();
}

void apply_scene(ScenarioSpec& s, const Table& t) {
  const std::string p = "scene";
  check_keys(t, p,
             {"width", "height", "cell_size", "clusters", "cells_per_cluster",
              "victims", "visible_victims", "brick_share", "concrete_share",
              "thickness_lo", "thickness_hi", "max_total_thickness",
              "no_fly_cells", "respiration_lo", "respiration_hi",
              "heartbeat_lo", "heartbeat_hi", "chest_amplitude_lo",
              "chest_amplitude_hi"});
  s.width = read_int(t, p, "width", s.width);
  s.height = read_int(t, p, "height", s.height);
  s.cell_size = read_double(t, p, "cell_size", s.cell_size);
  s.clusters = read_int(t, p, "clusters", s.clusters);
  s.cells_per_cluster = read_int(t, p, "cells_per_cluster",
                                 s.cells_per_cluster);
  s.victims = read_int(t, p, "victims", s.victims);
  s.visible_victims = read_int(t, p, "visible_victims", s.visible_victims);
  s.brick_share = read_double(t, p, "brick_share", s.brick_share);
  s.concrete_share = read_double(t, p, "concrete_share", s.concrete_share);
  s.thickness_lo = read_double(t, p, "thickness_lo", s.thickness_lo);
  s.thickness_hi = read_double(t, p, "thickness_hi", s.thickness_hi);
  s.max_total_thickness =
      read_double(t, p, "max_total_thickness", s.max_total_thickness);
  s.no_fly_cells = read_int(t, p, "no_fly_cells", s.no_fly_cells);
  s.respiration_lo = read_double(t, p, "respiration_lo", s.respiration_lo);
  s.respiration_hi = read_double(t, p, "respiration_hi", s.respiration_hi);
  s.heartbeat_lo = read_double(t, p, "heartbeat_lo", s.heartbeat_lo);
  s.heartbeat_hi = read_double(t, p, "heartbeat_hi", s.heartbeat_hi);
  s.chest_amplitude_lo =
      read_double(t, p, "chest_amplitude_lo", s.chest_amplitude_lo);
  s.chest_amplitude_hi =
      read_double(t, p, "chest_amplitude_hi", s.chest_amplitude_hi);
}

void apply_radar(GenParams& g, const Table& t) {
  check_keys(t, "radar", {"jitter_sigma_hz", "uwb", "fmcw", "attenuation"});
  g.jitter_sigma_hz =
      read_double(t, "radar", "jitter_sigma_hz", g.jitter_sigma_hz);
  if (const Table* u = read_table(t, "radar", "uwb")) {
    const std::string p = "radar.uwb";
    check_keys(*u, p,
               {"carrier_hz", "doppler_threshold_hz", "noise_sigma_hz",
                "range_exponent", "reference_altitude"});
    g.uwb.carrier_hz = read_double(*u, p, "carrier_hz", g.uwb.carrier_hz);
    g.uwb.doppler_threshold_hz = read_double(*u, p, "doppler_threshold_hz",
                                             g.uwb.doppler_threshold_hz);
    g.uwb.noise_sigma_hz =
        read_double(*u, p, "noise_sigma_hz", g.uwb.noise_sigma_hz);
    g.uwb.range_exponent =
        read_double(*u, p, "range_exponent", g.uwb.range_exponent);
    g.uwb.reference_altitude =
        read_double(*u, p, "reference_altitude", g.uwb.reference_altitude);
  }
  if (const Table* f = read_table(t, "radar", "fmcw")) {
    const std::string p = "radar.fmcw";
    check_keys(*f, p,
               {"carrier_hz", "gain", "noise_sigma", "hover_penalty",
                "range_exponent", "reference_altitude"});
    g.fmcw.carrier_hz = read_double(*f, p, "carrier_hz", g.fmcw.carrier_hz);
    g.fmcw.gain = read_double(*f, p, "gain", g.fmcw.gain);
    g.fmcw.noise_sigma = read_double(*f, p, "noise_sigma", g.fmcw.noise_sigma);
    g.fmcw.hover_penalty =
        read_double(*f, p, "hover_penalty", g.fmcw.hover_penalty);
    g.fmcw.range_exponent =
        read_double(*f, p, "range_exponent", g.fmcw.range_exponent);
    g.fmcw.reference_altitude =
        read_double(*f, p, "reference_altitude", g.fmcw.reference_altitude);
  }
  if (const Table* a = read_table(t, "radar", "attenuation")) {
    const std::string p = "radar.attenuation";
    check_keys(*a, p, {"wood", "brick", "concrete", "mmw_scale"});
    g.att.wood = read_double(*a, p, "wood", g.att.wood);
    g.att.brick = read_double(*a, p, "brick", g.att.brick);
    g.att.concrete = read_double(*a, p, "concrete", g.att.concrete);
    g.att.mmw_scale = read_double(*a, p, "mmw_scale", g.att.mmw_scale);
  }
}

void apply_dataset(RunConfig& c, const Table& t) {
  const std::string p = "dataset";
  check_keys(t, p,
             {"altitudes", "per_class_per_altitude", "test_fraction",
              "brick_share", "thickness_lo", "thickness_hi", "respiration_lo",
              "respiration_hi", "heartbeat_lo", "heartbeat_hi",
              "chest_amplitude_lo", "chest_amplitude_hi"});
  c.protocol.altitudes =
      read_doubles(t, p, "altitudes", c.protocol.altitudes);
  c.protocol.per_class_per_altitude = read_int(
      t, p, "per_class_per_altitude", c.protocol.per_class_per_altitude);
  c.protocol.test_fraction =
      read_double(t, p, "test_fraction", c.protocol.test_fraction);
  c.gen.brick_share = read_double(t, p, "brick_share", c.gen.brick_share);
  c.gen.thickness_lo = read_double(t, p, "thickness_lo", c.gen.thickness_lo);
  c.gen.thickness_hi = read_double(t, p, "thickness_hi", c.gen.thickness_hi);
  c.gen.respiration_lo =
      read_double(t, p, "respiration_lo", c.gen.respiration_lo);
  c.gen.respiration_hi =
      read_double(t, p, "respiration_hi", c.gen.respiration_hi);
  c.gen.heartbeat_lo = read_double(t, p, "heartbeat_lo", c.gen.heartbeat_lo);
  c.gen.heartbeat_hi = read_double(t, p, "heartbeat_hi", c.gen.heartbeat_hi);
  c.gen.chest_amplitude_lo =
      read_double(t, p, "chest_amplitude_lo", c.gen.chest_amplitude_lo);
  c.gen.chest_amplitude_hi =
      read_double(t, p, "chest_amplitude_hi", c.gen.chest_amplitude_hi);
}

void apply_train(RunConfig& c, const Table& t) {
  check_keys(t, "train", {"lr", "dt", "rf"});
  if (const Table* lr = read_table(t, "train", "lr")) {
    const std::string p = "train.lr";
    check_keys(*lr, p, {"epochs", "learning_rate"});
    c.lr.epochs = read_int(*lr, p, "epochs", c.lr.epochs);
    c.lr.learning_rate =
        read_double(*lr, p, "learning_rate", c.lr.learning_rate);
  }
  if (const Table* dt = read_table(t, "train", "dt")) {
    const std::string p = "train.dt";
    check_keys(*dt, p, {"max_depth", "min_samples_leaf"});
    c.dt.max_depth = read_int(*dt, p, "max_depth", c.dt.max_depth);
    c.dt.min_samples_leaf =
        read_int(*dt, p, "min_samples_leaf", c.dt.min_samples_leaf);
  }
  if (const Table* rf = read_table(t, "train", "rf")) {
    const std::string p = "train.rf";
    check_keys(*rf, p,
               {"trees", "features_per_split", "bootstrap", "max_depth",
                "min_samples_leaf"});
    c.rf.trees = read_int(*rf, p, "trees", c.rf.trees);
    c.rf.features_per_split =
        read_int(*rf, p, "features_per_split", c.rf.features_per_split);
    c.rf.bootstrap = read_bool(*rf, p, "bootstrap", c.rf.bootstrap);
    c.rf.max_depth = read_int(*rf, p, "max_depth", c.rf.max_depth);
    c.rf.min_samples_leaf =
        read_int(*rf, p, "min_samples_leaf", c.rf.min_samples_leaf);
  }
}

void apply_mission(MissionKnobs& m, const Table& t) {
  const std::string p = "mission";
  check_keys(t, p,
             {"dwell_samples", "move_cost", "sense_cost", "battery",
              "reserve_fraction", "la_speed", "sensing_altitude",
              "visible_detection_prob", "vote_threshold", "base", "la_count",
              "cells_per_la_budget"});
  m.dwell_samples = read_int(t, p, "dwell_samples", m.dwell_samples);
  m.move_cost = read_double(t, p, "move_cost", m.move_cost);
  m.sense_cost = read_double(t, p, "sense_cost", m.sense_cost);
  m.battery = read_double(t, p, "battery", m.battery);
  m.reserve_fraction =
      read_double(t, p, "reserve_fraction", m.reserve_fraction);
  m.la_speed = read_int(t, p, "la_speed", m.la_speed);
  m.sensing_altitude =
      read_double(t, p, "sensing_altitude", m.sensing_altitude);
  m.visible_detection_prob =
      read_double(t, p, "visible_detection_prob", m.visible_detection_prob);
  m.vote_threshold = read_double(t, p, "vote_threshold", m.vote_threshold);
  m.base = read_cell(t, p, "base", m.base);
  m.la_count = read_int(t, p, "la_count", m.la_count);
  m.policy.cells_per_la_budget =
      read_int(t, p, "cells_per_la_budget", m.policy.cells_per_la_budget);
}

void apply_root(RunConfig& c, const Table& root) {
  check_keys(root, "",
             {"seed", "out_dir", "family", "scene", "radar", "dataset",
              "train", "importance", "mission"});
  c.seed = read_u64(root, "", "seed", c.seed);
  c.out_dir = read_string(root, "", "out_dir", c.out_dir.string());
  c.family = family_from_name(
      read_string(root, "", "family", std::string(family_name(c.family))));
  if (const Table* t = read_table(root, "", "scene")) apply_scene(c.scene, *t);
  if (const Table* t = read_table(root, "", "radar")) apply_radar(c.gen, *t);
  if (const Table* t = read_table(root, "", "dataset")) apply_dataset(c, *t);
  if (const Table* t = read_table(root, "", "train")) apply_train(c, *t);
  if (const Table* t = read_table(root, "", "importance")) {
    check_keys(*t, "importance", {"repeats"});
    c.importance_repeats =
        read_int(*t, "importance", "repeats", c.importance_repeats);
  }
  if (const Table* t = read_table(root, "", "mission")) {
    apply_mission(c.mission, *t);
  }
}

void line(std::string& out, std::string_view key, const std::string& value) {
  out += key;
  out += " = ";
  out += value;
  out += '\n';
}

std::string num(double x) { return toml::format_double(x); }
std::string num(int x) { return std::to_string(x); }

}  // namespace

RunConfig parse_config(std::string_view text) {
  Table root;
  try {
    root = toml::parse(text);
  } catch (const toml::ParseError& e) {
    throw IoError(std::string("config: ") + e.what());
  }
  RunConfig config;
  apply_root(config, root);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open config '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void apply_overrides(RunConfig& config, const std::string& dotted_key,
                     const std::string& value) {
  if (dotted_key.empty()) throw IoError("override key must not be empty");

  // Re-parse the value as a TOML scalar so numbers, booleans and arrays
  // come through typed; anything unparseable is taken as a bare string.
  Value parsed;
  try {
    Table t = toml::parse("v = " + value);
    parsed = t.at("v");
  } catch (const toml::ParseError&) {
    parsed = Value(value);
  }

  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted_key.find('.', start);
    if (dot == std::string::npos) {
      parts.push_back(dotted_key.substr(start));
      break;
    }
    parts.push_back(dotted_key.substr(start, dot - start));
    start = dot + 1;
  }
  for (const std::string& part : parts) {
    if (part.empty()) {
      throw IoError("override key '" + dotted_key + "' is malformed");
    }
  }

  Table root;
  Table* cursor = &root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    Value& slot = (*cursor)[parts[i]];
    slot = Value(Table{});
    cursor = &slot.as_table_mut();
  }
  (*cursor)[parts.back()] = parsed;
  apply_root(config, root);
}

std::string canonical_config(const RunConfig& c) {
  std::string out;
  line(out, "family", toml::quote(family_name(c.family)));

  out += "[scene]\n";
  line(out, "width", num(c.scene.width));
  line(out, "height", num(c.scene.height));
  line(out, "cell_size", num(c.scene.cell_size));
  line(out, "clusters", num(c.scene.clusters));
  line(out, "cells_per_cluster", num(c.scene.cells_per_cluster));
  line(out, "victims", num(c.scene.victims));
  line(out, "visible_victims", num(c.scene.visible_victims));
  line(out, "brick_share", num(c.scene.brick_share));
  line(out, "concrete_share", num(c.scene.concrete_share));
  line(out, "thickness_lo", num(c.scene.thickness_lo));
  line(out, "thickness_hi", num(c.scene.thickness_hi));
  line(out, "max_total_thickness", num(c.scene.max_total_thickness));
  line(out, "no_fly_cells", num(c.scene.no_fly_cells));
  line(out, "respiration_lo", num(c.scene.respiration_lo));
  line(out, "respiration_hi", num(c.scene.respiration_hi));
  line(out, "heartbeat_lo", num(c.scene.heartbeat_lo));
  line(out, "heartbeat_hi", num(c.scene.heartbeat_hi));
  line(out, "chest_amplitude_lo", num(c.scene.chest_amplitude_lo));
  line(out, "chest_amplitude_hi", num(c.scene.chest_amplitude_hi));

  out += "[radar]\n";
  line(out, "jitter_sigma_hz", num(c.gen.jitter_sigma_hz));
  out += "[radar.uwb]\n";
  line(out, "carrier_hz", num(c.gen.uwb.carrier_hz));
  line(out, "doppler_threshold_hz", num(c.gen.uwb.doppler_threshold_hz));
  line(out, "noise_sigma_hz", num(c.gen.uwb.noise_sigma_hz));
  line(out, "range_exponent", num(c.gen.uwb.range_exponent));
  line(out, "reference_altitude", num(c.gen.uwb.reference_altitude));
  out += "[radar.fmcw]\n";
  line(out, "carrier_hz", num(c.gen.fmcw.carrier_hz));
  line(out, "gain", num(c.gen.fmcw.gain));
  line(out, "noise_sigma", num(c.gen.fmcw.noise_sigma));
  line(out, "hover_penalty", num(c.gen.fmcw.hover_penalty));
  line(out, "range_exponent", num(c.gen.fmcw.range_exponent));
  line(out, "reference_altitude", num(c.gen.fmcw.reference_altitude));
  out += "[radar.attenuation]\n";
  line(out, "wood", num(c.gen.att.wood));
  line(out, "brick", num(c.gen.att.brick));
  line(out, "concrete", num(c.gen.att.concrete));
  line(out, "mmw_scale", num(c.gen.att.mmw_scale));

  out += "[dataset]\n";
  {
    std::string arr = "[";
    for (std::size_t i = 0; i < c.protocol.altitudes.size(); ++i) {
      if (i) arr += ", ";
      arr += num(c.protocol.altitudes[i]);
    }
    arr += "]";
    line(out, "altitudes", arr);
  }
  line(out, "per_class_per_altitude", num(c.protocol.per_class_per_altitude));
  line(out, "test_fraction", num(c.protocol.test_fraction));
  line(out, "brick_share", num(c.gen.brick_share));
  line(out, "thickness_lo", num(c.gen.thickness_lo));
  line(out, "thickness_hi", num(c.gen.thickness_hi));
  line(out, "respiration_lo", num(c.gen.respiration_lo));
  line(out, "respiration_hi", num(c.gen.respiration_hi));
  line(out, "heartbeat_lo", num(c.gen.heartbeat_lo));
  line(out, "heartbeat_hi", num(c.gen.heartbeat_hi));
  line(out, "chest_amplitude_lo", num(c.gen.chest_amplitude_lo));
  line(out, "chest_amplitude_hi", num(c.gen.chest_amplitude_hi));

  out += "[train.lr]\n";
  line(out, "epochs", num(c.lr.epochs));
  line(out, "learning_rate", num(c.lr.learning_rate));
  out += "[train.dt]\n";
  line(out, "max_depth", num(c.dt.max_depth));
  line(out, "min_samples_leaf", num(c.dt.min_samples_leaf));
  out += "[train.rf]\n";
  line(out, "trees", num(c.rf.trees));
  line(out, "features_per_split", num(c.rf.features_per_split));
  line(out, "bootstrap", c.rf.bootstrap ? "true" : "false");
  line(out, "max_depth", num(c.rf.max_depth));
  line(out, "min_samples_leaf", num(c.rf.min_samples_leaf));

  out += "[importance]\n";
  line(out, "repeats", num(c.importance_repeats));

  out += "[mission]\n";
  line(out, "dwell_samples", num(c.mission.dwell_samples));
  line(out, "move_cost", num(c.mission.move_cost));
  line(out, "sense_cost", num(c.mission.sense_cost));
  line(out, "battery", num(c.mission.battery));
  line(out, "reserve_fraction", num(c.mission.reserve_fraction));
  line(out, "la_speed", num(c.mission.la_speed));
  line(out, "sensing_altitude", num(c.mission.sensing_altitude));
  line(out, "visible_detection_prob", num(c.mission.visible_detection_prob));
  line(out, "vote_threshold", num(c.mission.vote_threshold));
  line(out, "base",
       "[" + num(c.mission.base.x) + ", " + num(c.mission.base.y) + "]");
  line(out, "la_count", num(c.mission.la_count));
  line(out, "cells_per_la_budget", num(c.mission.policy.cells_per_la_budget));
  return out;
}

std::string config_digest(const RunConfig& config) {
  const std::uint64_t h = Rng::fnv1a(canonical_config(config));
  char buf[17] = {};
  for (int i = 0; i < 16; ++i) {
    buf[15 - i] = "0123456789abcdef"[(h >> (4 * i)) & 0xf];
  }
  return std::string(buf, 16);
}

MissionParams make_mission_params(const RunConfig& config) {
  const MissionKnobs& m = config.mission;
  if (m.dwell_samples < 1) {
    throw DomainError("mission.dwell_samples must be at least 1");
  }
  if (m.move_cost < 0.0 || m.sense_cost < 0.0) {
    throw DomainError("mission costs must be non-negative");
  }
  if (m.battery <= 0.0) throw DomainError("mission.battery must be positive");
  if (m.reserve_fraction < 0.0 || m.reserve_fraction >= 1.0) {
    throw DomainError("mission.reserve_fraction must lie in [0, 1)");
  }
  if (m.la_speed < 1) throw DomainError("mission.la_speed must be at least 1");
  if (m.sensing_altitude <= 0.0) {
    throw DomainError("mission.sensing_altitude must be positive");
  }
  if (m.visible_detection_prob < 0.0 || m.visible_detection_prob > 1.0) {
    throw DomainError("mission.visible_detection_prob must lie in [0, 1]");
  }
  if (m.vote_threshold < 0.0 || m.vote_threshold > 1.0) {
    throw DomainError("mission.vote_threshold must lie in [0, 1]");
  }

  MissionParams params;
  params.uwb = config.gen.uwb;
  params.fmcw = config.gen.fmcw;
  params.att = config.gen.att;
  params.jitter_sigma_hz = config.gen.jitter_sigma_hz;
  params.dwell_samples = m.dwell_samples;
  params.move_cost = m.move_cost;
  params.sense_cost = m.sense_cost;
  params.battery = m.battery;
  params.reserve_fraction = m.reserve_fraction;
  params.la_speed = m.la_speed;
  params.sensing_altitude = m.sensing_altitude;
  params.visible_detection_prob = m.visible_detection_prob;
  params.vote_threshold = m.vote_threshold;
  params.base = m.base;
  params.config_digest = config_digest(config);
  return params;
}

}  // namespace pdsr
