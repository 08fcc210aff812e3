#include "pdsr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "pdsr/errors.hpp"
#include "pdsr/tomlmini.hpp"

namespace pdsr {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::StableWood: return "stable_wood";
    case Family::StableWoodBricks: return "stable_wood_bricks";
    case Family::HoverWoodBricks: return "hover_wood_bricks";
    case Family::StableCombined: return "stable_combined";
    case Family::Combined: return "combined";
  }
  return "combined";
}

Family family_from_name(std::string_view name) {
  if (name == "stable_wood") return Family::StableWood;
  if (name == "stable_wood_bricks") return Family::StableWoodBricks;
  if (name == "hover_wood_bricks") return Family::HoverWoodBricks;
  if (name == "stable_combined") return Family::StableCombined;
  if (name == "combined") return Family::Combined;
  throw IoError("unknown dataset family '" + std::string(name) + "'");
}

namespace {

std::vector<ScenarioTag> family_tags(Family f) {
  switch (f) {
    case Family::StableWood: return {ScenarioTag::StableWood};
    case Family::StableWoodBricks: return {ScenarioTag::StableWoodBricks};
    case Family::HoverWoodBricks: return {ScenarioTag::HoverWoodBricks};
    case Family::StableCombined:
      return {ScenarioTag::StableWood, ScenarioTag::StableWoodBricks};
    case Family::Combined:
      return {ScenarioTag::StableWood, ScenarioTag::StableWoodBricks,
              ScenarioTag::HoverWoodBricks};
  }
  return {};
}

FeatureVector draw_row(ScenarioTag tag, double altitude, int label,
                       const GenParams& g, Rng& rng) {
  RubbleColumn column;
  {
    Material m = Material::Wood;
    if (tag != ScenarioTag::StableWood &&
        rng.uniform() < g.brick_share) {
      m = Material::Brick;
    }
    column.push_back(
        RubbleLayer{m, rng.uniform(g.thickness_lo, g.thickness_hi)});
  }

  Victim victim;
  if (label == 1) {
    victim.respiration_rate = rng.uniform(g.respiration_lo, g.respiration_hi);
    victim.heartbeat_rate = rng.uniform(g.heartbeat_lo, g.heartbeat_hi);
    victim.chest_amplitude =
        rng.uniform(g.chest_amplitude_lo, g.chest_amplitude_hi);
  }

  const bool hover = tag == ScenarioTag::HoverWoodBricks;
  PlatformState platform{altitude,
                         hover ? Stability::Hovering : Stability::Stable,
                         hover ? g.jitter_sigma_hz : 0.0};

  FeatureVector f;
  f.doppler_hz = micro_doppler(label == 1 ? &victim : nullptr, platform,
                               g.uwb, column, rng, g.att);
  f.uwb_detect = uwb_detect(f.doppler_hz, g.uwb);
  f.fmcw = fmcw_reading(label == 1 ? &victim : nullptr, platform, g.fmcw,
                        column, rng, g.att);
  f.altitude = altitude;
  f.label = label;
  f.tag = tag;
  return f;
}

void check_protocol(const Protocol& p) {
  if (p.altitudes.empty()) throw DomainError("protocol lists no altitudes");
  if (p.per_class_per_altitude < 1) {
    throw DomainError("protocol per-class count must be positive");
  }
  if (p.test_fraction < 0.0 || p.test_fraction > 1.0) {
    throw DomainError("test fraction outside [0, 1]");
  }
}

}  // namespace

Dataset generate_dataset(Family family, const Protocol& protocol,
                         std::uint64_t seed, const GenParams& params) {
  check_protocol(protocol);

  Dataset ds;
  ds.seed = seed;
  Rng root(seed);
  // Each base family draws from its own sub-stream, so combined datasets
  // are exact unions of the standalone ones.
  for (ScenarioTag tag : family_tags(family)) {
    Rng rng = root.child(scenario_tag_name(tag));
    for (double altitude : protocol.altitudes) {
      for (int label : {1, 0}) {
        for (int i = 0; i < protocol.per_class_per_altitude; ++i) {
          ds.rows.push_back(draw_row(tag, altitude, label, params, rng));
        }
      }
    }
  }
  ds.split = stratified_split(ds.rows, protocol.test_fraction, seed);
  return ds;
}

Split stratified_split(const std::vector<FeatureVector>& rows,
                       double test_fraction, std::uint64_t seed) {
  std::map<std::tuple<int, double, int>, std::vector<int>> groups;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    groups[{static_cast<int>(rows[i].tag), rows[i].altitude, rows[i].label}]
        .push_back(static_cast<int>(i));
  }
  Rng rng = Rng(seed).child("split");
  Split split;
  for (auto& [key, idx] : groups) {
    rng.shuffle(idx);
    const auto n_test = static_cast<std::size_t>(std::min<long long>(
        static_cast<long long>(idx.size()),
        std::llround(static_cast<double>(idx.size()) * test_fraction)));
    split.test.insert(split.test.end(), idx.begin(), idx.begin() + n_test);
    split.train.insert(split.train.end(), idx.begin() + n_test, idx.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::string dataset_csv(const Dataset& ds) {
  std::ostringstream out;
  out << "# pdsr-dataset v1 seed=" << ds.seed << " config="
      << (ds.config_digest.empty() ? "none" : ds.config_digest) << "\n";
  out << kDatasetHeader << "\n";
  for (const FeatureVector& f : ds.rows) {
    out << scenario_tag_name(f.tag) << ","
        << toml::format_double(f.altitude) << ","
        << toml::format_double(f.doppler_hz) << "," << f.uwb_detect << ","
        << toml::format_double(f.fmcw) << "," << f.label << "\n";
  }
  return out.str();
}

void save_dataset_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << dataset_csv(ds);
  if (!out) throw IoError("failed writing " + path.string());
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double_field(const std::string& s, int line_no,
                          const char* column) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw IoError("line " + std::to_string(line_no) + ": column '" + column +
                  "' has non-numeric value '" + s + "'");
  }
  return v;
}

int parse_binary_field(const std::string& s, int line_no, const char* column) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  throw IoError("line " + std::to_string(line_no) + ": column '" + column +
                "' must be 0 or 1, got '" + s + "'");
}

}  // namespace

Dataset parse_dataset_csv(std::string_view text) {
  Dataset ds;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  const auto expected = split_fields(std::string(kDatasetHeader));

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      // Provenance comment; recover the embedded seed when present.
      const auto pos = line.find("seed=");
      if (pos != std::string::npos) {
        std::uint64_t seed = 0;
        const char* b = line.data() + pos + 5;
        const char* e = line.data() + line.size();
        auto [p, ec] = std::from_chars(b, e, seed);
        if (ec == std::errc{} && p != b) ds.seed = seed;
      }
      const auto cpos = line.find("config=");
      if (cpos != std::string::npos) {
        std::string digest = line.substr(cpos + 7);
        const auto space = digest.find(' ');
        if (space != std::string::npos) digest.resize(space);
        if (digest != "none") ds.config_digest = digest;
      }
      continue;
    }
    const auto fields = split_fields(line);
    if (!header_seen) {
      if (fields.size() != expected.size()) {
        throw IoError("header has " + std::to_string(fields.size()) +
                      " columns, expected " + std::to_string(expected.size()));
      }
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (fields[i] != expected[i]) {
          throw IoError("header column " + std::to_string(i + 1) +
                        " is '" + fields[i] + "', expected '" + expected[i] +
                        "'");
        }
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != expected.size()) {
      throw IoError("line " + std::to_string(line_no) + ": expected " +
                    std::to_string(expected.size()) + " fields, got " +
                    std::to_string(fields.size()));
    }
    FeatureVector f;
    f.tag = scenario_tag_from_name(fields[0]);
    f.altitude = parse_double_field(fields[1], line_no, "altitude_m");
    f.doppler_hz = parse_double_field(fields[2], line_no, "doppler_hz");
    f.uwb_detect = parse_binary_field(fields[3], line_no, "uwb_detect");
    f.fmcw = parse_double_field(fields[4], line_no, "fmcw_reading");
    f.label = parse_binary_field(fields[5], line_no, "label");
    ds.rows.push_back(f);
  }
  if (!header_seen) throw IoError("dataset has no header line");
  return ds;
}

Dataset load_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset_csv(buf.str());
}

}  // namespace pdsr
