#include "pdsr/scene_io.hpp"

#include <fstream>
#include <sstream>

#include "pdsr/errors.hpp"
#include "pdsr/tomlmini.hpp"

namespace pdsr {

namespace {

std::string cell_key(Cell c) {
  return std::to_string(c.x) + "," + std::to_string(c.y);
}

Cell parse_cell_key(const std::string& key) {
  const auto comma = key.find(',');
  if (comma == std::string::npos) {
    throw IoError("material key '" + key + "' is not 'x,y'");
  }
  try {
    return Cell{std::stoi(key.substr(0, comma)),
                std::stoi(key.substr(comma + 1))};
  } catch (const std::exception&) {
    throw IoError("material key '" + key + "' is not 'x,y'");
  }
}

Cell cell_from_value(const toml::Value& v, const char* what) {
  const auto& arr = v.as_array();
  if (arr.size() != 2) {
    throw IoError(std::string(what) + " must be a two-element [x, y] array");
  }
  return Cell{static_cast<int>(arr[0].as_integer()),
              static_cast<int>(arr[1].as_integer())};
}

std::string cell_array(Cell c) {
  return "[" + std::to_string(c.x) + ", " + std::to_string(c.y) + "]";
}

}  // namespace

std::string scenario_toml(const Scenario& s) {
  std::ostringstream out;
  const auto d = toml::format_double;

  out << "[meta]\n";
  out << "format = \"pdsr-scenario\"\n";
  out << "version = 1\n";
  out << "seed = " << s.seed << "\n";
  out << "config = " << toml::quote(s.config_digest.empty() ? "none"
                                                            : s.config_digest)
      << "\n";
  out << "\n[grid]\n";
  out << "width = " << s.width << "\n";
  out << "height = " << s.height << "\n";
  out << "cell_size = " << d(s.cell_size) << "\n";
  out << "no_fly = [";
  bool first = true;
  for (Cell c : s.no_fly) {
    if (!first) out << ", ";
    out << cell_array(c);
    first = false;
  }
  out << "]\n";

  out << "\n[materials]\n";
  for (const auto& [cell, column] : s.columns) {
    out << toml::quote(cell_key(cell)) << " = [";
    for (std::size_t i = 0; i < column.size(); ++i) {
      if (i) out << ", ";
      out << "[" << toml::quote(material_name(column[i].material)) << ", "
          << d(column[i].thickness_m) << "]";
    }
    out << "]\n";
  }

  for (const Victim& v : s.victims) {
    out << "\n[[victims]]\n";
    out << "id = " << v.id << "\n";
    out << "cell = " << cell_array(v.cell) << "\n";
    out << "respiration_rate = " << d(v.respiration_rate) << "\n";
    out << "heartbeat_rate = " << d(v.heartbeat_rate) << "\n";
    out << "chest_amplitude = " << d(v.chest_amplitude) << "\n";
    out << "buried = " << (v.buried ? "true" : "false") << "\n";
  }

  for (const Cluster& cl : find_clusters(s)) {
    out << "\n[[clusters]]\n";
    out << "id = " << cl.id << "\n";
    out << "centroid = " << cell_array(cl.centroid) << "\n";
    out << "cells = [";
    for (std::size_t i = 0; i < cl.cells.size(); ++i) {
      if (i) out << ", ";
      out << cell_array(cl.cells[i]);
    }
    out << "]\n";
  }
  return out.str();
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << scenario_toml(s);
  if (!out) throw IoError("failed writing " + path.string());
}

Scenario parse_scenario(std::string_view text) {
  toml::Table root;
  try {
    root = toml::parse(text);
  } catch (const toml::ParseError& e) {
    throw IoError(std::string("scenario document: ") + e.what());
  }

  Scenario s;
  if (const toml::Value* meta = toml::find(root, "meta")) {
    const toml::Table& m = meta->as_table();
    if (const toml::Value* f = toml::find(m, "format")) {
      if (f->as_string() != "pdsr-scenario") {
        throw IoError("not a scenario document (format '" + f->as_string() +
                      "')");
      }
    }
    if (const toml::Value* v = toml::find(m, "seed")) {
      s.seed = static_cast<std::uint64_t>(v->as_integer());
    }
    if (const toml::Value* v = toml::find(m, "config")) {
      if (v->as_string() != "none") s.config_digest = v->as_string();
    }
  }

  const toml::Value* grid = toml::find(root, "grid");
  if (!grid) throw IoError("scenario document missing [grid]");
  const toml::Table& g = grid->as_table();
  if (const toml::Value* v = toml::find(g, "width")) {
    s.width = static_cast<int>(v->as_integer());
  } else {
    throw IoError("[grid] missing width");
  }
  if (const toml::Value* v = toml::find(g, "height")) {
    s.height = static_cast<int>(v->as_integer());
  } else {
    throw IoError("[grid] missing height");
  }
  if (const toml::Value* v = toml::find(g, "cell_size")) {
    s.cell_size = v->as_float();
  }
  if (const toml::Value* v = toml::find(g, "no_fly")) {
    for (const toml::Value& c : v->as_array()) {
      s.no_fly.insert(cell_from_value(c, "no_fly entry"));
    }
  }

  if (const toml::Value* mats = toml::find(root, "materials")) {
    for (const auto& [key, value] : mats->as_table()) {
      RubbleColumn column;
      for (const toml::Value& layer : value.as_array()) {
        const auto& pair = layer.as_array();
        if (pair.size() != 2) {
          throw IoError("layer for cell '" + key +
                        "' must be [material, thickness]");
        }
        column.push_back(RubbleLayer{material_from_name(pair[0].as_string()),
                                     pair[1].as_float()});
      }
      s.columns[parse_cell_key(key)] = std::move(column);
    }
  }

  if (const toml::Value* victims = toml::find(root, "victims")) {
    for (const toml::Value& entry : victims->as_array()) {
      const toml::Table& t = entry.as_table();
      Victim v;
      if (const toml::Value* x = toml::find(t, "id")) {
        v.id = static_cast<int>(x->as_integer());
      }
      const toml::Value* cell = toml::find(t, "cell");
      if (!cell) throw IoError("victim entry missing cell");
      v.cell = cell_from_value(*cell, "victim cell");
      if (const toml::Value* x = toml::find(t, "respiration_rate")) {
        v.respiration_rate = x->as_float();
      }
      if (const toml::Value* x = toml::find(t, "heartbeat_rate")) {
        v.heartbeat_rate = x->as_float();
      }
      if (const toml::Value* x = toml::find(t, "chest_amplitude")) {
        v.chest_amplitude = x->as_float();
      }
      if (const toml::Value* x = toml::find(t, "buried")) {
        v.buried = x->as_boolean();
      }
      s.victims.push_back(v);
    }
  }

  // [[clusters]] entries are advisory; connectivity is recomputed from
  // the materials map, so stale cluster lists cannot poison a mission.
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace pdsr
