#include "pdsr/mission_io.hpp"

#include <fstream>
#include <sstream>

#include "pdsr/errors.hpp"
#include "pdsr/tomlmini.hpp"

namespace pdsr {

std::string mission_log_jsonl(const MissionLog& log) {
  std::string out;
  for (const MissionEvent& e : log) {
    nlohmann::ordered_json line;
    line["tick"] = e.tick;
    line["actor"] = e.actor;
    line["kind"] = event_kind_name(e.kind);
    line["payload"] = e.payload;
    out += line.dump();
    out += '\n';
  }
  return out;
}

MissionLog parse_mission_log(const std::string& text) {
  MissionLog log;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::ordered_json j =
        nlohmann::ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw IoError("mission log line " + std::to_string(line_no) +
                    " is not valid JSON");
    }
    try {
      MissionEvent e;
      e.tick = j.at("tick").get<long long>();
      e.actor = j.at("actor").get<std::string>();
      e.kind = event_kind_from_name(j.at("kind").get<std::string>());
      e.payload = j.at("payload");
      log.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw IoError("mission log line " + std::to_string(line_no) + ": " +
                    ex.what());
    }
  }
  return log;
}

void save_mission_log(const MissionLog& log,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << mission_log_jsonl(log);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

MissionLog load_mission_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_mission_log(buffer.str());
}

std::string report_csv(const MissionReport& report) {
  double energy = 0.0;
  for (const auto& [actor, used] : report.energy_used) energy += used;
  std::string out{kReportCsvHeader};
  out += '\n';
  out += std::to_string(report.victims_total);
  out += ',';
  out += std::to_string(report.victims_detected);
  out += ',';
  out += std::to_string(report.false_sites);
  out += ',';
  out += toml::format_double(report.mean_time_to_detection);
  out += ',';
  out += std::to_string(report.cells_scanned);
  out += ',';
  out += toml::format_double(energy);
  out += '\n';
  return out;
}

std::string report_text(const MissionReport& report) {
  std::ostringstream out;
  out << "victims detected: " << report.victims_detected << " / "
      << report.victims_total << '\n';
  out << "false sites: " << report.false_sites << '\n';
  out << "mean time to detection: "
      << toml::format_double(report.mean_time_to_detection) << " ticks\n";
  out << "cells scanned: " << report.cells_scanned << '\n';
  double energy = 0.0;
  for (const auto& [actor, used] : report.energy_used) {
    out << "energy " << actor << ": " << toml::format_double(used) << '\n';
    energy += used;
  }
  out << "energy total: " << toml::format_double(energy) << '\n';
  return out.str();
}

}  // namespace pdsr
