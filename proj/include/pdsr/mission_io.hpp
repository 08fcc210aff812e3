#pragma once

#include <filesystem>
#include <string>

#include "pdsr/mission.hpp"

namespace pdsr {

// One event per line, stable key order; byte-identical for a fixed
// (scenario, fleet, model, seed).
std::string mission_log_jsonl(const MissionLog& log);
void save_mission_log(const MissionLog& log,
                      const std::filesystem::path& path);
MissionLog load_mission_log(const std::filesystem::path& path);
MissionLog parse_mission_log(const std::string& text);

inline constexpr std::string_view kReportCsvHeader =
    "victims_total,victims_detected,false_sites,mean_time_to_detection,"
    "cells_scanned,energy_total";

std::string report_csv(const MissionReport& report);
std::string report_text(const MissionReport& report);

}  // namespace pdsr
