#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdsr/fusion.hpp"
#include "pdsr/scene.hpp"

namespace pdsr {

struct HaUav {
  int id = 0;
  Cell position;
  int camera_radius = 8;  // cells
  double visible_detection_prob = 0.9;
  int assigned_cluster = -1;
};

struct Task {
  enum class Source { Survey, Operator };
  Cell cell;
  Source source = Source::Survey;
  int dwell_samples = 5;
};

struct LaUav {
  int id = 0;
  Cell position;
  int speed = 2;             // cells per tick
  double battery = 36000.0;  // energy units
  double reserve = 3600.0;
  double sensing_altitude = 1.5;  // m
  std::vector<Task> task_queue;
};

enum class EventKind {
  CommandIssued,
  SurveyFound,
  TaskAssigned,
  Waypoint,
  SenseSample,
  DetectionReported,
  BatteryLow,
  ReturnedToBase,
};

std::string_view event_kind_name(EventKind kind);
EventKind event_kind_from_name(std::string_view name);  // throws IoError

struct MissionEvent {
  long long tick = 0;
  std::string actor;  // "drc", "ha-N", "la-N"
  EventKind kind = EventKind::CommandIssued;
  nlohmann::ordered_json payload;
};

using MissionLog = std::vector<MissionEvent>;

struct MissionReport {
  int victims_total = 0;
  int victims_detected = 0;
  int false_sites = 0;
  double mean_time_to_detection = 0.0;  // ticks; 0 when nothing detected
  int cells_scanned = 0;
  std::map<std::string, double> energy_used;  // per LA-UAV
};

struct FleetSpec {
  int ha_count = 0;
  int la_count = 0;
};

struct FleetPolicy {
  int cells_per_la_budget = 60;
};

struct MissionParams {
  UwbConfig uwb;
  FmcwConfig fmcw;
  Attenuation att;
  double jitter_sigma_hz = 0.35;  // sensing happens while hovering
  int dwell_samples = 5;
  double move_cost = 1.0;   // per moving tick
  double sense_cost = 0.5;  // per sample
  double battery = 36000.0;
  double reserve_fraction = 0.1;
  int la_speed = 2;               // cells per tick
  double sensing_altitude = 1.5;  // m
  double visible_detection_prob = 0.9;
  double vote_threshold = 0.5;
  Cell base{0, 0};
  std::string config_digest;
};

// Phase one: every unburied victim in the HA-UAV's cluster is spotted
// with probability visible_detection_prob; all damaged cells of the
// cluster become phase-two candidates. Throws DomainError when the
// HA-UAV has no assigned cluster.
struct SurveyResult {
  std::vector<Cell> visible_victims;
  std::vector<Cell> candidates;  // cluster cells, boustrophedon order
};
SurveyResult survey(const HaUav& ha, const Scenario& scenario,
                    const std::vector<Cluster>& clusters, Rng& rng);

// Greedy makespan heuristic: repeatedly give the nearest unassigned task
// to the UAV that currently finishes earliest. Travel time is Euclidean
// distance over speed; every task adds its dwell time. Ties prefer the
// lower UAV id, then row-major cell order. A deterministic descent over
// task relocations and swaps then polishes the queues until no single
// move shortens the fleet's finish. Returns per-UAV queues indexed like
// fleet.
std::vector<std::vector<Task>> assign_tasks(const std::vector<Task>& tasks,
                                            const std::vector<LaUav>& fleet);

// Shortest 4-connected path from start to goal avoiding no_fly cells,
// endpoints included; deterministic row-major tie-break. Empty optional
// when the goal is unreachable. Throws DomainError when an endpoint is
// outside the grid or inside a no_fly cell.
std::optional<std::vector<Cell>> plan_path(Cell start, Cell goal, int width,
                                           int height,
                                           const std::set<Cell>& no_fly);

// Phase two at one cell: k hovering radar samples through the model,
// aggregated into a probability and verdict.
AggregateResult sense_at(const LaUav& uav, Cell cell,
                         const Scenario& scenario, const Model& model, int k,
                         Rng& rng, const MissionParams& params);

// Tick-driven mission: DRC command, HA survey, task assignment, LA
// traversal and sensing, return to base. Deterministic per seed.
struct MissionOutcome {
  MissionLog log;
  MissionReport report;
};
MissionOutcome run_mission(const Scenario& scenario, const FleetSpec& fleet,
                           const Model& model, std::uint64_t seed,
                           const MissionParams& params = {});

// Default sizing: one HA-UAV per cluster; LA-UAV count grows with the
// candidate load, minimum 1 when any cluster exists.
FleetSpec size_fleet(const std::vector<Cluster>& clusters,
                     const FleetPolicy& policy = {});

// Report derived purely from a log (counts, timings, energy); the
// victims_total figure comes from the CommandIssued payload.
MissionReport report_from_log(const MissionLog& log);

}  // namespace pdsr
