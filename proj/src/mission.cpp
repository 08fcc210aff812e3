#include "pdsr/mission.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

#include "pdsr/errors.hpp"
#include "pdsr/radar.hpp"

namespace pdsr {

namespace {

using ordered_json = nlohmann::ordered_json;

bool model_trained(const Model& model) {
  if (const auto* dt = std::get_if<DecisionTree>(&model)) {
    return !dt->nodes.empty();
  }
  if (const auto* rf = std::get_if<RandomForest>(&model)) {
    return !rf->trees.empty();
  }
  return true;
}

ordered_json cell_json(Cell c) { return ordered_json::array({c.x, c.y}); }

double euclid(Cell a, Cell b) {
  return std::hypot(static_cast<double>(a.x - b.x),
                    static_cast<double>(a.y - b.y));
}

// Serpentine sweep: rows top to bottom, direction alternating per row of
// the cluster.
std::vector<Cell> boustrophedon(const std::vector<Cell>& sorted_cells) {
  std::vector<Cell> out;
  std::size_t i = 0;
  int row_index = 0;
  while (i < sorted_cells.size()) {
    std::size_t j = i;
    while (j < sorted_cells.size() &&
           sorted_cells[j].y == sorted_cells[i].y) {
      ++j;
    }
    if (row_index % 2 == 0) {
      for (std::size_t k = i; k < j; ++k) out.push_back(sorted_cells[k]);
    } else {
      for (std::size_t k = j; k > i; --k) out.push_back(sorted_cells[k - 1]);
    }
    i = j;
    ++row_index;
  }
  return out;
}

double sense_sample(const LaUav& uav, Cell cell, const Scenario& scenario,
                    const Model& model, Rng& rng,
                    const MissionParams& params) {
  PlatformState platform{uav.sensing_altitude, Stability::Hovering,
                         params.jitter_sigma_hz};
  const FeatureVector f = sample_features(scenario, cell, platform,
                                          params.uwb, params.fmcw, rng,
                                          params.att);
  return predict(model, f);
}

}  // namespace

std::string_view event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::CommandIssued: return "command_issued";
    case EventKind::SurveyFound: return "survey_found";
    case EventKind::TaskAssigned: return "task_assigned";
    case EventKind::Waypoint: return "waypoint";
    case EventKind::SenseSample: return "sense_sample";
    case EventKind::DetectionReported: return "detection_reported";
    case EventKind::BatteryLow: return "battery_low";
    case EventKind::ReturnedToBase: return "returned_to_base";
  }
  return "command_issued";
}

EventKind event_kind_from_name(std::string_view name) {
  if (name == "command_issued") return EventKind::CommandIssued;
  if (name == "survey_found") return EventKind::SurveyFound;
  if (name == "task_assigned") return EventKind::TaskAssigned;
  if (name == "waypoint") return EventKind::Waypoint;
  if (name == "sense_sample") return EventKind::SenseSample;
  if (name == "detection_reported") return EventKind::DetectionReported;
  if (name == "battery_low") return EventKind::BatteryLow;
  if (name == "returned_to_base") return EventKind::ReturnedToBase;
  throw IoError("unknown event kind '" + std::string(name) + "'");
}

SurveyResult survey(const HaUav& ha, const Scenario& scenario,
                    const std::vector<Cluster>& clusters, Rng& rng) {
  if (ha.assigned_cluster < 0 ||
      ha.assigned_cluster >= static_cast<int>(clusters.size())) {
    throw DomainError("HA-UAV " + std::to_string(ha.id) +
                      " has no assigned cluster");
  }
  const Cluster& cluster = clusters[ha.assigned_cluster];
  const std::set<Cell> members(cluster.cells.begin(), cluster.cells.end());

  SurveyResult result;
  for (const Victim& v : scenario.victims) {
    if (!v.buried && members.count(v.cell) &&
        rng.bernoulli(ha.visible_detection_prob)) {
      result.visible_victims.push_back(v.cell);
    }
  }
  result.candidates = boustrophedon(cluster.cells);
  return result;
}

namespace {

double queue_completion(const std::vector<Task>& queue, const LaUav& uav) {
  double t = 0.0;
  Cell at = uav.position;
  for (const Task& task : queue) {
    t += euclid(at, task.cell) / static_cast<double>(uav.speed) +
         static_cast<double>(task.dwell_samples);
    at = task.cell;
  }
  return t;
}

// Deterministic first-improvement descent over single-task relocations
// (across queues and within one) and cross-queue swaps. Each applied
// move strictly shrinks (makespan, total completion) lexicographically,
// so the walk terminates.
void polish_queues(std::vector<std::vector<Task>>& queues,
                   const std::vector<LaUav>& fleet) {
  std::vector<double> completion(queues.size());
  for (std::size_t u = 0; u < queues.size(); ++u) {
    completion[u] = queue_completion(queues[u], fleet[u]);
  }
  const auto potential = [&] {
    double makespan = 0.0, total = 0.0;
    for (const double c : completion) {
      makespan = std::max(makespan, c);
      total += c;
    }
    return std::pair{makespan, total};
  };

  bool improved = true;
  while (improved) {
    improved = false;
    const auto before = potential();
    for (std::size_t u = 0; u < queues.size() && !improved; ++u) {
      for (std::size_t i = 0; i < queues[u].size() && !improved; ++i) {
        for (std::size_t v = 0; v < queues.size() && !improved; ++v) {
          // Reinsert task (u, i) at every slot of queue v.
          for (std::size_t j = 0; j + (u == v ? 1 : 0) <= queues[v].size();
               ++j) {
            if (u == v && j == i) continue;
            auto trial_u = queues[u];
            const Task task = trial_u[i];
            trial_u.erase(trial_u.begin() + i);
            auto& trial_v = u == v ? trial_u : queues[v];
            auto inserted = trial_v;
            inserted.insert(inserted.begin() + j, task);

            const double old_u = completion[u];
            const double old_v = completion[v];
            completion[u] = queue_completion(trial_u, fleet[u]);
            if (u != v) completion[v] = queue_completion(inserted, fleet[v]);
            else completion[u] = queue_completion(inserted, fleet[u]);
            if (potential() < before) {
              queues[u] = std::move(trial_u);
              if (u != v) queues[v] = std::move(inserted);
              else queues[u] = std::move(inserted);
              improved = true;
              break;
            }
            completion[u] = old_u;
            completion[v] = old_v;
          }
        }
        if (improved) break;
        // Swap task (u, i) with a task of a later queue.
        for (std::size_t v = u + 1; v < queues.size() && !improved; ++v) {
          for (std::size_t j = 0; j < queues[v].size(); ++j) {
            std::swap(queues[u][i], queues[v][j]);
            const double old_u = completion[u];
            const double old_v = completion[v];
            completion[u] = queue_completion(queues[u], fleet[u]);
            completion[v] = queue_completion(queues[v], fleet[v]);
            if (potential() < before) {
              improved = true;
              break;
            }
            std::swap(queues[u][i], queues[v][j]);
            completion[u] = old_u;
            completion[v] = old_v;
          }
        }
      }
    }
  }
}

}  // namespace

std::vector<std::vector<Task>> assign_tasks(const std::vector<Task>& tasks,
                                            const std::vector<LaUav>& fleet) {
  if (fleet.empty()) throw DomainError("task assignment needs a fleet");

  struct State {
    double completion = 0.0;
    Cell position;
  };
  std::vector<State> states;
  states.reserve(fleet.size());
  for (const LaUav& uav : fleet) states.push_back({0.0, uav.position});

  std::vector<std::vector<Task>> queues(fleet.size());
  std::vector<bool> used(tasks.size(), false);
  for (std::size_t assigned = 0; assigned < tasks.size(); ++assigned) {
    std::size_t u = 0;
    for (std::size_t i = 1; i < states.size(); ++i) {
      if (states[i].completion < states[u].completion) u = i;
    }
    // Nearest unassigned task for that UAV; row-major order breaks
    // distance ties.
    std::size_t pick = tasks.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (used[t]) continue;
      const double d = euclid(states[u].position, tasks[t].cell);
      if (pick == tasks.size() || d < best ||
          (d == best && tasks[t].cell < tasks[pick].cell)) {
        pick = t;
        best = d;
      }
    }
    used[pick] = true;
    queues[u].push_back(tasks[pick]);
    states[u].completion += best / static_cast<double>(fleet[u].speed) +
                            static_cast<double>(tasks[pick].dwell_samples);
    states[u].position = tasks[pick].cell;
  }
  polish_queues(queues, fleet);
  return queues;
}

std::optional<std::vector<Cell>> plan_path(Cell start, Cell goal, int width,
                                           int height,
                                           const std::set<Cell>& no_fly) {
  auto inside = [&](Cell c) {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  };
  if (!inside(start) || !inside(goal)) {
    throw DomainError("path endpoints must lie inside the grid");
  }
  if (no_fly.count(start) || no_fly.count(goal)) {
    throw DomainError("path endpoints must avoid no-fly cells");
  }
  if (start == goal) return std::vector<Cell>{start};

  const auto index = [&](Cell c) { return c.y * width + c.x; };
  std::vector<int> parent(static_cast<std::size_t>(width) * height, -1);
  std::deque<Cell> frontier{start};
  parent[index(start)] = index(start);
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop_front();
    if (c == goal) break;
    constexpr int dx[4] = {0, -1, 1, 0};
    constexpr int dy[4] = {-1, 0, 0, 1};
    for (int d = 0; d < 4; ++d) {
      const Cell n{c.x + dx[d], c.y + dy[d]};
      if (!inside(n) || no_fly.count(n) || parent[index(n)] >= 0) continue;
      parent[index(n)] = index(c);
      frontier.push_back(n);
    }
  }
  if (parent[index(goal)] < 0) return std::nullopt;

  std::vector<Cell> path;
  for (Cell c = goal;; c = Cell{parent[index(c)] % width,
                                parent[index(c)] / width}) {
    path.push_back(c);
    if (c == start) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

AggregateResult sense_at(const LaUav& uav, Cell cell,
                         const Scenario& scenario, const Model& model, int k,
                         Rng& rng, const MissionParams& params) {
  if (!model_trained(model)) {
    throw DomainError("sensing needs a trained model");
  }
  if (k < 1) throw DomainError("dwell needs at least one sample");
  std::vector<double> window;
  window.reserve(static_cast<std::size_t>(k));
  for (int s = 0; s < k; ++s) {
    window.push_back(sense_sample(uav, cell, scenario, model, rng, params));
  }
  return aggregate_detection(window, params.vote_threshold);
}

FleetSpec size_fleet(const std::vector<Cluster>& clusters,
                     const FleetPolicy& policy) {
  FleetSpec fleet;
  fleet.ha_count = static_cast<int>(clusters.size());
  if (clusters.empty()) return fleet;
  int candidates = 0;
  for (const Cluster& c : clusters) {
    candidates += static_cast<int>(c.cells.size());
  }
  fleet.la_count = std::max(
      1, (candidates + policy.cells_per_la_budget - 1) /
             policy.cells_per_la_budget);
  return fleet;
}

namespace {

struct LaState {
  LaUav uav;
  std::vector<Task> queue;
  std::size_t next_task = 0;
  enum class Phase { Deciding, ToTask, Sensing, Homebound, Done } phase =
      Phase::Deciding;
  std::vector<Cell> steps;
  std::size_t step_pos = 0;
  std::vector<double> window;
  Rng rng{0};
};

class MissionRunner {
 public:
  MissionRunner(const Scenario& scenario, const FleetSpec& fleet,
                const Model& model, std::uint64_t seed,
                const MissionParams& params)
      : scenario_(scenario),
        fleet_(fleet),
        model_(model),
        seed_(seed),
        params_(params),
        root_(seed) {}

  MissionOutcome run() {
    if (!model_trained(model_)) {
      throw DomainError("mission needs a trained model");
    }
    if (params_.la_speed < 1) {
      throw DomainError("LA-UAV speed must be at least 1 cell per tick");
    }
    validate(scenario_);
    clusters_ = find_clusters(scenario_);

    issue_command();
    const auto candidates = survey_phase();
    assign_phase(candidates);
    execute();

    MissionOutcome outcome;
    outcome.report = report_from_log(log_);
    outcome.log = std::move(log_);
    return outcome;
  }

 private:
  void emit(long long tick, std::string actor, EventKind kind,
            ordered_json payload) {
    log_.push_back(MissionEvent{tick, std::move(actor), kind,
                                std::move(payload)});
  }

  void issue_command() {
    int buried = 0;
    for (const Victim& v : scenario_.victims) buried += v.buried;
    ordered_json payload;
    payload["seed"] = seed_;
    payload["config"] =
        params_.config_digest.empty() ? "none" : params_.config_digest;
    payload["grid"] = ordered_json::array({scenario_.width, scenario_.height});
    payload["clusters"] = clusters_.size();
    payload["ha_count"] = fleet_.ha_count;
    payload["la_count"] = fleet_.la_count;
    payload["victims_total"] = scenario_.victims.size();
    payload["buried_total"] = buried;
    payload["la_battery"] = params_.battery;
    emit(0, "drc", EventKind::CommandIssued, std::move(payload));
  }

  // One HA-UAV per cluster; extra clusters beyond the fleet go
  // unsurveyed and produce no candidates.
  std::vector<std::vector<Cell>> survey_phase() {
    const int usable =
        std::min(fleet_.ha_count, static_cast<int>(clusters_.size()));
    std::vector<std::vector<Cell>> candidates;
    for (int i = 0; i < usable; ++i) {
      HaUav ha;
      ha.id = i;
      ha.position = clusters_[i].centroid;
      ha.visible_detection_prob = params_.visible_detection_prob;
      ha.assigned_cluster = i;
      Rng rng = root_.child("survey", static_cast<std::uint64_t>(i));
      SurveyResult result = survey(ha, scenario_, clusters_, rng);
      for (Cell cell : result.visible_victims) {
        ordered_json payload;
        payload["cell"] = cell_json(cell);
        payload["cluster"] = i;
        emit(1, "ha-" + std::to_string(i), EventKind::SurveyFound,
             std::move(payload));
      }
      candidates.push_back(std::move(result.candidates));
    }
    return candidates;
  }

  void assign_phase(const std::vector<std::vector<Cell>>& candidates) {
    // Clusters chain nearest-first from the base, each swept serpentine.
    std::vector<Task> tasks;
    std::vector<bool> visited(candidates.size(), false);
    Cell cursor = params_.base;
    for (std::size_t round = 0; round < candidates.size(); ++round) {
      std::size_t pick = candidates.size();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (visited[i]) continue;
        const double d = euclid(cursor, clusters_[i].centroid);
        if (pick == candidates.size() || d < best) {
          pick = i;
          best = d;
        }
      }
      visited[pick] = true;
      cursor = clusters_[pick].centroid;
      for (Cell cell : candidates[pick]) {
        tasks.push_back(
            Task{cell, Task::Source::Survey, params_.dwell_samples});
      }
    }

    for (int i = 0; i < fleet_.la_count; ++i) {
      LaState la;
      la.uav.id = i;
      la.uav.position = params_.base;
      la.uav.speed = params_.la_speed;
      la.uav.battery = params_.battery;
      la.uav.reserve = params_.battery * params_.reserve_fraction;
      la.uav.sensing_altitude = params_.sensing_altitude;
      la.rng = root_.child("la", static_cast<std::uint64_t>(i));
      las_.push_back(std::move(la));
    }
    if (las_.empty()) return;

    std::vector<LaUav> fleet_view;
    for (const LaState& la : las_) fleet_view.push_back(la.uav);
    auto queues = assign_tasks(tasks, fleet_view);
    for (std::size_t u = 0; u < las_.size(); ++u) {
      las_[u].queue = std::move(queues[u]);
      for (std::size_t q = 0; q < las_[u].queue.size(); ++q) {
        ordered_json payload;
        payload["uav"] = "la-" + std::to_string(las_[u].uav.id);
        payload["cell"] = cell_json(las_[u].queue[q].cell);
        payload["queue_position"] = q;
        emit(2, "drc", EventKind::TaskAssigned, std::move(payload));
      }
    }
  }

  void execute() {
    long long tick = 3;
    for (; tick < 10'000'000; ++tick) {
      bool active = false;
      for (LaState& la : las_) {
        if (la.phase != LaState::Phase::Done) {
          active = true;
          step(la, tick);
        }
      }
      if (!active) break;
    }
    if (tick >= 10'000'000) {
      throw DomainError("mission failed to terminate");
    }
  }

  std::string actor(const LaState& la) const {
    return "la-" + std::to_string(la.uav.id);
  }

  long long travel_ticks(std::size_t path_cells) const {
    if (path_cells <= 1) return 0;
    const auto steps = static_cast<long long>(path_cells - 1);
    return (steps + params_.la_speed - 1) / params_.la_speed;
  }

  void begin_path(LaState& la, const std::vector<Cell>& path) {
    la.steps.assign(path.begin() + 1, path.end());
    la.step_pos = 0;
  }

  void move_tick(LaState& la, long long tick) {
    la.uav.battery -= params_.move_cost;
    for (int s = 0; s < la.uav.speed && la.step_pos < la.steps.size(); ++s) {
      la.uav.position = la.steps[la.step_pos++];
      ordered_json payload;
      payload["cell"] = cell_json(la.uav.position);
      payload["cost"] = s == 0 ? params_.move_cost : 0.0;
      emit(tick, actor(la), EventKind::Waypoint, std::move(payload));
    }
  }

  void finish(LaState& la, long long tick) {
    ordered_json payload;
    payload["battery"] = la.uav.battery;
    payload["cost"] = 0.0;
    emit(tick, actor(la), EventKind::ReturnedToBase, std::move(payload));
    la.phase = LaState::Phase::Done;
  }

  void head_home(LaState& la, long long tick) {
    if (la.uav.position == params_.base) {
      finish(la, tick);
      return;
    }
    auto path = plan_path(la.uav.position, params_.base, scenario_.width,
                          scenario_.height, scenario_.no_fly);
    if (!path) {
      // Base cut off; nothing sensible left to do.
      finish(la, tick);
      return;
    }
    begin_path(la, *path);
    la.phase = LaState::Phase::Homebound;
    move_tick(la, tick);
    if (la.step_pos == la.steps.size()) finish(la, tick);
  }

  void take_sample(LaState& la, long long tick) {
    const Cell cell = la.queue[la.next_task].cell;
    const double p =
        sense_sample(la.uav, cell, scenario_, model_, la.rng, params_);
    la.uav.battery -= params_.sense_cost;
    la.window.push_back(p);
    ordered_json payload;
    payload["cell"] = cell_json(cell);
    payload["sample"] = la.window.size() - 1;
    payload["probability"] = p;
    payload["cost"] = params_.sense_cost;
    emit(tick, actor(la), EventKind::SenseSample, std::move(payload));

    if (static_cast<int>(la.window.size()) <
        la.queue[la.next_task].dwell_samples) {
      return;
    }
    const AggregateResult agg =
        aggregate_detection(la.window, params_.vote_threshold);
    if (agg.verdict) {
      ordered_json report;
      report["cell"] = cell_json(cell);
      report["probability"] = agg.probability;
      report["gps"] = ordered_json::array(
          {(cell.x + 0.5) * scenario_.cell_size,
           (cell.y + 0.5) * scenario_.cell_size});
      report["victim"] = scenario_.victim_at(cell) != nullptr;
      report["cost"] = 0.0;
      emit(tick, actor(la), EventKind::DetectionReported, std::move(report));
    }
    la.window.clear();
    ++la.next_task;
    la.phase = LaState::Phase::Deciding;
  }

  void start_next_task(LaState& la, long long tick) {
    const Task& task = la.queue[la.next_task];
    auto path = plan_path(la.uav.position, task.cell, scenario_.width,
                          scenario_.height, scenario_.no_fly);
    if (!path) {
      ordered_json payload;
      payload["cell"] = cell_json(task.cell);
      payload["cost"] = 0.0;
      payload["status"] = "unreachable";
      emit(tick, actor(la), EventKind::Waypoint, std::move(payload));
      ++la.next_task;
      return;
    }
    auto home = plan_path(task.cell, params_.base, scenario_.width,
                          scenario_.height, scenario_.no_fly);
    const double needed =
        params_.move_cost * static_cast<double>(travel_ticks(path->size())) +
        params_.sense_cost * task.dwell_samples +
        params_.move_cost *
            static_cast<double>(home ? travel_ticks(home->size()) : 0);
    if (la.uav.battery - needed < la.uav.reserve) {
      ordered_json payload;
      payload["battery"] = la.uav.battery;
      payload["needed"] = needed;
      payload["cost"] = 0.0;
      emit(tick, actor(la), EventKind::BatteryLow, std::move(payload));
      la.next_task = la.queue.size();
      head_home(la, tick);
      return;
    }
    if (path->size() == 1) {
      la.phase = LaState::Phase::Sensing;
      la.window.clear();
      take_sample(la, tick);
      return;
    }
    begin_path(la, *path);
    la.phase = LaState::Phase::ToTask;
    move_tick(la, tick);
    if (la.step_pos == la.steps.size()) {
      la.phase = LaState::Phase::Sensing;
      la.window.clear();
    }
  }

  void step(LaState& la, long long tick) {
    switch (la.phase) {
      case LaState::Phase::Deciding:
        if (la.next_task >= la.queue.size()) {
          head_home(la, tick);
        } else {
          start_next_task(la, tick);
        }
        return;
      case LaState::Phase::ToTask:
        move_tick(la, tick);
        if (la.step_pos == la.steps.size()) {
          la.phase = LaState::Phase::Sensing;
          la.window.clear();
        }
        return;
      case LaState::Phase::Sensing:
        take_sample(la, tick);
        return;
      case LaState::Phase::Homebound:
        move_tick(la, tick);
        if (la.step_pos == la.steps.size()) finish(la, tick);
        return;
      case LaState::Phase::Done:
        return;
    }
  }

  const Scenario& scenario_;
  FleetSpec fleet_;
  const Model& model_;
  std::uint64_t seed_;
  MissionParams params_;
  Rng root_;
  std::vector<Cluster> clusters_;
  std::vector<LaState> las_;
  MissionLog log_;
};

}  // namespace

MissionOutcome run_mission(const Scenario& scenario, const FleetSpec& fleet,
                           const Model& model, std::uint64_t seed,
                           const MissionParams& params) {
  return MissionRunner(scenario, fleet, model, seed, params).run();
}

MissionReport report_from_log(const MissionLog& log) {
  MissionReport report;
  std::map<Cell, long long> confirmed;  // victim cell -> first tick
  std::set<Cell> false_cells;
  std::set<Cell> scanned;

  for (const MissionEvent& e : log) {
    switch (e.kind) {
      case EventKind::CommandIssued:
        if (e.payload.contains("victims_total")) {
          report.victims_total = e.payload["victims_total"].get<int>();
        }
        break;
      case EventKind::SurveyFound: {
        const Cell c{e.payload["cell"][0].get<int>(),
                     e.payload["cell"][1].get<int>()};
        confirmed.try_emplace(c, e.tick);
        break;
      }
      case EventKind::SenseSample: {
        scanned.insert(Cell{e.payload["cell"][0].get<int>(),
                            e.payload["cell"][1].get<int>()});
        break;
      }
      case EventKind::DetectionReported: {
        const Cell c{e.payload["cell"][0].get<int>(),
                     e.payload["cell"][1].get<int>()};
        if (e.payload.value("victim", false)) {
          confirmed.try_emplace(c, e.tick);
        } else {
          false_cells.insert(c);
        }
        break;
      }
      default:
        break;
    }
    if (e.payload.contains("cost") && e.actor.rfind("la-", 0) == 0) {
      report.energy_used[e.actor] += e.payload["cost"].get<double>();
    }
  }

  report.victims_detected = static_cast<int>(confirmed.size());
  report.false_sites = static_cast<int>(false_cells.size());
  report.cells_scanned = static_cast<int>(scanned.size());
  if (!confirmed.empty()) {
    double sum = 0.0;
    for (const auto& [cell, tick] : confirmed) {
      sum += static_cast<double>(tick);
    }
    report.mean_time_to_detection = sum / static_cast<double>(confirmed.size());
  }
  return report;
}

}  // namespace pdsr
