// Acceptance gate: every release-blocking behavior of the simulator is
// checked here, one criterion per run (or all), one PASS/FAIL line each.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "pdsr/config.hpp"
#include "pdsr/dataset.hpp"
#include "pdsr/fusion.hpp"
#include "pdsr/mission.hpp"
#include "pdsr/mission_io.hpp"
#include "pdsr/model_io.hpp"
#include "pdsr/radar.hpp"
#include "pdsr/rng.hpp"
#include "pdsr/scene.hpp"
#include "pdsr/scene_io.hpp"

using namespace pdsr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", x);
  return buf;
}

// ---------------------------------------------------------------- 1 ----

Outcome criterion_1() {
  const Metrics hand = metrics_from_counts(90, 10, 5, 95);
  if (std::abs(hand.accuracy - 0.925) > 1e-12 ||
      std::abs(hand.precision - 0.9) > 1e-12 ||
      std::abs(hand.recall - 90.0 / 95.0) > 1e-12 ||
      std::abs(hand.f1 - 2.0 * (0.9 * 90.0 / 95.0) / (0.9 + 90.0 / 95.0)) >
          1e-12) {
    return {false, "hand confusion matrix disagrees"};
  }

  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const long long tp = rng.uniform_int(0, 1000);
    const long long fp = rng.uniform_int(0, 1000);
    const long long fn = rng.uniform_int(0, 1000);
    const long long tn = rng.uniform_int(0, 1000);
    const Metrics m = metrics_from_counts(tp, fp, fn, tn);
    const double total = static_cast<double>(tp + fp + fn + tn);
    const double acc = total > 0 ? (tp + tn) / total : 0.0;
    const double prec =
        tp + fp > 0 ? tp / static_cast<double>(tp + fp) : 0.0;
    const double rec = tp + fn > 0 ? tp / static_cast<double>(tp + fn) : 0.0;
    const double f1 =
        prec + rec > 0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
    if (std::abs(m.accuracy - acc) > 1e-12 ||
        std::abs(m.precision - prec) > 1e-12 ||
        std::abs(m.recall - rec) > 1e-12 || std::abs(m.f1 - f1) > 1e-12) {
      return {false, "random confusion matrix " + std::to_string(i)};
    }
  }
  return {true, "hand case and 10000 random matrices within 1e-12"};
}

// ---------------------------------------------------------------- 2 ----

// Exhaustive CART oracle sharing the documented conventions: midpoint
// thresholds, x < t goes left, impurity ties keep the lowest feature
// then the lowest threshold.
struct OracleTree {
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1, right = -1;
    double prob = 0.0;
  };
  std::vector<Node> nodes;

  double predict(const FeatureVector& x) const {
    int i = 0;
    while (nodes[i].feature >= 0) {
      i = x.feature(nodes[i].feature) < nodes[i].threshold ? nodes[i].left
                                                           : nodes[i].right;
    }
    return nodes[i].prob;
  }
};

int oracle_grow(OracleTree& tree, const std::vector<FeatureVector>& rows,
                std::vector<int> idx, int depth, const TreeHyper& hyper) {
  const int me = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  long long pos = 0;
  for (int i : idx) pos += rows[i].label;
  const int n = static_cast<int>(idx.size());
  tree.nodes[me].prob = static_cast<double>(pos) / static_cast<double>(n);

  const bool pure = pos == 0 || pos == n;
  if (depth >= hyper.max_depth || pure || n < 2 * hyper.min_samples_leaf) {
    return me;
  }

  // The tie rule (equal score keeps the lowest feature, then the lowest
  // threshold) only bites at exact double equality, so the score must be
  // evaluated with the same arithmetic the library documents.
  auto gini = [](long long p, long long m) {
    const double a = static_cast<double>(p) / static_cast<double>(m);
    const double b = static_cast<double>(m - p) / static_cast<double>(m);
    return 1.0 - a * a - b * b;
  };
  double best = std::numeric_limits<double>::infinity();
  int best_f = -1;
  double best_t = 0.0;
  for (int f = 0; f < kFeatureCount; ++f) {
    std::vector<std::pair<double, int>> col;
    for (int i : idx) col.push_back({rows[i].feature(f), rows[i].label});
    std::sort(col.begin(), col.end());
    long long left_pos = 0;
    for (int i = 1; i < n; ++i) {
      left_pos += col[i - 1].second;
      const double prev = col[i - 1].first;
      const double cur = col[i].first;
      if (prev == cur) continue;
      if (i < hyper.min_samples_leaf || n - i < hyper.min_samples_leaf) {
        continue;
      }
      const double score =
          (static_cast<double>(i) * gini(left_pos, i) +
           static_cast<double>(n - i) * gini(pos - left_pos, n - i)) /
          static_cast<double>(n);
      if (score < best) {
        best = score;
        best_f = f;
        best_t = 0.5 * (prev + cur);
      }
    }
  }
  if (best_f < 0) return me;

  std::vector<int> left, right;
  for (int i : idx) {
    (rows[i].feature(best_f) < best_t ? left : right).push_back(i);
  }
  tree.nodes[me].feature = best_f;
  tree.nodes[me].threshold = best_t;
  tree.nodes[me].left = oracle_grow(tree, rows, left, depth + 1, hyper);
  tree.nodes[me].right = oracle_grow(tree, rows, right, depth + 1, hyper);
  return me;
}

FeatureVector random_row(Rng& rng, bool coarse) {
  FeatureVector x;
  if (coarse) {
    // Small value sets provoke threshold and impurity ties.
    x.doppler_hz = rng.uniform_int(0, 3) * 0.5;
    x.uwb_detect = rng.uniform_int(0, 1);
    x.fmcw = rng.uniform_int(0, 3) * 0.25;
    x.altitude = 1.5 + 0.25 * rng.uniform_int(0, 2);
  } else {
    x.doppler_hz = rng.uniform(-1.0, 3.0);
    x.uwb_detect = rng.uniform_int(0, 1);
    x.fmcw = rng.uniform(0.0, 1.0);
    x.altitude = rng.uniform(1.0, 2.5);
  }
  x.label = rng.uniform_int(0, 1);
  return x;
}

Outcome criterion_2() {
  Rng rng(2);
  const TreeHyper hyper;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = rng.uniform_int(1, 20);
    std::vector<FeatureVector> rows;
    const bool coarse = rng.bernoulli(0.5);
    for (int i = 0; i < n; ++i) rows.push_back(random_row(rng, coarse));

    const DecisionTree tree = train_tree(rows, hyper);
    OracleTree oracle;
    std::vector<int> idx(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) idx[i] = i;
    oracle_grow(oracle, rows, idx, 0, hyper);

    for (const FeatureVector& r : rows) {
      if (tree.predict(r) != oracle.predict(r)) {
        return {false, "tree oracle mismatch on trial " +
                           std::to_string(trial)};
      }
    }
    for (int probe = 0; probe < 50; ++probe) {
      const FeatureVector r = random_row(rng, coarse);
      if (tree.predict(r) != oracle.predict(r)) {
        return {false, "tree oracle probe mismatch on trial " +
                           std::to_string(trial)};
      }
    }
  }

  // Analytic logistic gradients against central finite differences.
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(4, 30);
    Eigen::MatrixXd X(n, 4);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 4; ++j) X(i, j) = rng.uniform(-2.0, 2.0);
      y(i) = rng.uniform_int(0, 1);
    }
    Eigen::Vector4d w;
    for (int j = 0; j < 4; ++j) w(j) = rng.uniform(-1.0, 1.0);
    double b = rng.uniform(-1.0, 1.0);

    const LogisticGradient g = logistic_gradient(w, b, X, y);
    const double h = 1e-5;
    for (int j = 0; j < 4; ++j) {
      Eigen::Vector4d wp = w, wm = w;
      wp(j) += h;
      wm(j) -= h;
      const double fd =
          (logistic_loss(wp, b, X, y) - logistic_loss(wm, b, X, y)) /
          (2.0 * h);
      if (std::abs(fd - g.dw(j)) / std::max(1.0, std::abs(g.dw(j))) > 1e-5) {
        return {false, "gradient mismatch in w" + std::to_string(j)};
      }
    }
    const double fdb =
        (logistic_loss(w, b + h, X, y) - logistic_loss(w, b - h, X, y)) /
        (2.0 * h);
    if (std::abs(fdb - g.db) / std::max(1.0, std::abs(g.db)) > 1e-5) {
      return {false, "gradient mismatch in bias"};
    }
  }
  return {true, "1000 tree oracles and 50 finite-difference gradients agree"};
}

// ---------------------------------------------------------------- 3 ----

struct TrainedTriple {
  Metrics lr, dt, rf;
};

TrainedTriple train_triple(Family family, std::uint64_t seed) {
  const RunConfig config;
  const Dataset data = generate_dataset(family, config.protocol, seed,
                                        config.gen);
  const auto train_rows = select_rows(data.rows, data.split->train);
  const auto test_rows = select_rows(data.rows, data.split->test);
  TrainedTriple t;
  t.lr = evaluate(train_logistic(train_rows, config.lr), test_rows);
  t.dt = evaluate(train_tree(train_rows, config.dt), test_rows);
  t.rf = evaluate(train_forest(train_rows, config.rf, seed), test_rows);
  return t;
}

Outcome criterion_3() {
  // Default seed: accuracy and recall floors, the full accuracy ordering,
  // and RF recall as the maximum of the three (ties count as maximum).
  // Across seeds 1..10 the accuracy ordering must hold at least 9 times;
  // the per-seed recall comparison is a hairline margin (a handful of
  // rows) and is deliberately not toleranced across seeds.
  const RunConfig config;
  const TrainedTriple base = train_triple(Family::StableCombined, config.seed);
  if (base.rf.accuracy < 0.97) {
    return {false, "rf accuracy " + fmt(base.rf.accuracy) + " below 0.97"};
  }
  if (base.rf.recall < 0.98) {
    return {false, "rf recall " + fmt(base.rf.recall) + " below 0.98"};
  }
  if (base.rf.accuracy < base.dt.accuracy ||
      base.dt.accuracy < base.lr.accuracy) {
    return {false, "default-seed accuracy ordering broken: rf " +
                       fmt(base.rf.accuracy) + ", dt " + fmt(base.dt.accuracy) +
                       ", lr " + fmt(base.lr.accuracy)};
  }
  if (base.rf.recall < base.dt.recall || base.rf.recall < base.lr.recall) {
    return {false, "default-seed rf recall " + fmt(base.rf.recall) +
                       " not the maximum (dt " + fmt(base.dt.recall) + ", lr " +
                       fmt(base.lr.recall) + ")"};
  }

  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const TrainedTriple t = train_triple(Family::StableCombined, seed);
    ok += t.rf.accuracy >= t.dt.accuracy && t.dt.accuracy >= t.lr.accuracy;
  }
  if (ok < 9) {
    return {false, "accuracy ordering held for only " + std::to_string(ok) +
                       "/10 seeds"};
  }
  return {true, "rf acc " + fmt(base.rf.accuracy) + " recall " +
                    fmt(base.rf.recall) + " (max), accuracy ordering " +
                    std::to_string(ok) + "/10 seeds"};
}

// ---------------------------------------------------------------- 4 ----

Outcome criterion_4() {
  const RunConfig config;
  std::map<Family, Metrics> rows;
  for (Family family : {Family::StableWood, Family::StableWoodBricks,
                        Family::HoverWoodBricks, Family::Combined}) {
    const Dataset data =
        generate_dataset(family, config.protocol, config.seed, config.gen);
    const RandomForest model = train_forest(
        select_rows(data.rows, data.split->train), config.rf, config.seed);
    rows[family] = evaluate(model, select_rows(data.rows, data.split->test));
  }
  const Metrics& combined = rows[Family::Combined];
  if (combined.accuracy < 0.90 || combined.accuracy > 0.97) {
    return {false,
            "combined accuracy " + fmt(combined.accuracy) + " outside band"};
  }
  const Metrics& stable = rows[Family::StableWoodBricks];
  const Metrics& hover = rows[Family::HoverWoodBricks];
  const double recall_gap = stable.recall - hover.recall;
  const double acc_gap = stable.accuracy - hover.accuracy;
  if (recall_gap <= acc_gap) {
    return {false, "recall gap " + fmt(recall_gap) +
                       " not above accuracy gap " + fmt(acc_gap)};
  }
  return {true, "combined acc " + fmt(combined.accuracy) + ", recall gap " +
                    fmt(recall_gap) + " > accuracy gap " + fmt(acc_gap)};
}

// ---------------------------------------------------------------- 5 ----

Outcome criterion_5() {
  const RunConfig config;
  int stable_ok = 0, hover_ok = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (const bool hover : {false, true}) {
      const Family family =
          hover ? Family::HoverWoodBricks : Family::StableCombined;
      const Dataset data =
          generate_dataset(family, config.protocol, seed, config.gen);
      const RandomForest model = train_forest(
          select_rows(data.rows, data.split->train), config.rf, seed);
      const ImportanceReport report = permutation_importance(
          model, select_rows(data.rows, data.split->test),
          config.importance_repeats, seed);
      if (hover) {
        hover_ok += report.ranking[0] == 0;  // doppler
      } else {
        stable_ok += report.ranking[0] == 2;  // fmcw
      }
    }
  }
  if (stable_ok < 9 || hover_ok < 9) {
    return {false, "fmcw first on stable " + std::to_string(stable_ok) +
                       "/10, doppler first hovering " +
                       std::to_string(hover_ok) + "/10"};
  }
  return {true, "fmcw first on stable " + std::to_string(stable_ok) +
                    "/10, doppler first hovering " + std::to_string(hover_ok) +
                    "/10"};
}

// ---------------------------------------------------------------- 6 ----

Outcome criterion_6() {
  const RunConfig config;
  const Dataset data = generate_dataset(Family::Combined, config.protocol,
                                        config.seed, config.gen);
  const RandomForest forest = train_forest(
      select_rows(data.rows, data.split->train), config.rf, config.seed);
  const Model model = forest;

  const MissionParams params = make_mission_params(config);
  auto rate_under = [&](Material material) {
    Scenario s;
    s.width = 1;
    s.height = 1;
    s.seed = 7;
    s.columns[{0, 0}] = {RubbleLayer{material, 0.15}};
    Victim v;
    v.id = 0;
    v.cell = {0, 0};
    v.respiration_rate = 0.3;
    v.heartbeat_rate = 1.2;
    v.chest_amplitude = 0.0055;
    v.buried = true;
    s.victims.push_back(v);

    LaUav uav;
    uav.position = {0, 0};
    int positive = 0;
    Rng root(606);
    for (int trial = 0; trial < 500; ++trial) {
      Rng rng = root.child("trial", trial);
      positive += sense_at(uav, {0, 0}, s, model, params.dwell_samples, rng,
                           params)
                      .verdict;
    }
    return positive / 500.0;
  };

  const double wood = rate_under(Material::Wood);
  const double brick = rate_under(Material::Brick);
  const double concrete = rate_under(Material::Concrete);
  const bool pass = wood > 0.9 && brick < 0.5 && concrete < 0.5;
  return {pass, "positive rate under 0.15 m: wood " + fmt(wood) + ", brick " +
                    fmt(brick) + ", concrete " + fmt(concrete)};
}

// ---------------------------------------------------------------- 7 ----

Outcome criterion_7() {
  RunConfig config;
  config.mission.la_count = 2;
  const Dataset data = generate_dataset(Family::Combined, config.protocol,
                                        config.seed, config.gen);
  const Model model = train_forest(select_rows(data.rows, data.split->train),
                                   config.rf, config.seed);
  const MissionParams params = make_mission_params(config);

  int victims_total = 0, victims_found = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario scenario = generate_scenario(config.scene, seed);
    const auto clusters = find_clusters(scenario);
    FleetSpec fleet{static_cast<int>(clusters.size()),
                    config.mission.la_count};
    const MissionOutcome a = run_mission(scenario, fleet, model, seed, params);
    const MissionOutcome b = run_mission(scenario, fleet, model, seed, params);
    if (mission_log_jsonl(a.log) != mission_log_jsonl(b.log)) {
      return {false, "log not byte-identical for seed " +
                         std::to_string(seed)};
    }

    // Per-UAV energy bookkeeping must balance exactly against the log.
    std::map<std::string, double> spent;
    std::map<std::string, double> final_battery;
    bool battery_low = false;
    for (const MissionEvent& e : a.log) {
      if (e.actor.rfind("la-", 0) == 0 && e.payload.contains("cost")) {
        spent[e.actor] += e.payload["cost"].get<double>();
      }
      if (e.kind == EventKind::BatteryLow) battery_low = true;
      if (e.kind == EventKind::ReturnedToBase) {
        final_battery[e.actor] = e.payload["battery"].get<double>();
      }
    }
    if (battery_low) {
      return {false, "battery exhausted on seed " + std::to_string(seed)};
    }
    for (const auto& [actor, used] : spent) {
      if (final_battery.count(actor) == 0 ||
          params.battery - used != final_battery[actor]) {
        return {false, "energy imbalance for " + actor + " on seed " +
                           std::to_string(seed)};
      }
      if (final_battery[actor] <
          params.battery * params.reserve_fraction) {
        return {false, actor + " landed below reserve on seed " +
                           std::to_string(seed)};
      }
    }

    victims_total += static_cast<int>(scenario.victims.size());
    victims_found += a.report.victims_detected;
  }
  const double fraction =
      static_cast<double>(victims_found) / victims_total;
  if (fraction < 0.9) {
    return {false, "detected fraction " + fmt(fraction) + " below 0.9"};
  }
  return {true, "detected " + std::to_string(victims_found) + "/" +
                    std::to_string(victims_total) + " buried victims (" +
                    fmt(fraction) + "), energy balanced, logs reproducible"};
}

// ---------------------------------------------------------------- 8 ----

std::optional<int> bfs_oracle(Cell start, Cell goal, int width, int height,
                              const std::set<Cell>& blocked) {
  std::map<Cell, int> dist;
  std::queue<Cell> frontier;
  dist[start] = 0;
  frontier.push(start);
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop();
    if (c == goal) return dist[c];
    for (const auto& [dx, dy] :
         {std::pair{0, -1}, {0, 1}, {-1, 0}, {1, 0}}) {
      const Cell n{c.x + dx, c.y + dy};
      if (n.x < 0 || n.x >= width || n.y < 0 || n.y >= height) continue;
      if (blocked.count(n) || dist.count(n)) continue;
      dist[n] = dist[c] + 1;
      frontier.push(n);
    }
  }
  return std::nullopt;
}

double queue_makespan(const std::vector<std::vector<Task>>& queues,
                      const std::vector<LaUav>& fleet) {
  double worst = 0.0;
  for (std::size_t u = 0; u < queues.size(); ++u) {
    double t = 0.0;
    Cell at = fleet[u].position;
    for (const Task& task : queues[u]) {
      t += std::hypot(static_cast<double>(task.cell.x - at.x),
                      static_cast<double>(task.cell.y - at.y)) /
               fleet[u].speed +
           task.dwell_samples;
      at = task.cell;
    }
    worst = std::max(worst, t);
  }
  return worst;
}

// Exact optimum: enumerate every task-to-UAV assignment; per UAV, the
// best visiting order comes from a bitmask DP over its subset.
double optimal_makespan(const std::vector<Task>& tasks,
                        const std::vector<LaUav>& fleet) {
  const int n = static_cast<int>(tasks.size());
  const int subsets = 1 << n;
  auto travel = [&](Cell a, Cell b, int speed) {
    return std::hypot(static_cast<double>(b.x - a.x),
                      static_cast<double>(b.y - a.y)) /
           speed;
  };

  // best[u][mask]: minimal completion time for UAV u to serve mask.
  std::vector<std::vector<double>> best(fleet.size());
  for (std::size_t u = 0; u < fleet.size(); ++u) {
    // dp[mask][last]: minimal time ending at task `last`.
    std::vector<std::array<double, 8>> dp(
        subsets, [] {
          std::array<double, 8> a;
          a.fill(std::numeric_limits<double>::infinity());
          return a;
        }());
    for (int j = 0; j < n; ++j) {
      dp[1 << j][j] = travel(fleet[u].position, tasks[j].cell,
                             fleet[u].speed) +
                      tasks[j].dwell_samples;
    }
    for (int mask = 1; mask < subsets; ++mask) {
      for (int last = 0; last < n; ++last) {
        const double t = dp[mask][last];
        if (!std::isfinite(t)) continue;
        for (int next = 0; next < n; ++next) {
          if (mask & (1 << next)) continue;
          const double cand = t +
                              travel(tasks[last].cell, tasks[next].cell,
                                     fleet[u].speed) +
                              tasks[next].dwell_samples;
          double& slot = dp[mask | (1 << next)][next];
          slot = std::min(slot, cand);
        }
      }
    }
    best[u].assign(subsets, 0.0);
    for (int mask = 1; mask < subsets; ++mask) {
      double m = std::numeric_limits<double>::infinity();
      for (int last = 0; last < n; ++last) {
        m = std::min(m, dp[mask][last]);
      }
      best[u][mask] = m;
    }
  }

  double optimum = std::numeric_limits<double>::infinity();
  std::vector<int> owner(n, 0);
  while (true) {
    std::array<int, 3> masks{0, 0, 0};
    for (int j = 0; j < n; ++j) masks[owner[j]] |= 1 << j;
    double makespan = 0.0;
    for (std::size_t u = 0; u < fleet.size(); ++u) {
      if (masks[u]) makespan = std::max(makespan, best[u][masks[u]]);
    }
    optimum = std::min(optimum, makespan);

    int j = 0;
    for (; j < n; ++j) {
      if (++owner[j] < static_cast<int>(fleet.size())) break;
      owner[j] = 0;
    }
    if (j == n) break;
  }
  return optimum;
}

Outcome criterion_8() {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    const int width = rng.uniform_int(2, 30);
    const int height = rng.uniform_int(2, 30);
    const double density = rng.uniform(0.0, 0.4);
    std::set<Cell> blocked;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        if (rng.bernoulli(density)) blocked.insert({x, y});
      }
    }
    Cell start{rng.uniform_int(0, width - 1), rng.uniform_int(0, height - 1)};
    Cell goal{rng.uniform_int(0, width - 1), rng.uniform_int(0, height - 1)};
    blocked.erase(start);
    blocked.erase(goal);

    const auto path = plan_path(start, goal, width, height, blocked);
    const auto oracle = bfs_oracle(start, goal, width, height, blocked);
    if (path.has_value() != oracle.has_value()) {
      return {false, "reachability mismatch on grid " + std::to_string(trial)};
    }
    if (path && static_cast<int>(path->size()) - 1 != *oracle) {
      return {false, "path length mismatch on grid " + std::to_string(trial)};
    }
  }

  double worst_ratio = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = rng.uniform_int(1, 8);
    std::vector<Task> tasks;
    for (int j = 0; j < n; ++j) {
      tasks.push_back(Task{{rng.uniform_int(0, 19), rng.uniform_int(0, 19)},
                           Task::Source::Survey, 5});
    }
    std::vector<LaUav> fleet(3);
    for (int u = 0; u < 3; ++u) {
      fleet[u].id = u;
      fleet[u].position = {rng.uniform_int(0, 19), rng.uniform_int(0, 19)};
    }
    const double greedy = queue_makespan(assign_tasks(tasks, fleet), fleet);
    const double optimum = optimal_makespan(tasks, fleet);
    const double ratio = optimum > 0.0 ? greedy / optimum : 1.0;
    worst_ratio = std::max(worst_ratio, ratio);
    if (ratio > 1.5 + 1e-9) {
      return {false, "greedy makespan " + fmt(greedy) + " vs optimum " +
                         fmt(optimum) + " on instance " +
                         std::to_string(trial)};
    }
  }
  return {true, "1000 path oracles equal, worst greedy/optimal ratio " +
                    fmt(worst_ratio)};
}

// ---------------------------------------------------------------- 9 ----

Outcome criterion_9() {
  RunConfig config;
  config.protocol.per_class_per_altitude = 100;
  const std::string digest = config_digest(config);

  Dataset a = generate_dataset(config.family, config.protocol, config.seed,
                               config.gen);
  Dataset b = generate_dataset(config.family, config.protocol, config.seed,
                               config.gen);
  a.config_digest = digest;
  b.config_digest = digest;
  if (dataset_csv(a) != dataset_csv(b)) {
    return {false, "dataset bytes differ between runs"};
  }
  const Dataset back = parse_dataset_csv(dataset_csv(a));
  if (back.rows.size() != a.rows.size() || back.seed != a.seed) {
    return {false, "dataset round trip lost rows or seed"};
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (back.rows[i].doppler_hz != a.rows[i].doppler_hz ||
        back.rows[i].fmcw != a.rows[i].fmcw ||
        back.rows[i].altitude != a.rows[i].altitude ||
        back.rows[i].uwb_detect != a.rows[i].uwb_detect ||
        back.rows[i].label != a.rows[i].label) {
      return {false, "dataset row " + std::to_string(i) +
                         " changed across the round trip"};
    }
  }

  const auto train_rows = select_rows(a.rows, a.split->train);
  const Model rf1 = train_forest(train_rows, config.rf, config.seed);
  const Model rf2 = train_forest(train_rows, config.rf, config.seed);
  const std::string json1 = model_to_json(rf1, config.seed, digest);
  if (json1 != model_to_json(rf2, config.seed, digest)) {
    return {false, "model bytes differ between trainings"};
  }
  const Model reloaded = model_from_json(json1);
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const FeatureVector x = random_row(rng, false);
    if (predict(rf1, x) != predict(reloaded, x)) {
      return {false, "reloaded model prediction drifted on input " +
                         std::to_string(i)};
    }
  }

  const Scenario scenario = generate_scenario(config.scene, config.seed);
  const std::string toml1 = scenario_toml(scenario);
  if (scenario_toml(parse_scenario(toml1)) != toml1) {
    return {false, "scenario document round trip not byte-identical"};
  }

  const MissionParams params = make_mission_params(config);
  const auto clusters = find_clusters(scenario);
  const FleetSpec fleet{static_cast<int>(clusters.size()), 2};
  const MissionOutcome m1 =
      run_mission(scenario, fleet, rf1, config.seed, params);
  const MissionOutcome m2 =
      run_mission(scenario, fleet, rf1, config.seed, params);
  const std::string log1 = mission_log_jsonl(m1.log);
  if (log1 != mission_log_jsonl(m2.log)) {
    return {false, "mission log bytes differ between runs"};
  }
  const MissionLog parsed = parse_mission_log(log1);
  if (mission_log_jsonl(parsed) != log1) {
    return {false, "mission log round trip not byte-identical"};
  }
  return {true, "dataset, model, scenario and mission artifacts reproduce"};
}

using CriterionFn = Outcome (*)();

constexpr struct {
  int number;
  const char* name;
  CriterionFn fn;
} kCriteria[] = {
    {1, "metric identities", criterion_1},
    {2, "tree and gradient oracles", criterion_2},
    {3, "stable-family model comparison", criterion_3},
    {4, "scenario sweep bands", criterion_4},
    {5, "feature importance ranking", criterion_5},
    {6, "material penetration gate", criterion_6},
    {7, "mission end-to-end", criterion_7},
    {8, "planner oracles", criterion_8},
    {9, "determinism and round-trips", criterion_9},
};

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected = std::atoi(argv[++i]);
    }
  }

  bool all_pass = true;
  for (const auto& c : kCriteria) {
    if (selected != 0 && c.number != selected) continue;
    Outcome outcome;
    try {
      outcome = c.fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << c.number << " (" << c.name << "): "
              << (outcome.pass ? "PASS" : "FAIL") << " - " << outcome.detail
              << std::endl;
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
