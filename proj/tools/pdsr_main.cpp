#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "pdsr/config.hpp"
#include "pdsr/dataset.hpp"
#include "pdsr/errors.hpp"
#include "pdsr/fusion.hpp"
#include "pdsr/mission.hpp"
#include "pdsr/mission_io.hpp"
#include "pdsr/model_io.hpp"
#include "pdsr/scene_io.hpp"
#include "pdsr/tomlmini.hpp"

namespace fs = std::filesystem;
using namespace pdsr;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

RunConfig resolve_config(const GlobalArgs& g) {
  RunConfig config = g.config_path.empty() ? RunConfig{}
                                           : load_config(g.config_path);
  for (const std::string& kv : g.overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw IoError("--set expects key=value, got '" + kv + "'");
    }
    apply_overrides(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed) config.seed = *g.seed;
  if (g.out_dir) config.out_dir = *g.out_dir;
  return config;
}

void ensure_parent(const fs::path& path) {
  const fs::path parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) {
    throw IoError("cannot create directory '" + parent.string() + "'");
  }
}

void write_text(const fs::path& path, const std::string& text) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void print_metrics(const Metrics& m) {
  std::cout << "accuracy " << toml::format_double(m.accuracy) << '\n'
            << "precision " << toml::format_double(m.precision) << '\n'
            << "recall " << toml::format_double(m.recall) << '\n'
            << "f1 " << toml::format_double(m.f1) << '\n';
}

Split split_of(const Dataset& dataset, const RunConfig& config) {
  if (dataset.split) return *dataset.split;
  return stratified_split(dataset.rows, config.protocol.test_fraction,
                          dataset.seed);
}

struct GenerateArgs {
  std::string family;
  int per_class = 0;
  std::vector<double> altitudes;
  std::string output;
};

int cmd_generate(RunConfig config, const GenerateArgs& args) {
  if (!args.family.empty()) config.family = family_from_name(args.family);
  if (args.per_class > 0) {
    config.protocol.per_class_per_altitude = args.per_class;
  }
  if (!args.altitudes.empty()) config.protocol.altitudes = args.altitudes;

  Dataset dataset =
      generate_dataset(config.family, config.protocol, config.seed,
                       config.gen);
  dataset.config_digest = config_digest(config);

  const fs::path path =
      args.output.empty()
          ? config.out_dir / (std::string(family_name(config.family)) + ".csv")
          : fs::path(args.output);
  ensure_parent(path);
  save_dataset_csv(dataset, path);

  std::map<std::tuple<int, double, int>, int> counts;
  for (const FeatureVector& row : dataset.rows) {
    ++counts[{static_cast<int>(row.tag), row.altitude, row.label}];
  }
  for (const auto& [key, n] : counts) {
    const auto& [tag, altitude, label] = key;
    std::cout << scenario_tag_name(static_cast<ScenarioTag>(tag))
              << " altitude " << toml::format_double(altitude) << " label "
              << label << ": " << n << '\n';
  }
  std::cout << "rows " << dataset.rows.size();
  if (dataset.split) {
    std::cout << " (train " << dataset.split->train.size() << ", test "
              << dataset.split->test.size() << ")";
  }
  std::cout << '\n' << "wrote " << path.string() << '\n';
  return 0;
}

struct TrainArgs {
  std::string model;
  std::string data;
  std::string output;
};

int cmd_train(const RunConfig& config, const TrainArgs& args) {
  const fs::path data_path =
      args.data.empty()
          ? config.out_dir / (std::string(family_name(config.family)) + ".csv")
          : fs::path(args.data);
  const Dataset dataset = load_dataset_csv(data_path);
  const Split split = split_of(dataset, config);
  const auto train_rows = select_rows(dataset.rows, split.train);
  const auto test_rows = select_rows(dataset.rows, split.test);

  bool has_pos = false, has_neg = false;
  for (const FeatureVector& row : train_rows) {
    (row.label ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw DomainError("training split holds a single class");
  }

  Model model;
  if (args.model == "lr") {
    model = train_logistic(train_rows, config.lr);
  } else if (args.model == "dt") {
    model = train_tree(train_rows, config.dt);
  } else {
    model = train_forest(train_rows, config.rf, config.seed);
  }

  std::cout << "model " << args.model << " train " << train_rows.size()
            << " test " << test_rows.size() << '\n';
  print_metrics(evaluate(model, test_rows));

  const fs::path out_path =
      args.output.empty()
          ? config.out_dir / ("model_" + args.model + ".json")
          : fs::path(args.output);
  ensure_parent(out_path);
  save_model(model, out_path, config.seed, config_digest(config));
  std::cout << "wrote " << out_path.string() << '\n';
  return 0;
}

struct EvalArgs {
  std::string model;
  std::string data;
  std::string importance_csv;
};

int cmd_eval(const RunConfig& config, const EvalArgs& args) {
  const Model model = load_model(args.model);
  const Dataset dataset = load_dataset_csv(args.data);
  const Split split = split_of(dataset, config);
  const auto test_rows = select_rows(dataset.rows, split.test);
  if (test_rows.empty()) throw DomainError("dataset has an empty test split");

  print_metrics(evaluate(model, test_rows));

  const ImportanceReport report = permutation_importance(
      model, test_rows, config.importance_repeats, config.seed);
  std::cout << "importance:\n";
  for (int r = 0; r < kFeatureCount; ++r) {
    const int j = report.ranking[r];
    std::cout << "  rank " << r + 1 << " " << feature_name(j) << " "
              << toml::format_double(report.importance[j]) << '\n';
  }

  std::string csv = "feature,importance,rank\n";
  for (int j = 0; j < kFeatureCount; ++j) {
    int rank = 0;
    for (int r = 0; r < kFeatureCount; ++r) {
      if (report.ranking[r] == j) rank = r + 1;
    }
    csv += std::string(feature_name(j)) + "," +
           toml::format_double(report.importance[j]) + "," +
           std::to_string(rank) + "\n";
  }
  const fs::path csv_path = args.importance_csv.empty()
                                ? config.out_dir / "importance.csv"
                                : fs::path(args.importance_csv);
  write_text(csv_path, csv);
  std::cout << "wrote " << csv_path.string() << '\n';
  return 0;
}

struct SimulateArgs {
  std::string scenario = "demo";
  std::string model;
  std::string log;
  std::string report;
};

int cmd_simulate(const RunConfig& config, const SimulateArgs& args) {
  if (args.model.empty()) {
    throw DomainError("simulate needs a trained model (--model)");
  }
  const Model model = load_model(args.model);

  Scenario scenario;
  if (args.scenario == "demo") {
    scenario = generate_scenario(config.scene, config.seed);
    scenario.config_digest = config_digest(config);
  } else if (args.scenario == "empty") {
    ScenarioSpec spec = config.scene;
    spec.clusters = 0;
    spec.victims = 0;
    spec.visible_victims = 0;
    spec.no_fly_cells = 0;
    scenario = generate_scenario(spec, config.seed);
    scenario.config_digest = config_digest(config);
  } else {
    scenario = load_scenario(args.scenario);
  }

  const auto clusters = find_clusters(scenario);
  FleetSpec fleet = size_fleet(clusters, config.mission.policy);
  if (config.mission.la_count > 0) fleet.la_count = config.mission.la_count;

  const MissionOutcome outcome = run_mission(
      scenario, fleet, model, config.seed, make_mission_params(config));

  const fs::path log_path = args.log.empty() ? config.out_dir / "mission.jsonl"
                                             : fs::path(args.log);
  ensure_parent(log_path);
  save_mission_log(outcome.log, log_path);
  const fs::path report_path = args.report.empty()
                                   ? config.out_dir / "report.csv"
                                   : fs::path(args.report);
  write_text(report_path, report_csv(outcome.report));

  std::cout << report_text(outcome.report);
  std::cout << "wrote " << log_path.string() << '\n';
  std::cout << "wrote " << report_path.string() << '\n';
  return 0;
}

struct SweepArgs {
  std::string output;
};

int cmd_sweep(const RunConfig& config, const SweepArgs& args) {
  constexpr Family kFamilies[] = {Family::StableWood, Family::StableWoodBricks,
                                  Family::HoverWoodBricks, Family::Combined};
  std::string csv = "scenario,accuracy,recall\n";
  for (Family family : kFamilies) {
    const Dataset dataset =
        generate_dataset(family, config.protocol, config.seed, config.gen);
    const Split split = split_of(dataset, config);
    const RandomForest model = train_forest(
        select_rows(dataset.rows, split.train), config.rf, config.seed);
    const Metrics m = evaluate(model, select_rows(dataset.rows, split.test));
    const std::string row = std::string(family_name(family)) + "," +
                            toml::format_double(m.accuracy) + "," +
                            toml::format_double(m.recall);
    std::cout << row << '\n';
    csv += row + "\n";
  }
  const fs::path path = args.output.empty() ? config.out_dir / "sweep.csv"
                                            : fs::path(args.output);
  write_text(path, csv);
  std::cout << "wrote " << path.string() << '\n';
  return 0;
}

struct ReportArgs {
  std::string log;
  std::string csv;
};

int cmd_report(const ReportArgs& args) {
  const MissionLog log = load_mission_log(args.log);
  const MissionReport report = report_from_log(log);
  std::cout << report_text(report);
  if (!args.csv.empty()) {
    write_text(args.csv, report_csv(report));
    std::cout << "wrote " << args.csv << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"post-disaster search-and-rescue sensing simulator"};
  app.require_subcommand(1);

  GlobalArgs global;
  std::uint64_t seed_flag = 0;
  std::string out_flag;
  app.add_option("--config", global.config_path, "run configuration (TOML)");
  app.add_option("--set", global.overrides,
                 "override a config key, e.g. radar.fmcw.gain=40");
  auto* seed_opt = app.add_option("--seed", seed_flag, "root seed");
  auto* out_opt = app.add_option("--out", out_flag, "output directory");

  GenerateArgs gen_args;
  CLI::App* gen = app.add_subcommand("generate", "write a labeled dataset");
  gen->add_option("--family", gen_args.family,
                  "stable_wood, stable_wood_bricks, hover_wood_bricks, "
                  "stable_combined or combined");
  gen->add_option("--per-class", gen_args.per_class,
                  "rows per class per altitude");
  gen->add_option("--altitudes", gen_args.altitudes, "altitudes in meters");
  gen->add_option("--output", gen_args.output, "dataset CSV path");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "fit a detector");
  train->add_option("--model", train_args.model, "lr, dt or rf")
      ->required()
      ->check(CLI::IsMember({"lr", "dt", "rf"}));
  train->add_option("--data", train_args.data, "dataset CSV path");
  train->add_option("--output", train_args.output, "model document path");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "metrics and importance");
  eval->add_option("--model", eval_args.model, "model document path")
      ->required();
  eval->add_option("--data", eval_args.data, "dataset CSV path")->required();
  eval->add_option("--importance-csv", eval_args.importance_csv,
                   "importance CSV path");

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "run a mission");
  simulate->add_option("--scenario", sim_args.scenario,
                       "demo, empty or a scenario TOML path");
  simulate->add_option("--model", sim_args.model, "model document path");
  simulate->add_option("--log", sim_args.log, "mission log JSONL path");
  simulate->add_option("--report", sim_args.report, "report CSV path");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep",
                                       "accuracy/recall across scenarios");
  sweep->add_option("--output", sweep_args.output, "sweep CSV path");

  ReportArgs report_args;
  CLI::App* report = app.add_subcommand("report", "summarize a mission log");
  report->add_option("--log", report_args.log, "mission log JSONL path")
      ->required();
  report->add_option("--csv", report_args.csv, "also write the CSV row");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*seed_opt) global.seed = seed_flag;
    if (*out_opt) global.out_dir = out_flag;
    const RunConfig config = resolve_config(global);
    if (*gen) return cmd_generate(config, gen_args);
    if (*train) return cmd_train(config, train_args);
    if (*eval) return cmd_eval(config, eval_args);
    if (*simulate) return cmd_simulate(config, sim_args);
    if (*sweep) return cmd_sweep(config, sweep_args);
    if (*report) return cmd_report(report_args);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
