#include "pdsr/model_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pdsr/errors.hpp"

namespace pdsr {

using json = nlohmann::ordered_json;

namespace {

json tree_to_json(const DecisionTree& tree) {
  json nodes = json::array();
  for (const TreeNode& n : tree.nodes) {
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.prob, n.count});
  }
  return nodes;
}

DecisionTree tree_from_json(const json& nodes) {
  DecisionTree tree;
  for (const json& n : nodes) {
    if (!n.is_array() || n.size() != 6) {
      throw IoError("model document: malformed tree node");
    }
    tree.nodes.push_back(TreeNode{n[0].get<int>(), n[1].get<double>(),
                                  n[2].get<int>(), n[3].get<int>(),
                                  n[4].get<double>(), n[5].get<int>()});
  }
  if (tree.nodes.empty()) {
    throw IoError("model document: tree has no nodes");
  }
  return tree;
}

}  // namespace

std::string_view model_kind(const Model& model) {
  if (std::holds_alternative<LogisticModel>(model)) return "lr";
  if (std::holds_alternative<DecisionTree>(model)) return "dt";
  return "rf";
}

std::string model_to_json(const Model& model, std::uint64_t seed,
                          const std::string& config_digest) {
  json doc;
  doc["format"] = "pdsr-model";
  doc["version"] = 1;
  doc["seed"] = seed;
  doc["config"] = config_digest.empty() ? "none" : config_digest;
  doc["kind"] = model_kind(model);
  json features = json::array();
  for (int j = 0; j < kFeatureCount; ++j) features.push_back(feature_name(j));
  doc["features"] = features;

  if (const auto* lr = std::get_if<LogisticModel>(&model)) {
    json m;
    m["weights"] = {lr->weights[0], lr->weights[1], lr->weights[2],
                    lr->weights[3]};
    m["bias"] = lr->bias;
    m["means"] = {lr->feature_means[0], lr->feature_means[1],
                  lr->feature_means[2], lr->feature_means[3]};
    m["scales"] = {lr->feature_scales[0], lr->feature_scales[1],
                   lr->feature_scales[2], lr->feature_scales[3]};
    doc["model"] = m;
  } else if (const auto* dt = std::get_if<DecisionTree>(&model)) {
    doc["model"] = json{{"nodes", tree_to_json(*dt)}};
  } else {
    const auto& rf = std::get<RandomForest>(model);
    json m;
    m["features_per_split"] = rf.features_per_split;
    m["per_tree_seeds"] = rf.per_tree_seeds;
    json trees = json::array();
    for (const DecisionTree& tree : rf.trees) {
      trees.push_back(tree_to_json(tree));
    }
    m["trees"] = trees;
    doc["model"] = m;
  }
  return doc.dump() + "\n";
}

Model model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("model document: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "pdsr-model") {
      throw IoError("not a model document");
    }
    if (doc.at("version").get<int>() != 1) {
      throw IoError("unsupported model document version");
    }
    if (doc.contains("features") &&
        doc.at("features").size() != kFeatureCount) {
      throw DomainError("model expects " +
                        std::to_string(doc.at("features").size()) +
                        " features, this build uses " +
                        std::to_string(kFeatureCount));
    }
    const std::string kind = doc.at("kind").get<std::string>();
    const json& m = doc.at("model");
    if (kind == "lr") {
      LogisticModel lr;
      for (int j = 0; j < kFeatureCount; ++j) {
        lr.weights[j] = m.at("weights").at(j).get<double>();
        lr.feature_means[j] = m.at("means").at(j).get<double>();
        lr.feature_scales[j] = m.at("scales").at(j).get<double>();
      }
      lr.bias = m.at("bias").get<double>();
      return lr;
    }
    if (kind == "dt") {
      return tree_from_json(m.at("nodes"));
    }
    if (kind == "rf") {
      RandomForest rf;
      rf.features_per_split = m.at("features_per_split").get<int>();
      rf.per_tree_seeds =
          m.at("per_tree_seeds").get<std::vector<std::uint64_t>>();
      for (const json& tree : m.at("trees")) {
        rf.trees.push_back(tree_from_json(tree));
      }
      if (rf.trees.empty()) {
        throw IoError("model document: forest has no trees");
      }
      return rf;
    }
    throw IoError("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw IoError(std::string("model document: ") + e.what());
  }
}

void save_model(const Model& model, const std::filesystem::path& path,
                std::uint64_t seed, const std::string& config_digest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << model_to_json(model, seed, config_digest);
  if (!out) throw IoError("failed writing " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace pdsr
