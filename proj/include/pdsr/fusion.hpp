#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pdsr/dataset.hpp"

namespace pdsr {

struct LogisticModel {
  Eigen::Vector4d weights = Eigen::Vector4d::Zero();
  double bias = 0.0;
  Eigen::Vector4d feature_means = Eigen::Vector4d::Zero();
  Eigen::Vector4d feature_scales = Eigen::Vector4d::Ones();

  double predict(const FeatureVector& x) const;
};

struct LrHyper {
  int epochs = 500;
  double learning_rate = 0.1;
};

struct TreeNode {
  int feature = -1;  // -1: leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double prob = 0.0;  // leaf positive fraction
  int count = 0;      // training rows reaching the node
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // preorder, root at 0

  double predict(const FeatureVector& x) const;
  int depth() const;
  bool uses_feature(int feature) const;
};

struct TreeHyper {
  int max_depth = 8;
  int min_samples_leaf = 5;
};

struct RandomForest {
  std::vector<DecisionTree> trees;
  std::vector<std::uint64_t> per_tree_seeds;
  int features_per_split = 2;

  double predict(const FeatureVector& x) const;  // mean of tree outputs
};

struct ForestHyper {
  int trees = 100;
  int features_per_split = 2;
  bool bootstrap = true;
  int max_depth = 14;
  int min_samples_leaf = 2;
};

using Model = std::variant<LogisticModel, DecisionTree, RandomForest>;

double predict(const Model& model, const FeatureVector& x);
// probability >= 0.5 counts as positive.
int decide(double probability);

// Mean cross-entropy loss and its analytic gradient on standardized
// features; exposed so the gradient can be checked against finite
// differences.
double logistic_loss(const Eigen::Vector4d& w, double b,
                     const Eigen::MatrixXd& X, const Eigen::VectorXd& y);
struct LogisticGradient {
  Eigen::Vector4d dw;
  double db;
};
LogisticGradient logistic_gradient(const Eigen::Vector4d& w, double b,
                                   const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& y);

// Full-batch gradient descent for a fixed epoch count. Throws
// DomainError when only one class is present.
LogisticModel train_logistic(const std::vector<FeatureVector>& rows,
                             const LrHyper& hyper = {});

// CART with Gini impurity. Candidate thresholds are midpoints of
// consecutive distinct sorted values; a split sends x[feature] <
// threshold left; ties on impurity keep the lowest feature index, then
// the lowest threshold. Throws DomainError on empty input.
DecisionTree train_tree(const std::vector<FeatureVector>& rows,
                        const TreeHyper& hyper = {});

// Bootstrap-resampled trees with features_per_split features drawn per
// node. Fully determined by (rows, hyper, seed).
RandomForest train_forest(const std::vector<FeatureVector>& rows,
                          const ForestHyper& hyper, std::uint64_t seed);

struct Metrics {
  long long tp = 0, fp = 0, fn = 0, tn = 0;
  double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
};

// Division-by-zero cases are defined as 0.
Metrics metrics_from_counts(long long tp, long long fp, long long fn,
                            long long tn);
Metrics evaluate(const Model& model, const std::vector<FeatureVector>& test);

// Mean of a window of per-sample outputs; verdict is mean >= threshold.
struct AggregateResult {
  double probability = 0.0;
  bool verdict = false;
};
AggregateResult aggregate_detection(const std::vector<double>& window,
                                    double vote_threshold = 0.5);

struct ImportanceReport {
  std::array<double, kFeatureCount> importance{};  // normalized, sums to 1
  std::array<int, kFeatureCount> ranking{};        // descending importance
};

// Permutation importance: accuracy drop when one feature column is
// shuffled, averaged over repeats, clamped at 0 and normalized. An
// all-zero profile normalizes to uniform.
ImportanceReport permutation_importance(const Model& model,
                                        const std::vector<FeatureVector>& test,
                                        int repeats, std::uint64_t seed);

// Rows selected by a split index list.
std::vector<FeatureVector> select_rows(const std::vector<FeatureVector>& rows,
                                       const std::vector<int>& indices);

}  // namespace pdsr
