#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "pdsr/errors.hpp"
#include "pdsr/fusion.hpp"

namespace pdsr {

namespace {

double gini_impurity(long long pos, long long n) {
  const double p = static_cast<double>(pos) / static_cast<double>(n);
  const double q = static_cast<double>(n - pos) / static_cast<double>(n);
  return 1.0 - p * p - q * q;
}

// Recursive CART grower over an index workspace that is partitioned in
// place. When mtry_rng is set, a fresh feature subset is drawn per node.
class Grower {
 public:
  Grower(const std::vector<FeatureVector>& rows, const TreeHyper& hyper,
         Rng* mtry_rng, int features_per_split)
      : rows_(rows),
        hyper_(hyper),
        mtry_rng_(mtry_rng),
        features_per_split_(std::min(features_per_split, kFeatureCount)) {}

  DecisionTree train(std::vector<int> idx) {
    if (idx.empty()) throw DomainError("cannot train a tree on no rows");
    DecisionTree tree;
    grow(tree, idx, 0, static_cast<int>(idx.size()), 0);
    return tree;
  }

 private:
  std::vector<int> candidate_features() {
    std::array<int, kFeatureCount> feats{0, 1, 2, 3};
    if (!mtry_rng_ || features_per_split_ >= kFeatureCount) {
      return {feats.begin(), feats.end()};
    }
    for (int i = 0; i < features_per_split_; ++i) {
      const int j =
          i + static_cast<int>(mtry_rng_->below(
                  static_cast<std::uint64_t>(kFeatureCount - i)));
      std::swap(feats[i], feats[j]);
    }
    std::vector<int> out(feats.begin(), feats.begin() + features_per_split_);
    std::sort(out.begin(), out.end());
    return out;
  }

  int grow(DecisionTree& tree, std::vector<int>& idx, int begin, int end,
           int depth) {
    const int n = end - begin;
    long long pos = 0;
    for (int i = begin; i < end; ++i) pos += rows_[idx[i]].label;

    const int node = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{});
    tree.nodes[node].count = n;
    tree.nodes[node].prob =
        static_cast<double>(pos) / static_cast<double>(n);

    const bool pure = pos == 0 || pos == n;
    if (depth >= hyper_.max_depth || pure ||
        n < 2 * hyper_.min_samples_leaf) {
      return node;
    }

    // Best split over candidate features; strict improvement keeps the
    // first (lowest feature, lowest threshold) on ties.
    double best_score = std::numeric_limits<double>::infinity();
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<int> sorted(idx.begin() + begin, idx.begin() + end);
    for (int f : candidate_features()) {
      std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
        const double va = rows_[a].feature(f), vb = rows_[b].feature(f);
        return va != vb ? va < vb : a < b;
      });
      long long pos_left = 0;
      for (int i = 1; i < n; ++i) {
        pos_left += rows_[sorted[i - 1]].label;
        const double prev = rows_[sorted[i - 1]].feature(f);
        const double cur = rows_[sorted[i]].feature(f);
        if (prev == cur) continue;
        if (i < hyper_.min_samples_leaf || n - i < hyper_.min_samples_leaf) {
          continue;
        }
        const double score = (static_cast<double>(i) * gini_impurity(pos_left, i) +
                              static_cast<double>(n - i) *
                                  gini_impurity(pos - pos_left, n - i)) /
                             static_cast<double>(n);
        if (score < best_score) {
          best_score = score;
          best_feature = f;
          best_threshold = 0.5 * (prev + cur);
        }
      }
    }
    if (best_feature < 0) return node;

    const auto mid = std::stable_partition(
        idx.begin() + begin, idx.begin() + end, [&](int i) {
          return rows_[i].feature(best_feature) < best_threshold;
        });
    const int split = static_cast<int>(mid - idx.begin());

    tree.nodes[node].feature = best_feature;
    tree.nodes[node].threshold = best_threshold;
    const int left = grow(tree, idx, begin, split, depth + 1);
    const int right = grow(tree, idx, split, end, depth + 1);
    tree.nodes[node].left = left;
    tree.nodes[node].right = right;
    return node;
  }

  const std::vector<FeatureVector>& rows_;
  TreeHyper hyper_;
  Rng* mtry_rng_;
  int features_per_split_;
};

}  // namespace

double DecisionTree::predict(const FeatureVector& x) const {
  int node = 0;
  while (nodes[node].feature >= 0) {
    node = x.feature(nodes[node].feature) < nodes[node].threshold
               ? nodes[node].left
               : nodes[node].right;
  }
  return nodes[node].prob;
}

int DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  int deepest = 0;
  while (!stack.empty()) {
    auto [node, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (nodes[node].feature >= 0) {
      stack.push_back({nodes[node].left, d + 1});
      stack.push_back({nodes[node].right, d + 1});
    }
  }
  return deepest;
}

bool DecisionTree::uses_feature(int feature) const {
  for (const TreeNode& n : nodes) {
    if (n.feature == feature) return true;
  }
  return false;
}

DecisionTree train_tree(const std::vector<FeatureVector>& rows,
                        const TreeHyper& hyper) {
  if (rows.empty()) throw DomainError("cannot train a tree on no rows");
  std::vector<int> idx(rows.size());
  std::iota(idx.begin(), idx.end(), 0);
  return Grower(rows, hyper, nullptr, kFeatureCount).train(std::move(idx));
}

double RandomForest::predict(const FeatureVector& x) const {
  double sum = 0.0;
  for (const DecisionTree& tree : trees) sum += tree.predict(x);
  return sum / static_cast<double>(trees.size());
}

RandomForest train_forest(const std::vector<FeatureVector>& rows,
                          const ForestHyper& hyper, std::uint64_t seed) {
  if (rows.empty()) throw DomainError("cannot train a forest on no rows");
  if (hyper.trees < 1) throw DomainError("forest needs at least one tree");

  RandomForest forest;
  forest.features_per_split = hyper.features_per_split;
  Rng root(seed);
  for (int t = 0; t < hyper.trees; ++t) {
    forest.per_tree_seeds.push_back(
        root.child("tree", static_cast<std::uint64_t>(t)).seed());
  }
  const TreeHyper tree_hyper{hyper.max_depth, hyper.min_samples_leaf};
  for (int t = 0; t < hyper.trees; ++t) {
    Rng rng(forest.per_tree_seeds[t]);
    std::vector<int> idx(rows.size());
    if (hyper.bootstrap) {
      for (auto& i : idx) {
        i = static_cast<int>(rng.below(rows.size()));
      }
    } else {
      std::iota(idx.begin(), idx.end(), 0);
    }
    forest.trees.push_back(
        Grower(rows, tree_hyper, &rng, hyper.features_per_split)
            .train(std::move(idx)));
  }
  return forest;
}

}  // namespace pdsr
