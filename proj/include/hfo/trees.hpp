#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hfo/training_set.hpp"

namespace hfo {

/// CART classifier with Gini impurity, grown until every leaf is pure or no
/// feature can separate its samples. Among equally good splits the lowest
/// feature index wins, then the lowest threshold. Samples go left when
/// x[feature] <= threshold.
class DecisionTree {
 public:
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double p_failed = 0.0;  // fraction of Failed samples reaching the node
  };

  /// Fits on every row of `data`.
  static DecisionTree fit(const TrainingSet& data);

  /// Fits on `sample` (row indices, repeats allowed). When `max_features`
  /// is non-zero, each split examines features in a random order drawn
  /// from `seed` until `max_features` non-constant ones have been scored.
  static DecisionTree fit(const TrainingSet& data, std::span<const std::size_t> sample,
                          std::size_t max_features, std::uint64_t seed);

  static DecisionTree from_nodes(std::vector<Node> nodes, std::size_t dim);

  double failed_probability(std::span<const double> x) const;
  ExitOutcome predict(std::span<const double> x) const;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t depth() const;

 private:
  std::vector<Node> nodes_;
  std::size_t dim_ = 0;
};

/// Bagged CART ensemble; each tree sees a bootstrap sample of size n and
/// floor(sqrt(d)) candidate features per split. The ensemble averages the
/// per-tree Failed probabilities and predicts Failed only above 0.5.
class RandomForest {
 public:
  static RandomForest fit(const TrainingSet& data, std::size_t n_trees, std::uint64_t seed,
                          unsigned threads = 1);
  static RandomForest from_trees(std::vector<DecisionTree> trees);

  double failed_probability(std::span<const double> x) const;
  ExitOutcome predict(std::span<const double> x) const;

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }

 private:
  std::vector<DecisionTree> trees_;
};

}  // namespace hfo
