#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hfo/baselines.hpp"
#include "hfo/encoding.hpp"
#include "hfo/knn.hpp"
#include "hfo/logistic_regression.hpp"
#include "hfo/training_set.hpp"
#include "hfo/trees.hpp"

namespace hfo {

enum class ModelKind { DecisionTree, RandomForest, LogisticRegression, Knn, Majority, Random };

/// "dt", "rf", "lr", "knn", "majority", "random"
std::string_view to_string(ModelKind k);
std::optional<ModelKind> parse_model_kind(std::string_view text);
std::string_view to_string(Distance d);
std::optional<Distance> parse_distance(std::string_view text);

/// Model choice plus hyperparameters. Defaults reproduce the reference
/// configuration: k = 5 with Minkowski p = 2, 100-tree forests, L2 strength 1.
struct ClassifierSpec {
  ModelKind kind = ModelKind::Majority;
  std::size_t k = 5;
  Distance distance = Distance::Minkowski;
  int p = 2;
  std::uint64_t seed = 0;
  std::size_t n_trees = 100;
  double l2 = 1.0;
  std::size_t max_iterations = 1000;
  double gradient_tolerance = 1e-6;
  unsigned threads = 1;

  /// Throws ConfigError; returns advisory warnings (e.g. even k).
  std::vector<std::string> validate() const;
  bool supervised() const noexcept { return kind != ModelKind::Knn; }
  /// Row label in the style "INT+RF", "SB+MWD", "Majority".
  std::string label(Encoding encoding) const;
};

using ModelState =
    std::variant<DecisionTree, RandomForest, LogisticRegression, KnnModel, MajorityModel, RandomModel>;

struct FittedModel {
  ClassifierSpec spec;
  std::size_t dim = 0;
  ModelState state;
};

/// Throws EmptyTraining on an empty set, ConfigError on a bad spec.
FittedModel fit(const ClassifierSpec& spec, const TrainingSet& train);

/// Throws DimensionError when `x` does not match the training dimension.
ExitOutcome predict(const FittedModel& model, std::span<const double> x);
ExitOutcome predict(const FittedModel& model, const FeatureVector& x);

/// KNN only: returns a model whose reference set also holds `newly_finished`.
FittedModel extend_reference_set(const FittedModel& model, const TrainingSet& newly_finished);

}  // namespace hfo
