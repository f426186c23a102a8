#include "hfo/learners.hpp"

#include "hfo/error.hpp"

namespace hfo {

namespace {
constexpr std::string_view kKindNames[] = {"dt", "rf", "lr", "knn", "majority", "random"};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
}  // namespace

std::string_view to_string(ModelKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<ModelKind> parse_model_kind(std::string_view text) {
  for (std::size_t i = 0; i < std::size(kKindNames); ++i)
    if (kKindNames[i] == text) return static_cast<ModelKind>(i);
  return std::nullopt;
}

std::string_view to_string(Distance d) { return d == Distance::Cosine ? "cosine" : "minkowski"; }

std::optional<Distance> parse_distance(std::string_view text) {
  if (text == "cosine") return Distance::Cosine;
  if (text == "minkowski") return Distance::Minkowski;
  return std::nullopt;
}

std::vector<std::string> ClassifierSpec::validate() const {
  std::vector<std::string> warnings;
  if (kind == ModelKind::Knn) {
    if (k < 1) throw ConfigError("k must be >= 1");
    if (k % 2 == 0) warnings.push_back("even k=" + std::to_string(k) + " allows tied votes");
  }
  if (p < 1) throw ConfigError("Minkowski order p must be >= 1");
  if (kind == ModelKind::RandomForest && n_trees < 1) throw ConfigError("n_trees must be >= 1");
  if (kind == ModelKind::LogisticRegression && !(l2 > 0)) throw ConfigError("l2 must be positive");
  return warnings;
}

std::string ClassifierSpec::label(Encoding encoding) const {
  const std::string enc(hfo::label(encoding));
  switch (kind) {
    case ModelKind::DecisionTree: return enc + "+DT";
    case ModelKind::RandomForest: return enc + "+RF";
    case ModelKind::LogisticRegression: return enc + "+LR";
    case ModelKind::Knn:
      return enc + (distance == Distance::Cosine ? "+CD" : (p == 2 ? "+MWD" : "+MWD" + std::to_string(p)));
    case ModelKind::Majority: return "Majority";
    case ModelKind::Random: return "Random";
  }
  return "?";
}

FittedModel fit(const ClassifierSpec& spec, const TrainingSet& train) {
  spec.validate();
  if (train.empty()) throw EmptyTraining("cannot fit " + std::string(to_string(spec.kind)) + " on no data");
  FittedModel m{spec, train.dim(), MajorityModel(ExitOutcome::Completed)};
  switch (spec.kind) {
    case ModelKind::DecisionTree: m.state = DecisionTree::fit(train); break;
    case ModelKind::RandomForest:
      m.state = RandomForest::fit(train, spec.n_trees, spec.seed, spec.threads);
      break;
    case ModelKind::LogisticRegression:
      m.state = LogisticRegression::fit(train, spec.l2, spec.max_iterations, spec.gradient_tolerance);
      break;
    case ModelKind::Knn: m.state = KnnModel::fit(train, spec.k, spec.distance, spec.p); break;
    case ModelKind::Majority: m.state = MajorityModel::fit(train); break;
    case ModelKind::Random: m.state = RandomModel::fit(train, spec.seed); break;
  }
  return m;
}

ExitOutcome predict(const FittedModel& model, std::span<const double> x) {
  if (x.size() != model.dim)
    throw DimensionError("query of length " + std::to_string(x.size()) + ", model expects " +
                         std::to_string(model.dim));
  return std::visit(overloaded{
                        [&](const DecisionTree& t) { return t.predict(x); },
                        [&](const RandomForest& f) { return f.predict(x); },
                        [&](const LogisticRegression& l) { return l.predict(x); },
                        [&](const KnnModel& k) { return k.predict(x); },
                        [](const MajorityModel& m) { return m.predict(); },
                        [](const RandomModel& r) { return r.predict(); },
                    },
                    model.state);
}

ExitOutcome predict(const FittedModel& model, const FeatureVector& x) { return predict(model, x.view()); }

FittedModel extend_reference_set(const FittedModel& model, const TrainingSet& newly_finished) {
  const auto* knn = std::get_if<KnnModel>(&model.state);
  if (!knn) throw ConfigError("only KNN models have an extensible reference set");
  return FittedModel{model.spec, model.dim, knn->extended(newly_finished)};
}

}  // namespace hfo
