#include "hfo/model_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hfo/error.hpp"

namespace hfo {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

int outcome_bit(ExitOutcome o) { return o == ExitOutcome::Failed ? 1 : 0; }
ExitOutcome outcome_from(int b) { return b ? ExitOutcome::Failed : ExitOutcome::Completed; }

json tree_json(const DecisionTree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes())
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.p_failed});
  return nodes;
}

DecisionTree tree_from(const json& j, std::size_t dim) {
  std::vector<DecisionTree::Node> nodes;
  for (const auto& n : j)
    nodes.push_back({n.at(0).get<std::int32_t>(), n.at(1).get<double>(), n.at(2).get<std::int32_t>(),
                     n.at(3).get<std::int32_t>(), n.at(4).get<double>()});
  return DecisionTree::from_nodes(std::move(nodes), dim);
}

json spec_json(const ClassifierSpec& s) {
  return {{"kind", to_string(s.kind)},       {"k", s.k},
          {"distance", to_string(s.distance)}, {"p", s.p},
          {"seed", s.seed},                  {"n_trees", s.n_trees},
          {"l2", s.l2},                      {"max_iterations", s.max_iterations},
          {"gradient_tolerance", s.gradient_tolerance}};
}

ClassifierSpec spec_from(const json& j) {
  ClassifierSpec s;
  auto kind = parse_model_kind(j.at("kind").get<std::string>());
  auto dist = parse_distance(j.at("distance").get<std::string>());
  if (!kind || !dist) throw ConfigError("unknown model kind or distance in model blob");
  s.kind = *kind;
  s.distance = *dist;
  s.k = j.at("k").get<std::size_t>();
  s.p = j.at("p").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.n_trees = j.at("n_trees").get<std::size_t>();
  s.l2 = j.at("l2").get<double>();
  s.max_iterations = j.at("max_iterations").get<std::size_t>();
  s.gradient_tolerance = j.at("gradient_tolerance").get<double>();
  return s;
}

}  // namespace

std::string save_model(const FittedModel& m) {
  json state = std::visit(
      overloaded{
          [](const DecisionTree& t) { return json{{"nodes", tree_json(t)}}; },
          [](const RandomForest& f) {
            json trees = json::array();
            for (const auto& t : f.trees()) trees.push_back(tree_json(t));
            return json{{"trees", trees}};
          },
          [](const LogisticRegression& l) {
            json j{{"mean", l.mean()}, {"inv_scale", l.inv_scale()}, {"weights", l.weights()},
                   {"bias", l.bias()}};
            j["constant"] = l.constant() ? json(outcome_bit(*l.constant())) : json(nullptr);
            return j;
          },
          [](const KnnModel& k) {
            json refs = json::array();
            for (std::size_t i = 0; i < k.size(); ++i) {
              const auto r = k.row(i);
              refs.push_back({{"x", std::vector<double>(r.begin(), r.end())},
                              {"y", outcome_bit(k.outcome(i))},
                              {"tag", k.tag(i)}});
            }
            return json{{"references", refs}};
          },
          [](const MajorityModel& mm) { return json{{"label", outcome_bit(mm.label())}}; },
          [](const RandomModel& r) {
            std::vector<int> labels;
            for (auto l : r.labels()) labels.push_back(outcome_bit(l));
            return json{{"labels", labels}, {"seed", r.seed()}, {"draws", r.draws()}};
          },
      },
      m.state);
  json blob{{"format", kModelFormatTag},
            {"kind", to_string(m.spec.kind)},
            {"spec", spec_json(m.spec)},
            {"dim", m.dim},
            {"state", state}};
  return blob.dump();
}

FittedModel load_model(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != kModelFormatTag)
      throw ConfigError("unsupported model format '" + j.at("format").get<std::string>() + "'");
    FittedModel m{spec_from(j.at("spec")), j.at("dim").get<std::size_t>(), MajorityModel(ExitOutcome::Completed)};
    const json& s = j.at("state");
    switch (m.spec.kind) {
      case ModelKind::DecisionTree: m.state = tree_from(s.at("nodes"), m.dim); break;
      case ModelKind::RandomForest: {
        std::vector<DecisionTree> trees;
        for (const auto& t : s.at("trees")) trees.push_back(tree_from(t, m.dim));
        m.state = RandomForest::from_trees(std::move(trees));
        break;
      }
      case ModelKind::LogisticRegression: {
        std::optional<ExitOutcome> constant;
        if (!s.at("constant").is_null()) constant = outcome_from(s.at("constant").get<int>());
        m.state = LogisticRegression::from_parameters(
            s.at("mean").get<std::vector<double>>(), s.at("inv_scale").get<std::vector<double>>(),
            s.at("weights").get<std::vector<double>>(), s.at("bias").get<double>(), constant);
        break;
      }
      case ModelKind::Knn: {
        KnnModel k(m.dim, m.spec.k, m.spec.distance, m.spec.p);
        for (const auto& r : s.at("references"))
          k.add(r.at("x").get<std::vector<double>>(), outcome_from(r.at("y").get<int>()),
                r.at("tag").get<std::uint64_t>());
        m.state = std::move(k);
        break;
      }
      case ModelKind::Majority: m.state = MajorityModel(outcome_from(s.at("label").get<int>())); break;
      case ModelKind::Random: {
        std::vector<ExitOutcome> labels;
        for (int b : s.at("labels").get<std::vector<int>>()) labels.push_back(outcome_from(b));
        m.state = RandomModel(std::move(labels), s.at("seed").get<std::uint64_t>(),
                              s.at("draws").get<std::uint64_t>());
        break;
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model blob: ") + e.what());
  }
}

void save_model_file(const FittedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model " + path.string());
  out << save_model(model) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

FittedModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str());
}

}  // namespace hfo
