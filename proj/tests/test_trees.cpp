#include <doctest.h>

#include <set>

#include "hfo/error.hpp"
#include "hfo/random.hpp"
#include "hfo/trees.hpp"

using namespace hfo;

namespace {

constexpr auto C = ExitOutcome::Completed;
constexpr auto F = ExitOutcome::Failed;

TrainingSet threshold_rule(Rng& rng, std::size_t n) {
  TrainingSet ts(2);
  for (std::size_t i = 0; i < n; ++i) {
    const double x0 = rng.uniform() * 10.0, x1 = rng.uniform() * 10.0;
    const double row[] = {x0, x1};
    ts.add(row, x0 > 5.0 ? F : C);
  }
  return ts;
}

// Weighted child Gini impurity n_l G_l + n_r G_r equals
// n - (sum of squared class counts / child size) over both children, so a
// split is better when  S = ((l0^2+l1^2) r + (r0^2+r1^2) l) / (l r)  is larger.
struct Fraction {
  long long num, den;
  bool operator>(const Fraction& o) const { return static_cast<__int128>(num) * o.den > static_cast<__int128>(o.num) * den; }
};

Fraction split_score(long long l0, long long l1, long long r0, long long r1) {
  const long long l = l0 + l1, r = r0 + r1;
  return {(l0 * l0 + l1 * l1) * r + (r0 * r0 + r1 * r1) * l, l * r};
}

}  // namespace

TEST_CASE("tree separates a threshold rule exactly") {
  Rng rng(1);
  const auto ts = threshold_rule(rng, 200);
  const auto tree = DecisionTree::fit(ts);
  for (std::size_t i = 0; i < ts.size(); ++i) CHECK(tree.predict(ts.row(i)) == ts.outcome(i));
  REQUIRE(tree.nodes().size() == 3);
  CHECK(tree.nodes()[0].feature == 0);
  CHECK(tree.nodes()[0].threshold > 4.8);
  CHECK(tree.nodes()[0].threshold < 5.2);
  CHECK(tree.depth() == 1);
}

TEST_CASE("tree reproduces labels of distinct training vectors") {
  Rng rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    TrainingSet ts(3);
    for (int i = 0; i < 150; ++i) {
      const double row[] = {static_cast<double>(rng.below(5)), static_cast<double>(rng.below(5)), rng.uniform()};
      ts.add(row, rng.bernoulli(0.3) ? F : C);
    }
    const auto tree = DecisionTree::fit(ts);
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(tree.predict(ts.row(i)) == ts.outcome(i));
  }
}

TEST_CASE("root split is the brute-force Gini optimum with the documented tie-break") {
  Rng rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    TrainingSet ts(3);
    for (int i = 0; i < 40; ++i) {
      const double row[] = {static_cast<double>(rng.below(6)), static_cast<double>(rng.below(6)),
                            static_cast<double>(rng.below(6))};
      ts.add(row, rng.bernoulli(0.4) ? F : C);
    }
    Fraction best{-1, 1};
    int best_f = -1;
    double best_t = 0;
    for (int f = 0; f < 3; ++f) {
      std::set<double> values;
      for (std::size_t i = 0; i < ts.size(); ++i) values.insert(ts.row(i)[f]);
      for (auto it = values.begin(); std::next(it) != values.end(); ++it) {
        const double t = (*it + *std::next(it)) / 2;
        long long nl = 0, fl = 0, nr = 0, fr = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
          const bool failed = ts.outcome(i) == F;
          if (ts.row(i)[f] <= t) {
            ++nl;
            fl += failed;
          } else {
            ++nr;
            fr += failed;
          }
        }
        const auto score = split_score(nl - fl, fl, nr - fr, fr);
        if (score > best) {
          best = score;
          best_f = f;
          best_t = t;
        }
      }
    }
    const auto tree = DecisionTree::fit(ts);
    if (best_f < 0) continue;
    const auto& root = tree.nodes()[0];
    if (root.feature < 0) continue;  // already pure
    CHECK(root.feature == best_f);
    CHECK(root.threshold == best_t);
  }
}

TEST_CASE("unsplittable data gives a single leaf with the class fraction") {
  TrainingSet ts(1);
  const double row[] = {1.0};
  ts.add(row, F);
  ts.add(row, C);
  ts.add(row, C);
  const auto tree = DecisionTree::fit(ts);
  REQUIRE(tree.nodes().size() == 1);
  CHECK(tree.nodes()[0].p_failed == doctest::Approx(1.0 / 3));
  CHECK(tree.predict(row) == C);
}

TEST_CASE("from_nodes validates structure") {
  std::vector<DecisionTree::Node> bad{{0, 1.0, 1, 7, 0.5}, {-1, 0, -1, -1, 0}};
  CHECK_THROWS(DecisionTree::from_nodes(bad, 1));
  std::vector<DecisionTree::Node> ok{{0, 1.0, 1, 2, 0.5}, {-1, 0, -1, -1, 0}, {-1, 0, -1, -1, 1}};
  const auto tree = DecisionTree::from_nodes(ok, 1);
  const double lo[] = {0.5}, hi[] = {1.5}, edge[] = {1.0};
  CHECK(tree.predict(lo) == C);
  CHECK(tree.predict(hi) == F);
  CHECK(tree.predict(edge) == C);
}

TEST_CASE("forest is deterministic for a fixed seed") {
  Rng rng(4);
  TrainingSet ts(5);
  for (int i = 0; i < 300; ++i) {
    double row[5];
    for (auto& x : row) x = rng.uniform();
    ts.add(row, row[0] + row[1] * row[2] > 0.8 ? F : C);
  }
  const auto a = RandomForest::fit(ts, 100, 7);
  const auto b = RandomForest::fit(ts, 100, 7, 3);
  const auto c = RandomForest::fit(ts, 100, 8);
  REQUIRE(a.trees().size() == 100);
  std::size_t differ = 0;
  for (int q = 0; q < 1000; ++q) {
    double probe[5];
    for (auto& x : probe) x = rng.uniform();
    CHECK(a.failed_probability(probe) == b.failed_probability(probe));
    CHECK(a.predict(probe) == b.predict(probe));
    differ += a.failed_probability(probe) != c.failed_probability(probe);
  }
  CHECK(differ > 0);
}

TEST_CASE("forest predicts failed only above one half") {
  std::vector<DecisionTree::Node> fail{{-1, 0, -1, -1, 1.0}}, pass{{-1, 0, -1, -1, 0.0}};
  const double x[] = {0.0};
  auto even = RandomForest::from_trees({DecisionTree::from_nodes(fail, 1), DecisionTree::from_nodes(pass, 1)});
  CHECK(even.failed_probability(x) == 0.5);
  CHECK(even.predict(x) == C);
  auto more = RandomForest::from_trees({DecisionTree::from_nodes(fail, 1), DecisionTree::from_nodes(fail, 1),
                                        DecisionTree::from_nodes(pass, 1)});
  CHECK(more.predict(x) == F);
}

TEST_CASE("forest learns a threshold rule") {
  Rng rng(5);
  const auto train = threshold_rule(rng, 400);
  const auto test = threshold_rule(rng, 400);
  const auto rf = RandomForest::fit(train, 100, 1);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) correct += rf.predict(test.row(i)) == test.outcome(i);
  CHECK(correct >= 390);
}

TEST_CASE("empty training sets are rejected") {
  TrainingSet empty(2);
  CHECK_THROWS_AS(DecisionTree::fit(empty), EmptyTraining);
  CHECK_THROWS_AS(RandomForest::fit(empty, 10, 1), EmptyTraining);
}
