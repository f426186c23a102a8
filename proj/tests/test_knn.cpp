#include <doctest.h>

#include <algorithm>

#include "hfo/error.hpp"
#include "hfo/knn.hpp"
#include "hfo/random.hpp"
#include "knn_oracle.hpp"

using namespace hfo;

namespace {

constexpr auto C = ExitOutcome::Completed;
constexpr auto F = ExitOutcome::Failed;

TrainingSet random_refs(Rng& rng, std::size_t n, std::size_t d) {
  TrainingSet ts(d);
  std::vector<double> row(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : row) x = rng.uniform() * 2 - 1;
    ts.add(row, rng.bernoulli(0.35) ? F : C);
  }
  return ts;
}

std::vector<double> random_query(Rng& rng, std::size_t d) {
  std::vector<double> q(d);
  for (auto& x : q) x = rng.uniform() * 2 - 1;
  return q;
}

}  // namespace

TEST_CASE("predictions match the exhaustive oracle") {
  Rng rng(1);
  for (auto metric : {Distance::Cosine, Distance::Minkowski}) {
    for (int p : {1, 2, 3}) {
      const auto refs = random_refs(rng, 20, 4);
      const auto model = KnnModel::fit(refs, 5, metric, p);
      for (int q = 0; q < 100; ++q) {
        const auto x = random_query(rng, 4);
        CHECK(model.predict(x) == test::knn_oracle(refs, x, 5, metric, p));
      }
    }
  }
}

TEST_CASE("neighbors are the k closest, closest first") {
  Rng rng(2);
  const auto refs = random_refs(rng, 50, 3);
  const auto model = KnnModel::fit(refs, 7, Distance::Minkowski, 2);
  const auto x = random_query(rng, 3);
  const auto nn = model.neighbors(x);
  REQUIRE(nn.size() == 7);
  for (std::size_t i = 1; i < nn.size(); ++i) CHECK(nn[i - 1].distance <= nn[i].distance);
  std::vector<double> all;
  for (std::size_t i = 0; i < refs.size(); ++i) all.push_back(minkowski_distance(x, refs.row(i), 2));
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < nn.size(); ++i) CHECK(nn[i].distance == all[i]);
}

TEST_CASE("k = 1 on a stored point returns its label") {
  Rng rng(3);
  const auto refs = random_refs(rng, 30, 5);
  const auto model = KnnModel::fit(refs, 1, Distance::Cosine, 2);
  for (std::size_t i = 0; i < refs.size(); ++i) CHECK(model.predict(refs.row(i)) == refs.outcome(i));
}

TEST_CASE("equal distances are ordered by lower tag") {
  TrainingSet refs(1);
  const double a[] = {1.0}, b[] = {-1.0};
  refs.add(a, F, 5);
  refs.add(b, C, 2);
  const auto model = KnnModel::fit(refs, 1, Distance::Minkowski, 2);
  const double q[] = {0.0};
  CHECK(model.predict(q) == C);
  const auto nn = model.neighbors(q);
  CHECK(nn[0].tag == 2);
}

TEST_CASE("a tied vote resolves to the reference majority, then Completed") {
  TrainingSet refs(1);
  const double p0[] = {0.0}, p1[] = {1.0}, p2[] = {10.0};
  refs.add(p0, F);
  refs.add(p1, C);
  refs.add(p2, F);
  const double q[] = {0.4};
  CHECK(KnnModel::fit(refs, 2, Distance::Minkowski, 2).predict(q) == F);

  TrainingSet even(1);
  even.add(p0, F);
  even.add(p1, C);
  CHECK(KnnModel::fit(even, 2, Distance::Minkowski, 2).predict(q) == C);
}

TEST_CASE("permuting the reference set leaves predictions unchanged") {
  Rng rng(4);
  const auto refs = random_refs(rng, 60, 4);
  std::vector<std::size_t> perm(refs.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  TrainingSet shuffled(4);
  for (auto i : perm) shuffled.add(refs.row(i), refs.outcome(i), i);
  for (auto metric : {Distance::Cosine, Distance::Minkowski}) {
    const auto a = KnnModel::fit(refs, 5, metric, 2), b = KnnModel::fit(shuffled, 5, metric, 2);
    for (int q = 0; q < 200; ++q) {
      const auto x = random_query(rng, 4);
      CHECK(a.predict(x) == b.predict(x));
    }
  }
}

TEST_CASE("uniform positive scaling leaves predictions unchanged") {
  Rng rng(5);
  const auto refs = random_refs(rng, 60, 4);
  for (double scale : {0.125, 4.0, 1024.0}) {
    TrainingSet scaled(4);
    for (std::size_t i = 0; i < refs.size(); ++i) {
      std::vector<double> row(refs.row(i).begin(), refs.row(i).end());
      for (auto& v : row) v *= scale;
      scaled.add(row, refs.outcome(i));
    }
    for (auto metric : {Distance::Cosine, Distance::Minkowski}) {
      const auto a = KnnModel::fit(refs, 5, metric, 2), b = KnnModel::fit(scaled, 5, metric, 2);
      for (int q = 0; q < 200; ++q) {
        auto x = random_query(rng, 4);
        const auto pa = a.predict(x);
        for (auto& v : x) v *= scale;
        CHECK(pa == b.predict(x));
      }
    }
  }
}

TEST_CASE("extension is a value operation") {
  Rng rng(6);
  const auto refs = random_refs(rng, 30, 3);
  const auto model = KnnModel::fit(refs, 1, Distance::Minkowski, 2);
  const auto same = model.extended(TrainingSet(3));
  const auto x = random_query(rng, 3);
  CHECK(same.predict(x) == model.predict(x));

  TrainingSet one(3);
  const auto before = model.predict(x);
  one.add(x, before == F ? C : F, 1000);
  const auto grown = model.extended(one);
  CHECK(grown.predict(x) != before);
  CHECK(model.predict(x) == before);
  CHECK(model.size() == 30);
  CHECK(grown.size() == 31);

  TrainingSet wrong(2);
  const double w[] = {1, 2};
  wrong.add(w, C);
  CHECK_THROWS_AS(model.extended(wrong), DimensionError);
}

TEST_CASE("remove_if and errors") {
  Rng rng(7);
  auto model = KnnModel::fit(random_refs(rng, 10, 2), 3, Distance::Minkowski, 2);
  CHECK(model.remove_if([](std::uint64_t t) { return t < 4; }) == 4);
  CHECK(model.size() == 6);
  CHECK(model.tag(0) == 4);
  const double bad[] = {1, 2, 3};
  CHECK_THROWS_AS(model.predict(bad), DimensionError);
  model.clear();
  const double q[] = {0, 0};
  CHECK_THROWS_AS(model.predict(q), EmptyTraining);
}

TEST_CASE("tiled batch prediction equals one-by-one prediction") {
  Rng rng(12);
  for (std::size_t d : {3, 384}) {
    TrainingSet refs(d);
    std::vector<double> row(d);
    for (std::size_t i = 0; i < 300; ++i) {
      // Coarse grid so that many distances tie across tile boundaries.
      for (auto& x : row) x = static_cast<double>(rng.below(3));
      refs.add(row, rng.bernoulli(0.3) ? F : C, 1000 - i);
    }
    std::vector<double> block;
    for (std::size_t q = 0; q < 200; ++q)
      for (std::size_t j = 0; j < d; ++j) block.push_back(static_cast<double>(rng.below(3)));
    for (auto metric : {Distance::Cosine, Distance::Minkowski}) {
      const auto model = KnnModel::fit(refs, 5, metric, 2);
      const auto many = model.predict_many(block);
      REQUIRE(many.size() == 200);
      for (std::size_t q = 0; q < 200; ++q)
        CHECK(many[q] == model.predict(std::span<const double>(block).subspan(q * d, d)));
    }
  }
  const auto model = KnnModel::fit(random_refs(rng, 5, 3), 3, Distance::Minkowski, 2);
  CHECK(model.predict_many({}).empty());
  CHECK_THROWS_AS(model.predict_many(std::vector<double>(4, 0.0)), DimensionError);
  CHECK_THROWS_AS(KnnModel(3, 3, Distance::Cosine, 2).predict_many(std::vector<double>(3, 0.0)), EmptyTraining);
}
