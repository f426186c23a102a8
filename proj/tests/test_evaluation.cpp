#include <doctest.h>

#include <cmath>

#include "hfo/error.hpp"
#include "hfo/evaluation.hpp"
#include "hfo/random.hpp"
#include "metrics_oracle.hpp"

using namespace hfo;
using namespace std::chrono;

namespace {

constexpr auto C = ExitOutcome::Completed;
constexpr auto F = ExitOutcome::Failed;

using Pairs = std::vector<std::pair<ExitOutcome, ExitOutcome>>;

Pairs random_pairs(Rng& rng, std::size_t n) {
  Pairs out;
  const double p_fail = rng.uniform();
  const double p_pred = rng.uniform();
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(rng.bernoulli(p_pred) ? F : C, rng.bernoulli(p_fail) ? F : C);
  return out;
}

ConfusionCounts count(const Pairs& pairs) {
  ConfusionCounts c;
  for (const auto& [p, a] : pairs) c = accumulate(c, p, a);
  return c;
}

void check_close(const ClassMetrics& a, const ClassMetrics& b) {
  CHECK(std::abs(a.precision - b.precision) <= 1e-12);
  CHECK(std::abs(a.recall - b.recall) <= 1e-12);
  CHECK(std::abs(a.f1 - b.f1) <= 1e-12);
}

void check_close(const MetricsReport& a, const MetricsReport& b) {
  check_close(a.completed, b.completed);
  check_close(a.failed, b.failed);
  check_close(a.macro, b.macro);
}

}  // namespace

TEST_CASE("accumulate increments exactly one cell") {
  CHECK(accumulate({}, F, F) == ConfusionCounts{1, 0, 0, 0});
  CHECK(accumulate({}, F, C) == ConfusionCounts{0, 1, 0, 0});
  CHECK(accumulate({}, C, C) == ConfusionCounts{0, 0, 1, 0});
  CHECK(accumulate({}, C, F) == ConfusionCounts{0, 0, 0, 1});
  Rng rng(1);
  const auto pairs = random_pairs(rng, 200);
  const auto c = count(pairs);
  CHECK(c.total() == 200);
  std::uint64_t tp = 0;
  for (const auto& [p, a] : pairs) tp += p == F && a == F;
  CHECK(c.tp == tp);
}

TEST_CASE("hand-computed example") {
  const auto m = compute_metrics({3, 1, 4, 2});
  CHECK(m.failed.precision == doctest::Approx(0.75));
  CHECK(m.failed.recall == doctest::Approx(0.6));
  CHECK(m.failed.f1 == doctest::Approx(2 * 0.45 / 1.35));
  CHECK(m.completed.precision == doctest::Approx(4.0 / 6));
  CHECK(m.completed.recall == doctest::Approx(0.8));
}

TEST_CASE("majority-style predictions on a 90/10 stream") {
  const auto m = compute_metrics({0, 0, 90, 10});
  CHECK(m.completed.recall == 1.0);
  CHECK(m.failed.precision == 0.0);
  CHECK(m.failed.recall == 0.0);
  CHECK(m.failed.f1 == 0.0);
}

TEST_CASE("perfect predictor scores one everywhere") {
  const auto m = compute_metrics({10, 0, 90, 0});
  for (const auto& c : {m.completed, m.failed, m.macro}) {
    CHECK(c.precision == 1.0);
    CHECK(c.recall == 1.0);
    CHECK(c.f1 == 1.0);
  }
}

TEST_CASE("metrics match the brute-force recomputation on random streams") {
  Rng rng(2);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto pairs = random_pairs(rng, 200);
    check_close(compute_metrics(count(pairs)), test::metrics_oracle(pairs));
  }
}

TEST_CASE("swapping the positive class swaps blocks and keeps macro") {
  Rng rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const auto c = count(random_pairs(rng, 100));
    const auto a = compute_metrics(c);
    const auto b = compute_metrics({c.tn, c.fn, c.tp, c.fp});
    check_close(a.failed, b.completed);
    check_close(a.completed, b.failed);
    check_close(a.macro, b.macro);
  }
}

TEST_CASE("duplicating every pair leaves metrics unchanged") {
  Rng rng(4);
  for (int rep = 0; rep < 100; ++rep) {
    auto pairs = random_pairs(rng, 50);
    const auto a = compute_metrics(count(pairs));
    const auto copy = pairs;
    pairs.insert(pairs.end(), copy.begin(), copy.end());
    check_close(a, compute_metrics(count(pairs)));
  }
}

TEST_CASE("empty evaluation throws") {
  CHECK_THROWS_AS(compute_metrics({}), EmptyEvaluation);
  CHECK_THROWS_AS(mean_report({}), EmptyEvaluation);
  CHECK_THROWS_AS(aggregate_monthly({}), EmptyEvaluation);
}

TEST_CASE("monthly aggregation") {
  const sys_days may1 = 2020y / May / 1, may20 = 2020y / May / 20, jun3 = 2020y / June / 3, jul9 = 2020y / July / 9;
  SUBCASE("one month") {
    const std::vector<DailyCounts> daily{{may1, {1, 1, 5, 1}}, {may20, {2, 0, 3, 1}}};
    const auto agg = aggregate_monthly(daily);
    REQUIRE(agg.months.size() == 1);
    CHECK(agg.months[0].counts == ConfusionCounts{3, 1, 8, 2});
    CHECK(agg.monthly_mean == agg.months[0].metrics);
    CHECK(agg.pooled == agg.months[0].metrics);
  }
  SUBCASE("identical months") {
    const std::vector<DailyCounts> daily{{may1, {1, 1, 5, 1}}, {jun3, {1, 1, 5, 1}}};
    const auto agg = aggregate_monthly(daily);
    REQUIRE(agg.months.size() == 2);
    check_close(agg.monthly_mean, agg.months[0].metrics);
  }
  SUBCASE("three months against hand averages") {
    const std::vector<DailyCounts> daily{{may1, {3, 1, 4, 2}}, {jun3, {0, 0, 9, 1}}, {jul9, {5, 5, 5, 5}}};
    const auto agg = aggregate_monthly(daily);
    REQUIRE(agg.months.size() == 3);
    // Failed F1 per month: 2/3, 0, 1/2.
    CHECK(agg.monthly_mean.failed.f1 == doctest::Approx((2.0 / 3 + 0 + 0.5) / 3));
    // Completed recall per month: 4/5, 1, 1/2.
    CHECK(agg.monthly_mean.completed.recall == doctest::Approx((0.8 + 1 + 0.5) / 3));
    CHECK(agg.pooled_counts == ConfusionCounts{8, 6, 18, 8});
    CHECK(agg.pooled == compute_metrics({8, 6, 18, 8}));
  }
  SUBCASE("months without evaluated jobs are skipped with a warning") {
    const std::vector<DailyCounts> daily{{may1, {1, 0, 1, 0}}, {jun3, {}}, {jul9, {0, 1, 1, 0}}};
    const auto agg = aggregate_monthly(daily);
    CHECK(agg.months.size() == 2);
    REQUIRE(agg.warnings.size() == 1);
    CHECK(agg.warnings[0].find("2020-06") != std::string::npos);
  }
  SUBCASE("calendar gaps count as empty months") {
    const std::vector<DailyCounts> daily{{may1, {1, 0, 1, 0}}, {jul9, {0, 1, 1, 0}}};
    const auto agg = aggregate_monthly(daily);
    CHECK(agg.months.size() == 2);
    REQUIRE(agg.warnings.size() == 1);
    CHECK(agg.warnings[0].find("2020-06") != std::string::npos);
  }
}
