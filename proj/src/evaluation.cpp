#include "hfo/evaluation.hpp"

#include <map>

#include "hfo/error.hpp"
#include "hfo/time.hpp"

namespace hfo {

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

ClassMetrics class_metrics(std::uint64_t hit, std::uint64_t false_alarm, std::uint64_t miss) {
  ClassMetrics m;
  m.precision = ratio(hit, hit + false_alarm);
  m.recall = ratio(hit, hit + miss);
  const double s = m.precision + m.recall;
  m.f1 = s > 0 ? 2.0 * m.precision * m.recall / s : 0.0;
  return m;
}

ClassMetrics mean2(const ClassMetrics& a, const ClassMetrics& b) {
  return {(a.precision + b.precision) / 2.0, (a.recall + b.recall) / 2.0, (a.f1 + b.f1) / 2.0};
}

}  // namespace

ConfusionCounts accumulate(ConfusionCounts c, ExitOutcome predicted, ExitOutcome actual) {
  const bool p = predicted == ExitOutcome::Failed;
  const bool a = actual == ExitOutcome::Failed;
  if (p && a)
    ++c.tp;
  else if (p)
    ++c.fp;
  else if (a)
    ++c.fn;
  else
    ++c.tn;
  return c;
}

MetricsReport compute_metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw EmptyEvaluation("no evaluated jobs");
  MetricsReport r;
  r.failed = class_metrics(c.tp, c.fp, c.fn);
  r.completed = class_metrics(c.tn, c.fn, c.fp);
  r.macro = mean2(r.completed, r.failed);
  return r;
}

MetricsReport mean_report(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw EmptyEvaluation("mean of no reports");
  MetricsReport m;
  auto add = [](ClassMetrics& acc, const ClassMetrics& x) {
    acc.precision += x.precision;
    acc.recall += x.recall;
    acc.f1 += x.f1;
  };
  for (const auto& r : reports) {
    add(m.completed, r.completed);
    add(m.failed, r.failed);
    add(m.macro, r.macro);
  }
  const double n = static_cast<double>(reports.size());
  for (ClassMetrics* c : {&m.completed, &m.failed, &m.macro}) {
    c->precision /= n;
    c->recall /= n;
    c->f1 /= n;
  }
  return m;
}

MonthlyAggregate aggregate_monthly(std::span<const DailyCounts> daily) {
  if (daily.empty()) throw EmptyEvaluation("no daily counts to aggregate");
  std::map<std::chrono::year_month, ConfusionCounts> by_month;
  for (const auto& d : daily) {
    const std::chrono::year_month_day ymd{d.day};
    by_month[ymd.year() / ymd.month()] += d.counts;
  }
  // Calendar months between the first and last one with no entries at all.
  for (auto m = by_month.begin()->first; m < by_month.rbegin()->first; m += std::chrono::months{1})
    by_month.try_emplace(m);
  MonthlyAggregate agg;
  std::vector<MetricsReport> reports;
  for (const auto& [month, counts] : by_month) {
    if (counts.total() == 0) {
      agg.warnings.push_back("month " + format_month(month) + " has no evaluated jobs; skipped");
      continue;
    }
    agg.months.push_back({month, counts, compute_metrics(counts)});
    reports.push_back(agg.months.back().metrics);
    agg.pooled_counts += counts;
  }
  if (reports.empty()) throw EmptyEvaluation("no month has evaluated jobs");
  agg.monthly_mean = mean_report(reports);
  agg.pooled = compute_metrics(agg.pooled_counts);
  return agg;
}

}  // namespace hfo
