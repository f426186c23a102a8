#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hfo/trace_model.hpp"

namespace hfo {

/// Positive class is Failed.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts accumulate(ConfusionCounts counts, ExitOutcome predicted, ExitOutcome actual);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct MetricsReport {
  ClassMetrics completed;
  ClassMetrics failed;
  ClassMetrics macro;  // unweighted mean of the two classes
  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Zero denominators yield 0. Throws EmptyEvaluation when counts.total() == 0.
MetricsReport compute_metrics(const ConfusionCounts& counts);

/// Field-wise arithmetic mean. Throws EmptyEvaluation on empty input.
MetricsReport mean_report(std::span<const MetricsReport> reports);

struct DailyCounts {
  std::chrono::sys_days day;
  ConfusionCounts counts;
};

struct MonthlyMetrics {
  std::chrono::year_month month;
  ConfusionCounts counts;
  MetricsReport metrics;
};

struct MonthlyAggregate {
  std::vector<MonthlyMetrics> months;  // chronological, empty months omitted
  MetricsReport monthly_mean;          // unweighted mean over months
  ConfusionCounts pooled_counts;
  MetricsReport pooled;                // metrics of all counts summed
  std::vector<std::string> warnings;
};

/// Sums counts within each calendar month, scores each month and averages
/// the monthly scores. Months without evaluated jobs are skipped with a
/// warning. Throws EmptyEvaluation when nothing was evaluated at all.
MonthlyAggregate aggregate_monthly(std::span<const DailyCounts> daily);

}  // namespace hfo
