#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hfo/trace_model.hpp"

namespace hfo {

struct DriftPoint {
  int month_index = 0;  // first month (0-based from the trace start) under the new rule
  int rule_id = 0;
};

/// Knobs of the synthetic workload. Fields after `discrepancy_rate` extend
/// the core set with the mechanisms the generator needs to emit realistic
/// exclusions and noisy outcomes.
struct GeneratorConfig {
  std::uint64_t seed = 42;
  int n_users = 40;
  int months = 6;
  double jobs_per_day_mean = 60.0;
  double batch_size_mean = 4.0;
  double overall_fail_rate = 0.11;
  double monthly_fail_rate_jitter = 0.02;
  std::vector<DriftPoint> drift_schedule;
  double discrepancy_rate = 0.0;

  /// Fraction of jobs whose outcome ignores the failure rule and is drawn
  /// from the month's residual rate instead. 0 makes failures a
  /// deterministic function of submit-time features.
  double label_noise = 0.2;
  double cancel_rate = 0.08;
  double node_fail_rate = 0.0001;
  Timestamp start = Timestamp{std::chrono::sys_days{std::chrono::year{2020} / 5 / 1}};

  /// Throws ConfigError.
  void validate() const;
};

struct MonthStats {
  std::chrono::year_month month;
  int rule_id = 0;
  double target_fail_rate = 0.0;
  std::size_t labeled = 0;  // finished, not cancelled / node-fail
  std::size_t failed = 0;

  double realized_fail_rate() const {
    return labeled ? static_cast<double>(failed) / static_cast<double>(labeled) : 0.0;
  }
};

/// Counters kept while generating, independent of any later analysis.
struct GeneratorStats {
  std::size_t total = 0;
  std::size_t unfinished = 0;
  std::size_t cancelled = 0;
  std::size_t node_fail = 0;
  std::size_t labeled = 0;
  std::size_t labeled_failed = 0;
  std::size_t injected_discrepancies = 0;
  /// Over finished records: state != COMPLETED with exit code 0, and the reverse.
  std::size_t not_completed_ec_zero = 0;
  std::size_t completed_ec_nonzero = 0;
  std::vector<MonthStats> months;

  double realized_fail_rate() const {
    return labeled ? static_cast<double>(labeled_failed) / static_cast<double>(labeled) : 0.0;
  }
};

struct GeneratedTrace {
  std::vector<JobRecord> jobs;  // sorted by submit time, job ids ascending
  GeneratorStats stats;
};

/// Pure function of `config`. Throws ConfigError on invalid configuration.
GeneratedTrace generate(const GeneratorConfig& config);

/// Failure-rule score in [0, 1) of a (user, partition, time limit) key.
double failure_rule_score(int rule_id, std::int64_t user_id, std::string_view partition,
                          const std::optional<std::int64_t>& time_limit);

}  // namespace hfo
