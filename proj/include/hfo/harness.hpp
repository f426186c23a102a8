#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hfo/embedder.hpp"
#include "hfo/evaluation.hpp"
#include "hfo/generator.hpp"
#include "hfo/learners.hpp"

namespace hfo {

enum class Setting { Offline, Online };
std::string_view to_string(Setting s);
std::optional<Setting> parse_setting(std::string_view text);

/// Which timestamp places a finished job inside a supervised training window.
enum class WindowMembership { Submit, End };
std::string_view to_string(WindowMembership m);
std::optional<WindowMembership> parse_membership(std::string_view text);

struct OfflineConfig {
  double split_fraction = 0.7;  // of the job count, after chronological sort
};

struct OnlineConfig {
  int alpha_days = 30;  // training window length
  int omega_days = 1;   // test batch length
  bool knn_evict = true;
  WindowMembership membership = WindowMembership::Submit;

  /// Throws ConfigError; warns when alpha < omega.
  std::vector<std::string> validate() const;
};

struct ScoredJob {
  std::int64_t job_id = 0;
  ExitOutcome predicted = ExitOutcome::Completed;
  ExitOutcome actual = ExitOutcome::Completed;
};

/// Test hook: moves the training cutoff of one online batch. The leakage
/// verifier still checks against the true boundary.
struct BoundaryFault {
  std::size_t batch = 0;
  std::chrono::seconds shift{0};
};

struct RunOptions {
  /// Runtime no-leakage, single-scoring and chronology assertions
  /// (LeakageError on violation).
  bool verify = false;
  /// Required for SB; defaults to the built-in hash embedder when null.
  const Embedder* embedder = nullptr;
  std::optional<BoundaryFault> fault;
  /// When set, receives the model of the last fit (offline) or last batch.
  FittedModel* final_model = nullptr;
  /// When set, receives every scored job in scoring order.
  std::vector<ScoredJob>* scored = nullptr;
};

struct TimingStats {
  double train_seconds_per_day = 0.0;
  double infer_seconds_per_job = 0.0;  // includes SB encoding
};

/// A job of the evaluation stream: labeled when finished, otherwise
/// `outcome` is empty and the job is never scored.
struct StreamJob {
  JobRecord record;
  std::optional<ExitOutcome> outcome;
};

struct PreparedTrace {
  std::vector<StreamJob> jobs;  // input order, exclusions dropped
  std::size_t excluded_cancelled = 0;
  std::size_t excluded_node_fail = 0;
  std::size_t unfinished = 0;

  std::vector<LabeledJob> labeled() const;
};

/// Relabels every finished record and drops cancelled / node-fail jobs.
PreparedTrace prepare_trace(std::span<const JobRecord> records);

struct EvalReport {
  std::string model;  // "INT+RF", "SB+MWD", "Majority", ...
  ClassifierSpec spec;
  Encoding encoding = Encoding::Int;
  Setting setting = Setting::Offline;
  OfflineConfig offline;
  OnlineConfig online;
  MonthlyAggregate metrics;
  TimingStats timing;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::size_t batches = 0;  // online: scored test batches
  std::vector<std::string> warnings;

  /// Pooled metrics offline (single test set); mean of monthly metrics online.
  const MetricsReport& headline() const {
    return setting == Setting::Offline ? metrics.pooled : metrics.monthly_mean;
  }
};

/// Single chronological split: the first floor(split * n) jobs train, the
/// rest are scored once. Throws ConfigError when either side is empty.
EvalReport run_offline(std::span<const LabeledJob> jobs, const ClassifierSpec& spec, Encoding encoding,
                       const OfflineConfig& config, const RunOptions& options = {});

/// Sliding-window streaming protocol. Supervised models are refit before
/// every omega-day batch on the alpha days before the batch boundary, using
/// only jobs finished before it; KNN instead extends its reference set
/// before every test job with the jobs finished before that job's
/// submission. Throws ConfigError when the trace does not span more than
/// alpha days.
EvalReport run_online(std::span<const StreamJob> jobs, const ClassifierSpec& spec, Encoding encoding,
                      const OnlineConfig& config, const RunOptions& options = {});

struct SettingComparison {
  std::string model;
  double offline_failed_f1 = 0.0;
  double online_failed_f1 = 0.0;
  double delta() const { return online_failed_f1 - offline_failed_f1; }
};

/// Runs both settings for each ClassifierSpec on the same prepared trace and compares the
/// headline failed-class F1.
std::vector<SettingComparison> compare_settings(const PreparedTrace& trace,
                                                std::span<const ClassifierSpec> specs, Encoding encoding,
                                                const OfflineConfig& offline, const OnlineConfig& online,
                                                const RunOptions& options = {});

/// Generates a drifting trace and compares settings on it. Throws
/// ConfigError when `config` has no drift point.
std::vector<SettingComparison> inject_drift_experiment(const GeneratorConfig& config,
                                                       std::span<const ClassifierSpec> specs,
                                                       Encoding encoding, const OfflineConfig& offline = {},
                                                       const OnlineConfig& online = {},
                                                       const RunOptions& options = {});

}  // namespace hfo
