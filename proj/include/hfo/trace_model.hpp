#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hfo/time.hpp"

namespace hfo {

/// Scheduler-assigned exit state, as recorded in the accounting database.
enum class JobState { Completed, Failed, Cancelled, Timeout, OutOfMemory, Preempted, NodeFail };

inline constexpr std::array<JobState, 7> kAllJobStates = {
    JobState::Completed, JobState::Failed,    JobState::Cancelled, JobState::Timeout,
    JobState::OutOfMemory, JobState::Preempted, JobState::NodeFail};

/// "COMPLETED", "OUT_OF_MEMORY", ...
std::string_view to_string(JobState s);
std::optional<JobState> parse_job_state(std::string_view text);

/// Binary label derived from the exit code. Failed is the positive class.
enum class ExitOutcome { Completed, Failed };

std::string_view to_string(ExitOutcome o);

/// One submitted job: the fifteen submit-time features plus lifecycle data.
///
/// `exit_code` holds only the first element of the scheduler's exit-code
/// pair. A record without `end_time` is still running (or pending) at the
/// time the trace was cut; such records carry neither exit code nor state.
struct JobRecord {
  std::int64_t job_id = 0;
  std::string name;
  std::string command;
  std::string account;
  std::int64_t user_id = 0;
  std::string dependency;
  std::int64_t group_id = 0;
  std::vector<std::string> requested_nodes;
  std::optional<std::int64_t> num_tasks_per_socket;
  std::string partition;
  std::optional<std::int64_t> time_limit;  // minutes; absent means infinite
  std::string qos;
  std::int64_t num_cpu = 1;
  std::int64_t num_nodes = 1;
  std::int64_t num_gpus = 0;
  Timestamp submit_time{};
  std::optional<Timestamp> start_time;
  std::optional<Timestamp> end_time;
  std::optional<std::int64_t> exit_code;
  std::optional<JobState> original_state;

  bool finished() const noexcept { return end_time.has_value(); }

  friend bool operator==(const JobRecord&, const JobRecord&) = default;
};

/// Throws ValidationError when a record breaks a field-level invariant
/// (timestamp ordering, positive resource counts, finished-implies-exit-code).
void validate(const JobRecord& record);

struct LabeledJob {
  JobRecord record;
  ExitOutcome outcome = ExitOutcome::Completed;
};

/// Relabeling dropped the record (cancelled by the user or lost to a node).
struct Excluded {
  JobState original_state;
};

using RelabelResult = std::variant<LabeledJob, Excluded>;

/// Completed iff exit code is 0; cancelled and node-fail jobs are excluded.
/// Throws UnfinishedJob when end_time or exit_code is missing.
RelabelResult relabel(const JobRecord& record);

struct StateBreakdown {
  std::size_t count = 0;
  double percent = 0.0;
  std::size_t exit_code_zero = 0;
};

struct AuditReport {
  std::size_t total = 0;
  /// state != Completed but exit code == 0
  std::size_t discrepancy_not_completed_ec_zero = 0;
  /// state == Completed but exit code != 0
  std::size_t discrepancy_completed_ec_nonzero = 0;
  std::array<StateBreakdown, kAllJobStates.size()> per_state{};

  const StateBreakdown& of(JobState s) const { return per_state[static_cast<std::size_t>(s)]; }
};

/// Throws EmptyTrace on empty input, UnfinishedJob if any record lacks an end.
AuditReport audit_labels(std::span<const JobRecord> trace);

struct MonthlyCount {
  std::chrono::year_month month;
  std::size_t completed = 0;
  std::size_t failed = 0;

  friend bool operator==(const MonthlyCount&, const MonthlyCount&) = default;
};

/// Buckets by UTC calendar month of submission, oldest first.
std::vector<MonthlyCount> monthly_distribution(std::span<const LabeledJob> jobs);

}  // namespace hfo
