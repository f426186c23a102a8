#include "hfo/trace_model.hpp"

#include <map>

#include "hfo/error.hpp"

namespace hfo {

namespace {
constexpr std::array<std::string_view, 7> kStateNames = {
    "COMPLETED", "FAILED", "CANCELLED", "TIMEOUT", "OUT_OF_MEMORY", "PREEMPTED", "NODE_FAIL"};
}

std::string_view to_string(JobState s) { return kStateNames[static_cast<std::size_t>(s)]; }

std::optional<JobState> parse_job_state(std::string_view text) {
  for (std::size_t i = 0; i < kStateNames.size(); ++i)
    if (kStateNames[i] == text) return kAllJobStates[i];
  return std::nullopt;
}

std::string_view to_string(ExitOutcome o) {
  return o == ExitOutcome::Failed ? "failed" : "completed";
}

void validate(const JobRecord& r) {
  auto fail = [&](const std::string& what) {
    throw ValidationError("job " + std::to_string(r.job_id) + ": " + what);
  };
  if (r.start_time && *r.start_time < r.submit_time) fail("start_time precedes submit_time");
  if (r.end_time) {
    const Timestamp lower = r.start_time ? *r.start_time : r.submit_time;
    if (*r.end_time < lower) fail("end_time precedes start/submit time");
    if (!r.exit_code) fail("finished job without exit_code");
    if (!r.original_state) fail("finished job without original_state");
  }
  if (r.exit_code && *r.exit_code < 0) fail("negative exit_code");
  if (r.num_cpu < 1) fail("num_cpu < 1");
  if (r.num_nodes < 1) fail("num_nodes < 1");
  if (r.num_gpus < 0) fail("num_gpus < 0");
}

RelabelResult relabel(const JobRecord& r) {
  if (!r.end_time || !r.exit_code)
    throw UnfinishedJob("job " + std::to_string(r.job_id) + " has no end_time/exit_code");
  if (r.original_state &&
      (*r.original_state == JobState::Cancelled || *r.original_state == JobState::NodeFail))
    return Excluded{*r.original_state};
  return LabeledJob{r, *r.exit_code == 0 ? ExitOutcome::Completed : ExitOutcome::Failed};
}

AuditReport audit_labels(std::span<const JobRecord> trace) {
  if (trace.empty()) throw EmptyTrace("audit of an empty trace");
  AuditReport rep;
  for (const auto& r : trace) {
    if (!r.end_time || !r.exit_code || !r.original_state)
      throw UnfinishedJob("job " + std::to_string(r.job_id) + " is not finished");
    const bool ec_zero = *r.exit_code == 0;
    const bool completed = *r.original_state == JobState::Completed;
    if (!completed && ec_zero) ++rep.discrepancy_not_completed_ec_zero;
    if (completed && !ec_zero) ++rep.discrepancy_completed_ec_nonzero;
    auto& b = rep.per_state[static_cast<std::size_t>(*r.original_state)];
    ++b.count;
    if (ec_zero) ++b.exit_code_zero;
  }
  rep.total = trace.size();
  for (auto& b : rep.per_state)
    b.percent = 100.0 * static_cast<double>(b.count) / static_cast<double>(rep.total);
  return rep;
}

std::vector<MonthlyCount> monthly_distribution(std::span<const LabeledJob> jobs) {
  std::map<std::chrono::year_month, MonthlyCount> buckets;
  for (const auto& j : jobs) {
    const auto ym = month_of(j.record.submit_time);
    auto [it, inserted] = buckets.try_emplace(ym, MonthlyCount{ym});
    if (j.outcome == ExitOutcome::Failed)
      ++it->second.failed;
    else
      ++it->second.completed;
  }
  std::vector<MonthlyCount> out;
  out.reserve(buckets.size());
  for (auto& [_, c] : buckets) out.push_back(c);
  return out;
}

}  // namespace hfo
