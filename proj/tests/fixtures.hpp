#pragma once

#include <string>

#include "hfo/time.hpp"
#include "hfo/trace_model.hpp"

namespace hfo::test {

inline Timestamp at(const char* iso) { return *parse_iso(iso); }

// A finished, valid job with every optional field present.
inline JobRecord sample_job(std::int64_t id = 1, std::int64_t exit_code = 0,
                            JobState state = JobState::Completed) {
  JobRecord r;
  r.job_id = id;
  r.name = "job1";
  r.command = "run_job1.sh";
  r.account = "acct_1";
  r.user_id = 1001;
  r.dependency = "";
  r.group_id = 100;
  r.requested_nodes = {"1", "10"};
  r.num_tasks_per_socket = 2;
  r.partition = "prod";
  r.time_limit = 60;
  r.qos = "normal";
  r.num_cpu = 4;
  r.num_nodes = 1;
  r.num_gpus = 0;
  r.submit_time = at("2020-10-01T15:30:00Z");
  r.start_time = at("2020-10-01T15:31:00Z");
  r.end_time = at("2020-10-01T16:00:00Z");
  r.exit_code = exit_code;
  r.original_state = state;
  return r;
}

}  // namespace hfo::test
