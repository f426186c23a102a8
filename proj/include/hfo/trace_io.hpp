#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "hfo/trace_model.hpp"

namespace hfo {

/// Header of the CsvV1 trace format, byte for byte.
inline constexpr std::string_view kCsvV1Header =
    "job_id,name,command,account,user_id,dependency,group_id,requested_nodes,"
    "num_tasks_per_socket,partition,time_limit,qos,num_cpu,num_nodes,num_gpus,"
    "submit_time,start_time,end_time,exit_code,original_state";

/// Parses a CsvV1 trace. Rows keep file order; empty fields become absent
/// optionals. Throws ParseError (with line number) on malformed input and
/// ValidationError on records that break JobRecord invariants.
std::vector<JobRecord> read_trace(std::istream& in);
std::vector<JobRecord> read_trace(const std::filesystem::path& path);

/// Emits CsvV1. Output is a pure function of the input records.
void write_trace(std::span<const JobRecord> jobs, std::ostream& out);
/// Throws IoError when the file cannot be written.
void write_trace(std::span<const JobRecord> jobs, const std::filesystem::path& path);

}  // namespace hfo
