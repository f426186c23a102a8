#include "hfo/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>

#include "hfo/error.hpp"

namespace hfo {

namespace {

constexpr std::size_t kColumns = 20;

// Reads one RFC-4180 record. Returns false at clean end of input.
// `line` is advanced past every physical line consumed.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  const std::size_t start_line = line + 1;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty()) throw ParseError(start_line, "quote inside unquoted field");
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      if (in.peek() != '\n') throw ParseError(start_line, "stray carriage return");
    } else if (c == '\n') {
      ++line;
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) throw ParseError(start_line, "unterminated quoted field");
  if (!any) return false;
  ++line;
  fields.push_back(std::move(field));
  return true;
}

std::int64_t parse_int(const std::string& s, std::size_t line, const char* column) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != end)
    throw ParseError(line, std::string("invalid integer in ") + column + ": '" + s + "'");
  return v;
}

std::optional<std::int64_t> parse_opt_int(const std::string& s, std::size_t line,
                                          const char* column) {
  if (s.empty()) return std::nullopt;
  return parse_int(s, line, column);
}

Timestamp parse_ts(const std::string& s, std::size_t line, const char* column) {
  auto t = parse_iso(s);
  if (!t) throw ParseError(line, std::string("invalid timestamp in ") + column + ": '" + s + "'");
  return *t;
}

std::optional<Timestamp> parse_opt_ts(const std::string& s, std::size_t line,
                                      const char* column) {
  if (s.empty()) return std::nullopt;
  return parse_ts(s, line, column);
}

std::vector<std::string> split_nodes(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(';', pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

JobRecord parse_row(const std::vector<std::string>& f, std::size_t line) {
  JobRecord r;
  r.job_id = parse_int(f[0], line, "job_id");
  r.name = f[1];
  r.command = f[2];
  r.account = f[3];
  r.user_id = parse_int(f[4], line, "user_id");
  r.dependency = f[5];
  r.group_id = parse_int(f[6], line, "group_id");
  r.requested_nodes = split_nodes(f[7]);
  r.num_tasks_per_socket = parse_opt_int(f[8], line, "num_tasks_per_socket");
  r.partition = f[9];
  r.time_limit = parse_opt_int(f[10], line, "time_limit");
  r.qos = f[11];
  r.num_cpu = parse_int(f[12], line, "num_cpu");
  r.num_nodes = parse_int(f[13], line, "num_nodes");
  r.num_gpus = parse_int(f[14], line, "num_gpus");
  r.submit_time = parse_ts(f[15], line, "submit_time");
  r.start_time = parse_opt_ts(f[16], line, "start_time");
  r.end_time = parse_opt_ts(f[17], line, "end_time");
  r.exit_code = parse_opt_int(f[18], line, "exit_code");
  if (!f[19].empty()) {
    auto st = parse_job_state(f[19]);
    if (!st) throw ParseError(line, "unknown original_state '" + f[19] + "'");
    r.original_state = *st;
  }
  return r;
}

void put_field(std::ostream& out, std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

template <typename T>
void put_opt(std::ostream& out, const std::optional<T>& v) {
  if (v) out << *v;
}

}  // namespace

std::vector<JobRecord> read_trace(std::istream& in) {
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!read_record(in, fields, line)) throw ParseError(1, "missing header");
  {
    std::string header;
    for (std::size_t i = 0; i < fields.size(); ++i) header += (i ? "," : "") + fields[i];
    if (header != kCsvV1Header) throw ParseError(1, "header does not match CsvV1 schema");
  }
  std::vector<JobRecord> jobs;
  std::unordered_set<std::int64_t> ids;
  while (true) {
    const std::size_t row_line = line + 1;
    if (!read_record(in, fields, line)) break;
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
    if (fields.size() != kColumns)
      throw ParseError(row_line, "expected " + std::to_string(kColumns) + " fields, got " +
                                     std::to_string(fields.size()));
    JobRecord r = parse_row(fields, row_line);
    validate(r);
    if (!ids.insert(r.job_id).second)
      throw ValidationError("duplicate job_id " + std::to_string(r.job_id));
    jobs.push_back(std::move(r));
  }
  return jobs;
}

std::vector<JobRecord> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace " + path.string());
  return read_trace(in);
}

void write_trace(std::span<const JobRecord> jobs, std::ostream& out) {
  out << kCsvV1Header << '\n';
  std::string nodes;
  for (const auto& r : jobs) {
    nodes.clear();
    for (std::size_t i = 0; i < r.requested_nodes.size(); ++i)
      nodes += (i ? ";" : "") + r.requested_nodes[i];
    out << r.job_id << ',';
    put_field(out, r.name);
    out << ',';
    put_field(out, r.command);
    out << ',';
    put_field(out, r.account);
    out << ',' << r.user_id << ',';
    put_field(out, r.dependency);
    out << ',' << r.group_id << ',';
    put_field(out, nodes);
    out << ',';
    put_opt(out, r.num_tasks_per_socket);
    out << ',';
    put_field(out, r.partition);
    out << ',';
    put_opt(out, r.time_limit);
    out << ',';
    put_field(out, r.qos);
    out << ',' << r.num_cpu << ',' << r.num_nodes << ',' << r.num_gpus << ','
        << format_iso(r.submit_time) << ',';
    if (r.start_time) out << format_iso(*r.start_time);
    out << ',';
    if (r.end_time) out << format_iso(*r.end_time);
    out << ',';
    put_opt(out, r.exit_code);
    out << ',';
    if (r.original_state) out << to_string(*r.original_state);
    out << '\n';
  }
}

void write_trace(std::span<const JobRecord> jobs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write trace " + path.string());
  write_trace(jobs, out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace hfo
