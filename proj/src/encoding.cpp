#include "hfo/encoding.hpp"

#include "hfo/embedder.hpp"
#include "hfo/error.hpp"

namespace hfo {

std::string_view to_string(Encoding e) { return e == Encoding::Int ? "int" : "sb"; }
std::string_view label(Encoding e) { return e == Encoding::Int ? "INT" : "SB"; }

std::optional<Encoding> parse_encoding(std::string_view text) {
  if (text == "int" || text == "INT") return Encoding::Int;
  if (text == "sb" || text == "SB") return Encoding::Sb;
  return std::nullopt;
}

std::string CategoricalDictionary::key(const JobRecord& job, Field f) {
  switch (f) {
    case kName: return job.name;
    case kCommand: return job.command;
    case kAccount: return job.account;
    case kDependency: return job.dependency;
    case kRequestedNodes: {
      std::string joined;
      for (std::size_t i = 0; i < job.requested_nodes.size(); ++i)
        joined += (i ? ";" : "") + job.requested_nodes[i];
      return joined;
    }
    case kPartition: return job.partition;
    case kQos: return job.qos;
    case kFieldCount: break;
  }
  return {};
}

void CategoricalDictionary::observe(const JobRecord& job) {
  for (std::size_t f = 0; f < kFieldCount; ++f) {
    std::string k = key(job, static_cast<Field>(f));
    if (k.empty()) continue;  // missing stays 0
    auto [it, inserted] = ids_[f].try_emplace(k, static_cast<std::int64_t>(values_[f].size() + 1));
    if (inserted) values_[f].push_back(std::move(k));
  }
}

std::int64_t CategoricalDictionary::id(Field f, std::string_view value) const {
  if (value.empty()) return 0;
  auto it = ids_[f].find(std::string(value));
  return it == ids_[f].end() ? 0 : it->second;
}

std::optional<std::string> CategoricalDictionary::value(Field f, std::int64_t id) const {
  if (id < 1 || static_cast<std::size_t>(id) > values_[f].size()) return std::nullopt;
  return values_[f][static_cast<std::size_t>(id - 1)];
}

CategoricalDictionary fit_int_encoder(std::span<const JobRecord> jobs) {
  if (jobs.empty()) throw EmptyTraining("cannot fit categorical dictionary on no jobs");
  CategoricalDictionary dict;
  for (const auto& j : jobs) dict.observe(j);
  return dict;
}

CategoricalDictionary fit_int_encoder(std::span<const JobRecord* const> jobs) {
  if (jobs.empty()) throw EmptyTraining("cannot fit categorical dictionary on no jobs");
  CategoricalDictionary dict;
  for (const auto* j : jobs) dict.observe(*j);
  return dict;
}

void encode_int_into(const JobRecord& job, const CategoricalDictionary& dict,
                     std::span<double> out) {
  if (out.size() != kIntDim) throw DimensionError("INT encoding needs 15 slots");
  using D = CategoricalDictionary;
  auto cat = [&](D::Field f) { return static_cast<double>(dict.id(f, D::key(job, f))); };
  out[0] = cat(D::kName);
  out[1] = cat(D::kCommand);
  out[2] = cat(D::kAccount);
  out[3] = static_cast<double>(job.user_id);
  out[4] = cat(D::kDependency);
  out[5] = static_cast<double>(job.group_id);
  out[6] = cat(D::kRequestedNodes);
  out[7] = static_cast<double>(job.num_tasks_per_socket.value_or(0));
  out[8] = cat(D::kPartition);
  out[9] = static_cast<double>(job.time_limit.value_or(0));
  out[10] = cat(D::kQos);
  out[11] = static_cast<double>(job.num_cpu);
  out[12] = static_cast<double>(job.num_nodes);
  out[13] = static_cast<double>(job.num_gpus);
  out[14] = static_cast<double>(to_epoch(job.submit_time));
}

FeatureVector encode_int(const JobRecord& job, const CategoricalDictionary& dict) {
  FeatureVector v{Encoding::Int, std::vector<double>(kIntDim)};
  encode_int_into(job, dict, v.values);
  return v;
}

std::string render_job_string(const JobRecord& job) {
  std::string s;
  auto field = [&](std::string_view v) {
    if (!s.empty()) s += ", ";
    s += v.empty() ? std::string_view("0") : v;
  };
  auto num = [&](std::int64_t v) { field(std::to_string(v)); };
  auto opt = [&](const std::optional<std::int64_t>& v) { num(v.value_or(0)); };

  field(job.name);
  field(job.command);
  field(job.account);
  num(job.user_id);
  field(job.dependency);
  num(job.group_id);
  // An empty node list is a missing value.
  std::string nodes;
  for (std::size_t i = 0; i < job.requested_nodes.size(); ++i)
    nodes += (i ? ", " : "[") + job.requested_nodes[i];
  if (!nodes.empty()) nodes += "]";
  field(nodes);
  opt(job.num_tasks_per_socket);
  field(job.partition);
  opt(job.time_limit);
  field(job.qos);
  num(job.num_cpu);
  num(job.num_nodes);
  num(job.num_gpus);
  field(format_plain(job.submit_time));
  return s;
}

FeatureVector encode_sb(const JobRecord& job, const Embedder& embedder) {
  FeatureVector v{Encoding::Sb, embedder.embed(render_job_string(job))};
  if (v.values.size() != kSbDim)
    throw EmbedderUnavailable("embedder " + embedder.name() + " returned " +
                              std::to_string(v.values.size()) + " values");
  return v;
}

}  // namespace hfo
