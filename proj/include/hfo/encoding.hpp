#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hfo/trace_model.hpp"

namespace hfo {

class Embedder;

enum class Encoding { Int, Sb };

inline constexpr std::size_t kIntDim = 15;
inline constexpr std::size_t kSbDim = 384;

constexpr std::size_t dimension(Encoding e) { return e == Encoding::Int ? kIntDim : kSbDim; }
/// "int" / "sb"
std::string_view to_string(Encoding e);
/// "INT" / "SB"
std::string_view label(Encoding e);
std::optional<Encoding> parse_encoding(std::string_view text);

struct FeatureVector {
  Encoding encoding = Encoding::Int;
  std::vector<double> values;

  std::span<const double> view() const { return values; }
  std::size_t size() const { return values.size(); }
};

/// Categorical feature value -> dense integer id, frozen after fitting.
/// Ids are 1..M in first-seen order; 0 stands for unseen or missing.
class CategoricalDictionary {
 public:
  enum Field : std::size_t {
    kName,
    kCommand,
    kAccount,
    kDependency,
    kRequestedNodes,
    kPartition,
    kQos,
    kFieldCount
  };

  std::int64_t id(Field f, std::string_view value) const;
  /// Reverse lookup; nullopt for 0 or out-of-range ids.
  std::optional<std::string> value(Field f, std::int64_t id) const;
  std::size_t size(Field f) const { return values_[f].size(); }

  /// Value of a categorical field as it enters the dictionary
  /// (requested nodes are joined with ';').
  static std::string key(const JobRecord& job, Field f);

 private:
  friend CategoricalDictionary fit_int_encoder(std::span<const JobRecord> jobs);
  friend CategoricalDictionary fit_int_encoder(std::span<const JobRecord* const> jobs);
  void observe(const JobRecord& job);

  std::array<std::unordered_map<std::string, std::int64_t>, kFieldCount> ids_;
  std::array<std::vector<std::string>, kFieldCount> values_;
};

/// Throws EmptyTraining on empty input.
CategoricalDictionary fit_int_encoder(std::span<const JobRecord> jobs);
CategoricalDictionary fit_int_encoder(std::span<const JobRecord* const> jobs);

/// 15 features in the order name, command, account, user id, dependency,
/// group id, requested nodes, tasks per socket, partition, time limit, qos,
/// cpus, nodes, gpus, submit time (seconds since the Unix epoch).
FeatureVector encode_int(const JobRecord& job, const CategoricalDictionary& dict);
void encode_int_into(const JobRecord& job, const CategoricalDictionary& dict, std::span<double> out);

/// Comma-joined rendering of the fifteen feature values, e.g.
/// "job1, run_job1.sh, acct_1, 1001, 0, 100, [n1, n2], 0, prod, 60, normal, 4, 1, 0, 2020-10-01 15:30:00".
/// Absent and empty values render as "0".
std::string render_job_string(const JobRecord& job);

/// embed(render_job_string(job)). Propagates EmbedderUnavailable.
FeatureVector encode_sb(const JobRecord& job, const Embedder& embedder);

}  // namespace hfo
