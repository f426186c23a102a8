#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hfo/training_set.hpp"

namespace hfo {

enum class Distance { Cosine, Minkowski };

struct Neighbor {
  std::size_t index;  // position in the reference set
  double distance;
  std::uint64_t tag;
};

/// Instance-based classifier over a stored reference set. The k references
/// closest to the query vote by simple majority; equal distances are
/// ordered by lower tag. A tied vote resolves to the reference set's
/// majority label (Completed if that ties too).
class KnnModel {
 public:
  KnnModel(std::size_t dim, std::size_t k, Distance distance, int p);

  static KnnModel fit(const TrainingSet& data, std::size_t k, Distance distance, int p);

  /// Throws EmptyTraining with no references, DimensionError on a length mismatch.
  ExitOutcome predict(std::span<const double> x) const;
  /// Same as predict for each row of `queries` (row-major, dim() columns),
  /// tiled so a block of references is reused across a block of queries.
  std::vector<ExitOutcome> predict_many(std::span<const double> queries) const;
  /// The min(k, size()) nearest references, closest first.
  std::vector<Neighbor> neighbors(std::span<const double> x) const;
  double distance(std::span<const double> x, std::size_t ref) const;

  /// New model with `more` appended; this one is left untouched.
  KnnModel extended(const TrainingSet& more) const;

  void add(std::span<const double> x, ExitOutcome y, std::uint64_t tag);
  /// Drops every reference whose tag satisfies `pred`; preserves order.
  std::size_t remove_if(const std::function<bool(std::uint64_t)>& pred);
  void clear();

  std::size_t size() const noexcept { return outcomes_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t k() const noexcept { return k_; }
  Distance metric() const noexcept { return distance_; }
  int p() const noexcept { return p_; }
  ExitOutcome majority_label() const noexcept;

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  ExitOutcome outcome(std::size_t i) const { return outcomes_[i]; }
  std::uint64_t tag(std::size_t i) const { return tags_[i]; }

 private:
  double ref_distance(const double* x, double qnorm, std::size_t i) const;
  ExitOutcome vote(const std::vector<Neighbor>& nn) const;

  std::size_t dim_;
  std::size_t k_;
  Distance distance_;
  int p_;
  std::vector<double> data_;
  std::vector<double> norms_;  // Euclidean norms, used by the cosine metric
  std::vector<ExitOutcome> outcomes_;
  std::vector<std::uint64_t> tags_;
  std::size_t failed_ = 0;
};

}  // namespace hfo
