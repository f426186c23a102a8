#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hfo/trace_model.hpp"

namespace hfo {

/// Row-major feature matrix with parallel outcomes. Every row carries a tag
/// (insertion index unless given); KNN breaks distance ties by lower tag.
class TrainingSet {
 public:
  explicit TrainingSet(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return outcomes_.size(); }
  bool empty() const noexcept { return outcomes_.empty(); }

  /// Throws DimensionError if `x` does not have dim() values.
  void add(std::span<const double> x, ExitOutcome y);
  void add(std::span<const double> x, ExitOutcome y, std::uint64_t tag);
  void reserve(std::size_t n) {
    data_.reserve(n * dim_);
    outcomes_.reserve(n);
    tags_.reserve(n);
  }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
  ExitOutcome outcome(std::size_t i) const { return outcomes_[i]; }
  std::uint64_t tag(std::size_t i) const { return tags_[i]; }
  std::span<const ExitOutcome> outcomes() const { return outcomes_; }
  std::size_t count(ExitOutcome y) const;

 private:
  std::size_t dim_;
  std::vector<double> data_;
  std::vector<ExitOutcome> outcomes_;
  std::vector<std::uint64_t> tags_;
};

}  // namespace hfo
