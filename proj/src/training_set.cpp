#include "hfo/training_set.hpp"

#include <algorithm>
#include <string>

#include "hfo/error.hpp"

namespace hfo {

void TrainingSet::add(std::span<const double> x, ExitOutcome y) { add(x, y, outcomes_.size()); }

void TrainingSet::add(std::span<const double> x, ExitOutcome y, std::uint64_t tag) {
  if (x.size() != dim_)
    throw DimensionError("training row of length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(dim_));
  data_.insert(data_.end(), x.begin(), x.end());
  outcomes_.push_back(y);
  tags_.push_back(tag);
}

std::size_t TrainingSet::count(ExitOutcome y) const {
  return static_cast<std::size_t>(std::count(outcomes_.begin(), outcomes_.end(), y));
}

}  // namespace hfo
