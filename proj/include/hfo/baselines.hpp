#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "hfo/random.hpp"
#include "hfo/training_set.hpp"

namespace hfo {

/// Always answers the most frequent training label (Completed on a tie).
class MajorityModel {
 public:
  static MajorityModel fit(const TrainingSet& data);
  explicit MajorityModel(ExitOutcome label) : label_(label) {}
  ExitOutcome predict() const noexcept { return label_; }
  ExitOutcome label() const noexcept { return label_; }

 private:
  ExitOutcome label_;
};

/// Draws each prediction uniformly from the distinct training labels using
/// a seeded stream. Copies share the stream; predict is thread-safe but the
/// answer depends on call order.
class RandomModel {
 public:
  static RandomModel fit(const TrainingSet& data, std::uint64_t seed);
  /// Rebuilds a model positioned `draws` predictions into its stream.
  RandomModel(std::vector<ExitOutcome> labels, std::uint64_t seed, std::uint64_t draws = 0);

  ExitOutcome predict() const;

  const std::vector<ExitOutcome>& labels() const noexcept { return labels_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t draws() const;

 private:
  struct Stream {
    explicit Stream(std::uint64_t seed) : rng(seed) {}
    std::mutex mu;
    Rng rng;
    std::uint64_t draws = 0;
  };
  std::vector<ExitOutcome> labels_;
  std::uint64_t seed_;
  std::shared_ptr<Stream> stream_;
};

}  // namespace hfo
