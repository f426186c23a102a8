#include "hfo/baselines.hpp"

#include "hfo/error.hpp"

namespace hfo {

MajorityModel MajorityModel::fit(const TrainingSet& data) {
  if (data.empty()) throw EmptyTraining("majority baseline needs at least one label");
  const std::size_t failed = data.count(ExitOutcome::Failed);
  return MajorityModel(2 * failed > data.size() ? ExitOutcome::Failed : ExitOutcome::Completed);
}

RandomModel RandomModel::fit(const TrainingSet& data, std::uint64_t seed) {
  if (data.empty()) throw EmptyTraining("random baseline needs at least one label");
  std::vector<ExitOutcome> labels;
  if (data.count(ExitOutcome::Completed) > 0) labels.push_back(ExitOutcome::Completed);
  if (data.count(ExitOutcome::Failed) > 0) labels.push_back(ExitOutcome::Failed);
  return RandomModel(std::move(labels), seed);
}

RandomModel::RandomModel(std::vector<ExitOutcome> labels, std::uint64_t seed, std::uint64_t draws)
    : labels_(std::move(labels)), seed_(seed), stream_(std::make_shared<Stream>(seed)) {
  if (labels_.empty()) throw EmptyTraining("random baseline without labels");
  for (std::uint64_t i = 0; i < draws; ++i) predict();
}

ExitOutcome RandomModel::predict() const {
  std::lock_guard lock(stream_->mu);
  ++stream_->draws;
  const bool heads = stream_->rng.coin();
  if (labels_.size() == 1) return labels_.front();
  return heads ? labels_[1] : labels_[0];
}

std::uint64_t RandomModel::draws() const {
  std::lock_guard lock(stream_->mu);
  return stream_->draws;
}

}  // namespace hfo
