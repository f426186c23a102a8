#include "hfo/knn.hpp"

#include <algorithm>
#include <string>

#include "hfo/distance.hpp"
#include "hfo/error.hpp"

namespace hfo {

KnnModel::KnnModel(std::size_t dim, std::size_t k, Distance distance, int p)
    : dim_(dim), k_(k), distance_(distance), p_(p) {
  if (k == 0) throw ConfigError("KNN needs k >= 1");
  if (p < 1) throw ConfigError("Minkowski order must be >= 1");
}

KnnModel KnnModel::fit(const TrainingSet& data, std::size_t k, Distance distance, int p) {
  if (data.empty()) throw EmptyTraining("KNN needs at least one reference point");
  KnnModel m(data.dim(), k, distance, p);
  for (std::size_t i = 0; i < data.size(); ++i) m.add(data.row(i), data.outcome(i), data.tag(i));
  return m;
}

void KnnModel::add(std::span<const double> x, ExitOutcome y, std::uint64_t tag) {
  if (x.size() != dim_)
    throw DimensionError("KNN reference of length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(dim_));
  data_.insert(data_.end(), x.begin(), x.end());
  norms_.push_back(distance_ == Distance::Cosine ? detail::norm(x) : 0.0);
  outcomes_.push_back(y);
  tags_.push_back(tag);
  failed_ += y == ExitOutcome::Failed;
}

std::size_t KnnModel::remove_if(const std::function<bool(std::uint64_t)>& pred) {
  std::size_t out = 0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (pred(tags_[i])) {
      failed_ -= outcomes_[i] == ExitOutcome::Failed;
      continue;
    }
    if (out != i) {
      std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(i * dim_), dim_,
                  data_.begin() + static_cast<std::ptrdiff_t>(out * dim_));
      norms_[out] = norms_[i];
      outcomes_[out] = outcomes_[i];
      tags_[out] = tags_[i];
    }
    ++out;
  }
  data_.resize(out * dim_);
  norms_.resize(out);
  outcomes_.resize(out);
  tags_.resize(out);
  return n - out;
}

void KnnModel::clear() {
  data_.clear();
  norms_.clear();
  outcomes_.clear();
  tags_.clear();
  failed_ = 0;
}

KnnModel KnnModel::extended(const TrainingSet& more) const {
  if (!more.empty() && more.dim() != dim_)
    throw DimensionError("KNN extension of dimension " + std::to_string(more.dim()) +
                         ", expected " + std::to_string(dim_));
  KnnModel m = *this;
  for (std::size_t i = 0; i < more.size(); ++i) m.add(more.row(i), more.outcome(i), more.tag(i));
  return m;
}

ExitOutcome KnnModel::majority_label() const noexcept {
  return 2 * failed_ > size() ? ExitOutcome::Failed : ExitOutcome::Completed;
}

double KnnModel::distance(std::span<const double> x, std::size_t ref) const {
  if (distance_ == Distance::Cosine)
    return detail::cosine_from_norms(kernels::dot(x, row(ref)), detail::norm(x), norms_[ref]);
  return minkowski_distance(x, row(ref), p_);
}

namespace {

bool closer(const Neighbor& a, const Neighbor& b) {
  return a.distance < b.distance || (a.distance == b.distance && a.tag < b.tag);
}

// Keeps `best` sorted and at most `want` long.
void offer(std::vector<Neighbor>& best, const Neighbor& cand, std::size_t want) {
  if (best.size() == want && !closer(cand, best.back())) return;
  best.insert(std::upper_bound(best.begin(), best.end(), cand, closer), cand);
  if (best.size() > want) best.pop_back();
}

}  // namespace

double KnnModel::ref_distance(const double* x, double qnorm, std::size_t i) const {
  const auto& k = kernels::active();
  const double* r = data_.data() + i * dim_;
  if (distance_ == Distance::Cosine) return detail::cosine_from_norms(k.dot(x, r, dim_), qnorm, norms_[i]);
  if (p_ == 2) return std::sqrt(k.squared_l2(x, r, dim_));
  if (p_ == 1) return k.l1(x, r, dim_);
  return minkowski_distance(std::span<const double>(x, dim_), row(i), p_);
}

std::vector<Neighbor> KnnModel::neighbors(std::span<const double> x) const {
  if (x.size() != dim_)
    throw DimensionError("KNN query of length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(dim_));
  const std::size_t want = std::min(k_, size());
  std::vector<Neighbor> best;
  best.reserve(want + 1);
  const double qnorm = distance_ == Distance::Cosine ? detail::norm(x) : 0.0;
  for (std::size_t i = 0; i < size(); ++i) offer(best, {i, ref_distance(x.data(), qnorm, i), tags_[i]}, want);
  return best;
}

ExitOutcome KnnModel::vote(const std::vector<Neighbor>& nn) const {
  std::size_t failed = 0;
  for (const auto& n : nn) failed += outcomes_[n.index] == ExitOutcome::Failed;
  const std::size_t completed = nn.size() - failed;
  if (failed != completed) return failed > completed ? ExitOutcome::Failed : ExitOutcome::Completed;
  return majority_label();
}

ExitOutcome KnnModel::predict(std::span<const double> x) const {
  if (size() == 0) throw EmptyTraining("KNN reference set is empty");
  return vote(neighbors(x));
}

std::vector<ExitOutcome> KnnModel::predict_many(std::span<const double> queries) const {
  if (dim_ == 0 || queries.size() % dim_ != 0)
    throw DimensionError("KNN query block is not a multiple of " + std::to_string(dim_));
  const std::size_t nq = queries.size() / dim_;
  if (nq == 0) return {};
  if (size() == 0) throw EmptyTraining("KNN reference set is empty");
  // About 256 KiB of references and of queries per tile.
  const std::size_t tile = std::max<std::size_t>(8, (256 * 1024) / (dim_ * sizeof(double)));
  const std::size_t want = std::min(k_, size());
  std::vector<ExitOutcome> out(nq);
  std::vector<std::vector<Neighbor>> best(std::min(tile, nq));
  std::vector<double> qnorm(best.size());
  for (std::size_t q0 = 0; q0 < nq; q0 += tile) {
    const std::size_t q1 = std::min(nq, q0 + tile);
    for (std::size_t q = q0; q < q1; ++q) {
      best[q - q0].clear();
      qnorm[q - q0] =
          distance_ == Distance::Cosine ? detail::norm(queries.subspan(q * dim_, dim_)) : 0.0;
    }
    for (std::size_t r0 = 0; r0 < size(); r0 += tile) {
      const std::size_t r1 = std::min(size(), r0 + tile);
      for (std::size_t q = q0; q < q1; ++q) {
        const double* x = queries.data() + q * dim_;
        for (std::size_t i = r0; i < r1; ++i)
          offer(best[q - q0], {i, ref_distance(x, qnorm[q - q0], i), tags_[i]}, want);
      }
    }
    for (std::size_t q = q0; q < q1; ++q) out[q] = vote(best[q - q0]);
  }
  return out;
}

}  // namespace hfo
