#include "hfo/trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>
#include <utility>

#include "hfo/error.hpp"
#include "hfo/random.hpp"

namespace hfo {

namespace {

// Split quality sum over children of (c0^2 + c1^2) / n, larger is purer,
// held as an exact fraction so that equal splits compare equal.
struct Score {
  unsigned __int128 num = 0;
  unsigned __int128 den = 0;  // 0 marks "no split yet"

  int compare(const Score& o) const {
    if (den == 0 || o.den == 0) return den == 0 ? (o.den == 0 ? 0 : -1) : 1;
    const auto a = num * o.den, b = o.num * den;
    return a < b ? -1 : (a > b ? 1 : 0);
  }
};

struct Split {
  std::int32_t feature = -1;
  double threshold = 0.0;
  Score score;
};

// Midpoint that stays strictly below `hi`.
double midpoint(double lo, double hi) {
  const double m = lo + (hi - lo) / 2.0;
  return m < hi ? m : lo;
}

// Column-major copy of the training matrix, shared by all trees of a forest.
struct Columns {
  explicit Columns(const TrainingSet& data) : n(data.size()), values(data.size() * data.dim()) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = data.row(i);
      for (std::size_t f = 0; f < row.size(); ++f) values[f * n + i] = row[f];
    }
  }
  const double* column(std::size_t f) const { return values.data() + f * n; }

  std::size_t n;
  std::vector<double> values;
};

class Builder {
 public:
  Builder(const TrainingSet& data, const Columns& cols, std::size_t max_features, std::uint64_t seed)
      : data_(data), cols_(cols), max_features_(max_features), rng_(seed), order_(data.dim()) {
    std::iota(order_.begin(), order_.end(), 0);
  }

  std::vector<DecisionTree::Node> build(std::vector<std::size_t> idx) {
    std::vector<DecisionTree::Node> nodes;
    struct Task {
      std::int32_t node;
      std::size_t lo, hi;
    };
    nodes.emplace_back();
    std::vector<Task> stack{{0, 0, idx.size()}};
    while (!stack.empty()) {
      const Task t = stack.back();
      stack.pop_back();
      const std::span<std::size_t> range(idx.data() + t.lo, t.hi - t.lo);
      std::size_t failed = 0;
      for (auto i : range) failed += data_.outcome(i) == ExitOutcome::Failed;
      nodes[t.node].p_failed = static_cast<double>(failed) / static_cast<double>(range.size());
      if (failed == 0 || failed == range.size()) continue;
      const Split s = best_split(range);
      if (s.feature < 0) continue;
      // Stable partition through a reusable buffer.
      std::size_t n_left = 0;
      scratch_.clear();
      const double* col = cols_.column(static_cast<std::size_t>(s.feature));
      for (auto i : range) {
        if (col[i] <= s.threshold)
          range[n_left++] = i;
        else
          scratch_.push_back(i);
      }
      std::copy(scratch_.begin(), scratch_.end(), range.begin() + static_cast<std::ptrdiff_t>(n_left));
      const std::size_t split_at = t.lo + n_left;
      const auto left = static_cast<std::int32_t>(nodes.size());
      nodes.emplace_back();
      nodes.emplace_back();
      nodes[t.node].feature = s.feature;
      nodes[t.node].threshold = s.threshold;
      nodes[t.node].left = left;
      nodes[t.node].right = left + 1;
      stack.push_back({left + 1, split_at, t.hi});
      stack.push_back({left, t.lo, split_at});
    }
    return nodes;
  }

 private:
  Split best_split(std::span<const std::size_t> range) {
    const std::size_t d = data_.dim();
    const bool subsample = max_features_ > 0 && max_features_ < d;
    if (subsample) {
      // Fresh random feature order per node.
      for (std::size_t i = d - 1; i > 0; --i) std::swap(order_[i], order_[rng_.below(i + 1)]);
    }
    Split best;
    std::size_t scored = 0;
    for (std::size_t k = 0; k < d; ++k) {
      if (subsample && scored >= max_features_) break;
      const std::size_t f = subsample ? order_[k] : k;
      if (score_feature(range, f, best)) ++scored;
    }
    return best;
  }

  // Returns false when the feature is constant over the node.
  bool score_feature(std::span<const std::size_t> range, std::size_t f, Split& best) {
    // Values of each class sorted separately, then merged by distinct value.
    failed_.clear();
    completed_.clear();
    const double* col = cols_.column(f);
    for (auto i : range) (data_.outcome(i) == ExitOutcome::Failed ? failed_ : completed_).push_back(col[i]);
    std::sort(failed_.begin(), failed_.end());
    std::sort(completed_.begin(), completed_.end());
    const std::size_t nf = failed_.size(), nc = completed_.size();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    auto head = [&](std::size_t a, std::size_t b) {
      return std::min(a < nf ? failed_[a] : kInf, b < nc ? completed_[b] : kInf);
    };
    const double lowest = head(0, 0);
    const double highest = std::max(nf ? failed_.back() : -kInf, nc ? completed_.back() : -kInf);
    if (lowest == highest) return false;

    using u128 = unsigned __int128;
    const u128 n = nf + nc, total_failed = nf;
    const auto fi = static_cast<std::int32_t>(f);
    std::size_t a = 0, b = 0;
    double v = lowest;
    while (true) {
      while (a < nf && failed_[a] == v) ++a;
      while (b < nc && completed_[b] == v) ++b;
      if (a == nf && b == nc) break;
      const double next = head(a, b);
      const u128 nl = a + b, nr = n - nl;
      const u128 l1 = a, l0 = b;
      const u128 r1 = total_failed - l1, r0 = nr - r1;
      // Cheap screen first; only near-ties need the exact comparison.
      const double approx = static_cast<double>(l0 * l0 + l1 * l1) / static_cast<double>(nl) +
                            static_cast<double>(r0 * r0 + r1 * r1) / static_cast<double>(nr);
      if (best.score.den == 0 || approx >= best_approx_ * (1.0 - 1e-9)) {
        const Score score{(l0 * l0 + l1 * l1) * nr + (r0 * r0 + r1 * r1) * nl, nl * nr};
        const double thr = midpoint(v, next);
        const int cmp = score.compare(best.score);
        if (cmp > 0 ||
            (cmp == 0 && (fi < best.feature || (fi == best.feature && thr < best.threshold)))) {
          best = {fi, thr, score};
          best_approx_ = approx;
        }
      }
      v = next;
    }
    return true;
  }

  const TrainingSet& data_;
  const Columns& cols_;
  std::size_t max_features_;
  Rng rng_;
  std::vector<std::size_t> order_;
  std::vector<double> failed_, completed_;
  std::vector<std::size_t> scratch_;
  double best_approx_ = 0.0;  // float image of the current best score
};

DecisionTree grow(const TrainingSet& data, const Columns& cols, std::span<const std::size_t> sample,
                  std::size_t max_features, std::uint64_t seed) {
  if (sample.empty()) throw EmptyTraining("decision tree needs at least one sample");
  Builder b(data, cols, max_features, seed);
  return DecisionTree::from_nodes(b.build(std::vector<std::size_t>(sample.begin(), sample.end())), data.dim());
}

}  // namespace

DecisionTree DecisionTree::fit(const TrainingSet& data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  return fit(data, all, 0, 0);
}

DecisionTree DecisionTree::fit(const TrainingSet& data, std::span<const std::size_t> sample,
                               std::size_t max_features, std::uint64_t seed) {
  if (sample.empty()) throw EmptyTraining("decision tree needs at least one sample");
  return grow(data, Columns(data), sample, max_features, seed);
}

DecisionTree DecisionTree::from_nodes(std::vector<Node> nodes, std::size_t dim) {
  if (nodes.empty()) throw ConfigError("decision tree without nodes");
  const auto n = static_cast<std::int32_t>(nodes.size());
  for (const auto& node : nodes) {
    if (node.feature >= 0 &&
        (node.feature >= static_cast<std::int32_t>(dim) || node.left <= 0 || node.right <= 0 ||
         node.left >= n || node.right >= n))
      throw ConfigError("malformed decision tree node");
  }
  DecisionTree t;
  t.nodes_ = std::move(nodes);
  t.dim_ = dim;
  return t;
}

double DecisionTree::failed_probability(std::span<const double> x) const {
  std::int32_t i = 0;
  while (nodes_[i].feature >= 0)
    i = x[nodes_[i].feature] <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
  return nodes_[i].p_failed;
}

ExitOutcome DecisionTree::predict(std::span<const double> x) const {
  return failed_probability(x) > 0.5 ? ExitOutcome::Failed : ExitOutcome::Completed;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes_[i].feature >= 0) d[nodes_[i].left] = d[nodes_[i].right] = d[i] + 1;
  }
  return best;
}

RandomForest RandomForest::fit(const TrainingSet& data, std::size_t n_trees, std::uint64_t seed,
                               unsigned threads) {
  if (data.empty()) throw EmptyTraining("random forest needs at least one sample");
  if (n_trees == 0) throw ConfigError("random forest needs at least one tree");
  const std::size_t n = data.size();
  const auto mtry =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(data.dim())))));
  const Columns cols(data);
  RandomForest forest;
  forest.trees_.resize(n_trees);
  auto grow_tree = [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    std::vector<std::size_t> sample(n);
    for (auto& s : sample) s = rng.below(n);
    forest.trees_[t] = grow(data, cols, sample, mtry, rng.next_u64());
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n_trees)));
  if (workers == 1) {
    for (std::size_t t = 0; t < n_trees; ++t) grow_tree(t);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < n_trees; t += workers) grow_tree(t);
      });
  }
  return forest;
}

RandomForest RandomForest::from_trees(std::vector<DecisionTree> trees) {
  if (trees.empty()) throw ConfigError("random forest without trees");
  RandomForest f;
  f.trees_ = std::move(trees);
  return f;
}

double RandomForest::failed_probability(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& t : trees_) s += t.failed_probability(x);
  return s / static_cast<double>(trees_.size());
}

ExitOutcome RandomForest::predict(std::span<const double> x) const {
  return failed_probability(x) > 0.5 ? ExitOutcome::Failed : ExitOutcome::Completed;
}

}  // namespace hfo
