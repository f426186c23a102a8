#pragma once

#include <utility>
#include <vector>

#include "hfo/evaluation.hpp"

namespace hfo::test {

// Per-class precision / recall / F1 recomputed from raw pairs, with Failed
// or Completed as the positive class.
inline ClassMetrics class_oracle(const std::vector<std::pair<ExitOutcome, ExitOutcome>>& pairs,
                                 ExitOutcome positive) {
  double hit = 0, predicted = 0, actual = 0;
  for (const auto& [pred, truth] : pairs) {
    predicted += pred == positive;
    actual += truth == positive;
    hit += pred == positive && truth == positive;
  }
  ClassMetrics m;
  m.precision = predicted > 0 ? hit / predicted : 0.0;
  m.recall = actual > 0 ? hit / actual : 0.0;
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

inline MetricsReport metrics_oracle(const std::vector<std::pair<ExitOutcome, ExitOutcome>>& pairs) {
  MetricsReport r;
  r.failed = class_oracle(pairs, ExitOutcome::Failed);
  r.completed = class_oracle(pairs, ExitOutcome::Completed);
  r.macro = {(r.failed.precision + r.completed.precision) / 2, (r.failed.recall + r.completed.recall) / 2,
             (r.failed.f1 + r.completed.f1) / 2};
  return r;
}

}  // namespace hfo::test
