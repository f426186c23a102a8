#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hfo/training_set.hpp"

namespace hfo {

/// Regularized log-loss of a linear model over `data`:
///   sum_i [softplus(z_i) - y_i z_i] + (l2 / 2) |w|^2,  z_i = w . x_i + b
/// with y = 1 for Failed. `params` is [w_0 .. w_{d-1}, b]; the intercept is
/// not penalized. Writes the gradient into `grad` when it is non-empty.
double regularized_log_loss(const TrainingSet& data, std::span<const double> params, double l2,
                            std::span<double> grad);

struct LbfgsReport {
  std::size_t iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

/// L2-regularized logistic regression on standardized features
/// (training mean / population standard deviation; constant features map to 0),
/// solved with L-BFGS until the gradient norm drops below `tolerance` or
/// `max_iterations` is reached.
class LogisticRegression {
 public:
  static LogisticRegression fit(const TrainingSet& data, double l2 = 1.0,
                                std::size_t max_iterations = 1000, double tolerance = 1e-6);
  static LogisticRegression from_parameters(std::vector<double> mean, std::vector<double> inv_scale,
                                            std::vector<double> weights, double bias,
                                            std::optional<ExitOutcome> constant);

  /// P(Failed | x).
  double failed_probability(std::span<const double> x) const;
  ExitOutcome predict(std::span<const double> x) const;

  /// Standardized copy of `x` as seen by the weights.
  std::vector<double> transform(std::span<const double> x) const;

  const std::vector<double>& mean() const noexcept { return mean_; }
  const std::vector<double>& inv_scale() const noexcept { return inv_scale_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }
  /// Set when the training data held a single class; the model then
  /// always predicts it.
  std::optional<ExitOutcome> constant() const noexcept { return constant_; }
  const LbfgsReport& report() const noexcept { return report_; }

 private:
  std::vector<double> mean_;
  std::vector<double> inv_scale_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  std::optional<ExitOutcome> constant_;
  LbfgsReport report_;
};

}  // namespace hfo
