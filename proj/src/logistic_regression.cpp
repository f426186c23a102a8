#include "hfo/logistic_regression.hpp"

#include <cmath>
#include <deque>
#include <functional>

#include "hfo/error.hpp"
#include "hfo/kernels.hpp"

namespace hfo {

namespace {

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double norm2(std::span<const double> v) { return std::sqrt(kernels::dot(v, v)); }

using Objective = std::function<double(std::span<const double>, std::span<double>)>;

// Limited-memory BFGS (two-loop recursion, history 10) with backtracking.
LbfgsReport lbfgs(const Objective& f, std::vector<double>& x, std::size_t max_iter, double tol) {
  constexpr std::size_t kHistory = 10;
  const std::size_t n = x.size();
  std::vector<double> g(n), g_new(n), dir(n), x_new(n);
  double fx = f(x, g);
  LbfgsReport rep;
  rep.gradient_norm = norm2(g);
  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> hist;
  std::vector<double> alpha(kHistory);
  while (rep.gradient_norm >= tol && rep.iterations < max_iter) {
    // dir = -H g
    dir = g;
    for (std::size_t i = hist.size(); i-- > 0;) {
      alpha[i] = hist[i].rho * kernels::dot(hist[i].s, dir);
      kernels::axpy(-alpha[i], hist[i].y, dir);
    }
    if (!hist.empty()) {
      const auto& last = hist.back();
      const double gamma = kernels::dot(last.s, last.y) / kernels::dot(last.y, last.y);
      for (auto& v : dir) v *= gamma;
    } else {
      const double scale = 1.0 / std::max(1.0, rep.gradient_norm);
      for (auto& v : dir) v *= scale;
    }
    for (std::size_t i = 0; i < hist.size(); ++i) {
      const double beta = hist[i].rho * kernels::dot(hist[i].y, dir);
      kernels::axpy(alpha[i] - beta, hist[i].s, dir);
    }
    for (auto& v : dir) v = -v;
    double slope = kernels::dot(g, dir);
    if (slope >= 0) {  // not a descent direction; restart from steepest descent
      hist.clear();
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i] / std::max(1.0, rep.gradient_norm);
      slope = kernels::dot(g, dir);
    }
    double step = 1.0;
    bool accepted = false;
    double f_new = 0.0;
    for (int tries = 0; tries < 60; ++tries, step *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * dir[i];
      f_new = f(x_new, g_new);
      if (f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      // Near the optimum the decrease drowns in rounding; accept any step
      // that does not raise f beyond rounding and shrinks the gradient.
      if (f_new <= fx + 1e-13 * std::fabs(fx) && norm2(g_new) < rep.gradient_norm) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = x_new[i] - x[i];
      p.y[i] = g_new[i] - g[i];
    }
    const double sy = kernels::dot(p.s, p.y);
    x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    rep.gradient_norm = norm2(g);
    ++rep.iterations;
    if (sy > 1e-300) {
      p.rho = 1.0 / sy;
      hist.push_back(std::move(p));
      if (hist.size() > kHistory) hist.pop_front();
    }
  }
  rep.converged = rep.gradient_norm < tol;
  return rep;
}

}  // namespace

double regularized_log_loss(const TrainingSet& data, std::span<const double> params, double l2,
                            std::span<double> grad) {
  const std::size_t d = data.dim();
  if (params.size() != d + 1) throw DimensionError("logistic parameters must have dim + 1 values");
  const auto w = params.first(d);
  const double b = params[d];
  const bool want_grad = !grad.empty();
  if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.row(i);
    const double z = kernels::dot(w, x) + b;
    const double y = data.outcome(i) == ExitOutcome::Failed ? 1.0 : 0.0;
    loss += softplus(z) - y * z;
    if (want_grad) {
      const double r = sigmoid(z) - y;
      kernels::axpy(r, x, grad.first(d));
      grad[d] += r;
    }
  }
  loss += 0.5 * l2 * kernels::dot(w, w);
  if (want_grad) kernels::axpy(l2, w, grad.first(d));
  return loss;
}

LogisticRegression LogisticRegression::fit(const TrainingSet& data, double l2,
                                           std::size_t max_iterations, double tolerance) {
  if (data.empty()) throw EmptyTraining("logistic regression needs at least one sample");
  if (!(l2 > 0)) throw ConfigError("logistic regression needs a positive L2 strength");
  const std::size_t d = data.dim();
  const double n = static_cast<double>(data.size());
  LogisticRegression m;
  m.mean_.assign(d, 0.0);
  m.inv_scale_.assign(d, 0.0);
  m.weights_.assign(d, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) kernels::axpy(1.0, data.row(i), m.mean_);
  for (auto& v : m.mean_) v /= n;
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.row(i);
    for (std::size_t j = 0; j < d; ++j) var[j] += (x[j] - m.mean_[j]) * (x[j] - m.mean_[j]);
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / n);
    m.inv_scale_[j] = sd > 0 ? 1.0 / sd : 0.0;
  }

  const std::size_t failed = data.count(ExitOutcome::Failed);
  if (failed == 0 || failed == data.size()) {
    m.constant_ = failed == 0 ? ExitOutcome::Completed : ExitOutcome::Failed;
    m.report_.converged = true;
    return m;
  }

  TrainingSet z(d);
  z.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) z.add(m.transform(data.row(i)), data.outcome(i));

  std::vector<double> params(d + 1, 0.0);
  params[d] = std::log(static_cast<double>(failed) / (n - static_cast<double>(failed)));
  m.report_ = lbfgs(
      [&](std::span<const double> p, std::span<double> g) { return regularized_log_loss(z, p, l2, g); },
      params, max_iterations, tolerance);
  std::copy(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(d), m.weights_.begin());
  m.bias_ = params[d];
  return m;
}

LogisticRegression LogisticRegression::from_parameters(std::vector<double> mean,
                                                       std::vector<double> inv_scale,
                                                       std::vector<double> weights, double bias,
                                                       std::optional<ExitOutcome> constant) {
  if (mean.size() != inv_scale.size() || mean.size() != weights.size())
    throw DimensionError("inconsistent logistic regression parameters");
  LogisticRegression m;
  m.mean_ = std::move(mean);
  m.inv_scale_ = std::move(inv_scale);
  m.weights_ = std::move(weights);
  m.bias_ = bias;
  m.constant_ = constant;
  return m;
}

std::vector<double> LogisticRegression::transform(std::span<const double> x) const {
  std::vector<double> z(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) z[j] = (x[j] - mean_[j]) * inv_scale_[j];
  return z;
}

double LogisticRegression::failed_probability(std::span<const double> x) const {
  if (constant_) return *constant_ == ExitOutcome::Failed ? 1.0 : 0.0;
  double z = bias_;
  for (std::size_t j = 0; j < x.size(); ++j) z += weights_[j] * (x[j] - mean_[j]) * inv_scale_[j];
  return sigmoid(z);
}

ExitOutcome LogisticRegression::predict(std::span<const double> x) const {
  return failed_probability(x) > 0.5 ? ExitOutcome::Failed : ExitOutcome::Completed;
}

}  // namespace hfo
