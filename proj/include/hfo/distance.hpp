#pragma once

#include <cmath>
#include <span>

#include "hfo/encoding.hpp"
#include "hfo/kernels.hpp"

namespace hfo {

/// 1 - x.y / (|x||y|). Defined as 1 when either vector is all-zero.
double cosine_distance(std::span<const double> x, std::span<const double> y);
/// (sum |x_i - y_i|^p)^(1/p), p >= 1.
double minkowski_distance(std::span<const double> x, std::span<const double> y, int p);

/// Checked overloads; throw DimensionError on length mismatch and
/// ConfigError for p < 1.
double cosine_distance(const FeatureVector& x, const FeatureVector& y);
double minkowski_distance(const FeatureVector& x, const FeatureVector& y, int p);

namespace detail {

/// Cosine distance with precomputed Euclidean norms.
inline double cosine_from_norms(double dot, double norm_x, double norm_y) {
  if (norm_x == 0.0 || norm_y == 0.0) return 1.0;
  return 1.0 - dot / (norm_x * norm_y);
}

inline double norm(std::span<const double> x) { return std::sqrt(kernels::dot(x, x)); }

}  // namespace detail

}  // namespace hfo
