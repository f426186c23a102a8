#include "hfo/distance.hpp"

#include <string>

#include "hfo/error.hpp"

namespace hfo {

double cosine_distance(std::span<const double> x, std::span<const double> y) {
  return detail::cosine_from_norms(kernels::dot(x, y), detail::norm(x), detail::norm(y));
}

double minkowski_distance(std::span<const double> x, std::span<const double> y, int p) {
  switch (p) {
    case 1: return kernels::l1(x, y);
    case 2: return std::sqrt(kernels::squared_l2(x, y));
    default: {
      double s = 0.0;
      const double pp = static_cast<double>(p);
      for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::fabs(x[i] - y[i]), pp);
      return std::pow(s, 1.0 / pp);
    }
  }
}

namespace {
void check_dims(const FeatureVector& x, const FeatureVector& y) {
  if (x.size() != y.size())
    throw DimensionError("distance between vectors of length " + std::to_string(x.size()) +
                         " and " + std::to_string(y.size()));
}
}  // namespace

double cosine_distance(const FeatureVector& x, const FeatureVector& y) {
  check_dims(x, y);
  return cosine_distance(x.view(), y.view());
}

double minkowski_distance(const FeatureVector& x, const FeatureVector& y, int p) {
  check_dims(x, y);
  if (p < 1) throw ConfigError("Minkowski order must be >= 1");
  return minkowski_distance(x.view(), y.view(), p);
}

}  // namespace hfo
