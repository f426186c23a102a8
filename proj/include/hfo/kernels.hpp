#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops behind the distance functions, KNN scans and
// logistic regression. Each kernel has a scalar reference version and, on
// x86-64, an AVX2+FMA version; the active table is chosen once at runtime
// from CPUID (override with HFO_SIMD=scalar).

namespace hfo::kernels {

enum class Isa { Scalar, Avx2 };

struct Table {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_l2)(const double* a, const double* b, std::size_t n);
  double (*l1)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_l2(const double* a, const double* b, std::size_t n);
double l1(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace scalar

bool available(Isa isa);
/// Table for a specific ISA; falls back to scalar if unavailable.
const Table& table(Isa isa);
const Table& active();
Isa active_isa();
std::string_view name(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline double squared_l2(std::span<const double> a, std::span<const double> b) {
  return active().squared_l2(a.data(), b.data(), a.size());
}
inline double l1(std::span<const double> a, std::span<const double> b) {
  return active().l1(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace hfo::kernels
