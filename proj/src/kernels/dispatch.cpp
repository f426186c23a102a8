#include <cstdlib>
#include <string_view>

#include "hfo/kernels.hpp"

#if defined(HFO_HAVE_AVX2)
namespace hfo::kernels::avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_l2(const double* a, const double* b, std::size_t n);
double l1(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
}  // namespace hfo::kernels::avx2
#endif

namespace hfo::kernels {

namespace {

constexpr Table kScalar{scalar::dot, scalar::squared_l2, scalar::l1, scalar::axpy};
#if defined(HFO_HAVE_AVX2)
constexpr Table kAvx2{avx2::dot, avx2::squared_l2, avx2::l1, avx2::axpy};
#endif

Isa detect() {
  if (const char* env = std::getenv("HFO_SIMD"); env && std::string_view(env) == "scalar")
    return Isa::Scalar;
  return available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

bool available(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(HFO_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table& table(Isa isa) {
#if defined(HFO_HAVE_AVX2)
  if (isa == Isa::Avx2 && available(Isa::Avx2)) return kAvx2;
#else
  (void)isa;
#endif
  return kScalar;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const Table& active() {
  static const Table& t = table(active_isa());
  return t;
}

std::string_view name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace hfo::kernels
