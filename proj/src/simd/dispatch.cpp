#include <cstdlib>
#include <string_view>

#include "rosenau/simd.hpp"

namespace rosenau::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(ROSENAU_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

namespace {

Isa detect() {
  if (const char* forced = std::getenv("ROSENAU_SIMD")) {
    const std::string_view name(forced);
    if (name == "scalar") return Isa::Scalar;
    if (name == "avx2" && available(Isa::Avx2)) return Isa::Avx2;
    return Isa::Scalar;
  }
  return available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

Isa active() {
  static const Isa isa = detect();
  return isa;
}

const KernelTable& table(Isa isa) {
#if defined(ROSENAU_HAVE_AVX2)
  if (isa == Isa::Avx2 && available(Isa::Avx2)) return detail::kAvx2Table;
#else
  (void)isa;
#endif
  return detail::kScalarTable;
}

}  // namespace rosenau::simd
