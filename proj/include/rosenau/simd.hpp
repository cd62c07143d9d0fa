#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Runtime-selected data-parallel kernels. Every entry has a scalar reference
// implementation; wider variants must reproduce it bit for bit (the project
// is built with -ffp-contract=off so the compiler cannot fuse differently).
namespace rosenau::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// True when the variant was compiled in and the running CPU supports it.
bool available(Isa isa);

/// Best available variant; ROSENAU_SIMD=scalar|avx2 in the environment
/// overrides the choice (an unavailable request falls back to scalar).
Isa active();

/// Operator applied to the inverse multiquadric when filling a row.
enum class FillOp { Value, DerivX, DerivY, Fourth1d, Laplacian, Biharmonic };

struct KernelTable {
  /// out[r] = (op phi)(x_r - c) for the IMQ with e2 = eps^2. ey may be empty
  /// for 1D points, in which case the y offset is zero.
  void (*fill_imq)(FillOp op, double e2, std::span<const double> ex,
                   std::span<const double> ey, double cx, double cy,
                   std::span<double> out);

  /// y[j] <- y[j] - a * x[j] in double-double, arrays split into hi/lo parts.
  void (*dd_fnms)(double a_hi, double a_lo, std::span<const double> x_hi,
                  std::span<const double> x_lo, std::span<double> y_hi,
                  std::span<double> y_lo);
};

const KernelTable& table(Isa isa);
inline const KernelTable& table() { return table(active()); }

namespace detail {
extern const KernelTable kScalarTable;
#if defined(ROSENAU_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace detail

}  // namespace rosenau::simd
