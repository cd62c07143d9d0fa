#pragma once

#include <array>
#include <cmath>
#include <string_view>

namespace rosenau {

enum class KernelFamily { InverseMultiquadric, Gaussian, Multiquadric };

KernelFamily parse_kernel_family(std::string_view name);
std::string_view to_string(KernelFamily family);

// Closed forms for the inverse multiquadric phi = (1 + e2 r^2)^{-1/2}, written
// in terms of e2 = eps^2 and s = e2 r^2. The scalar and SIMD matrix-fill
// kernels evaluate these with the same operation order.
namespace imq {

inline double phi(double s) { return 1.0 / std::sqrt(1.0 + s); }

// d/dx_i phi = -e2 dx_i phi^3
inline double first(double e2, double offset, double p) {
  return -e2 * offset * (p * p * p);
}

// d^4/dx^4 phi in 1D = 3 e2^2 (3 - 24 s + 8 s^2) phi^9
inline double fourth_1d(double e2, double s, double p) {
  const double p2 = p * p;
  const double p9 = (p2 * p2) * (p2 * p2) * p;
  return 3.0 * (e2 * e2) * ((3.0 - 24.0 * s) + 8.0 * (s * s)) * p9;
}

// 2D Laplacian = e2 (s - 2) phi^5
inline double laplacian_2d(double e2, double s, double p) {
  const double p2 = p * p;
  return e2 * (s - 2.0) * ((p2 * p2) * p);
}

// 2D biharmonic = 3 e2^2 (3 s^2 - 24 s + 8) phi^9
inline double biharmonic_2d(double e2, double s, double p) {
  const double p2 = p * p;
  const double p9 = (p2 * p2) * (p2 * p2) * p;
  return 3.0 * (e2 * e2) * ((8.0 - 24.0 * s) + 3.0 * (s * s)) * p9;
}

}  // namespace imq

/// Radial kernel with a global shape parameter. Offsets are signed
/// displacements x - x_j so odd derivatives carry their own sign.
class Kernel {
 public:
  explicit Kernel(double epsilon,
                  KernelFamily family = KernelFamily::InverseMultiquadric);

  KernelFamily family() const noexcept { return family_; }
  double epsilon() const noexcept { return epsilon_; }

  double eval(double r) const;
  double d1(double dx) const;
  double d4(double dx) const;
  std::array<double, 2> grad2(double dx, double dy) const;
  double laplacian2(double dx, double dy) const;
  double biharmonic2(double dx, double dy) const;

 private:
  void require_imq(const char* op) const;

  KernelFamily family_;
  double epsilon_;
};

}  // namespace rosenau
