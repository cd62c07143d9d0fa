#include <cassert>

#include "rosenau/dd.hpp"
#include "rosenau/kernel.hpp"
#include "rosenau/simd.hpp"

namespace rosenau::simd {
namespace {

void fill_imq_scalar(FillOp op, double e2, std::span<const double> ex,
                     std::span<const double> ey, double cx, double cy,
                     std::span<double> out) {
  assert(out.size() == ex.size());
  const bool two_d = !ey.empty();
  for (std::size_t r = 0; r < ex.size(); ++r) {
    const double dx = ex[r] - cx;
    const double dy = two_d ? ey[r] - cy : 0.0;
    const double s = e2 * (dx * dx + dy * dy);
    const double p = imq::phi(s);
    switch (op) {
      case FillOp::Value:
        out[r] = p;
        break;
      case FillOp::DerivX:
        out[r] = imq::first(e2, dx, p);
        break;
      case FillOp::DerivY:
        out[r] = imq::first(e2, dy, p);
        break;
      case FillOp::Fourth1d:
        out[r] = imq::fourth_1d(e2, s, p);
        break;
      case FillOp::Laplacian:
        out[r] = imq::laplacian_2d(e2, s, p);
        break;
      case FillOp::Biharmonic:
        out[r] = imq::biharmonic_2d(e2, s, p);
        break;
    }
  }
}

void dd_fnms_scalar(double a_hi, double a_lo, std::span<const double> x_hi,
                    std::span<const double> x_lo, std::span<double> y_hi,
                    std::span<double> y_lo) {
  const dd::Real a{a_hi, a_lo};
  for (std::size_t j = 0; j < y_hi.size(); ++j) {
    const dd::Real r = dd::fnms({y_hi[j], y_lo[j]}, a, {x_hi[j], x_lo[j]});
    y_hi[j] = r.hi;
    y_lo[j] = r.lo;
  }
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{&fill_imq_scalar, &dd_fnms_scalar};
}  // namespace detail

}  // namespace rosenau::simd
