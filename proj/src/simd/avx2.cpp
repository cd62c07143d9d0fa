// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "rosenau/dd.hpp"
#include "rosenau/kernel.hpp"
#include "rosenau/simd.hpp"

namespace rosenau::simd {
namespace {

struct Dd4 {
  __m256d hi;
  __m256d lo;
};

inline Dd4 quick_two_sum(__m256d a, __m256d b) {
  const __m256d s = _mm256_add_pd(a, b);
  return {s, _mm256_sub_pd(b, _mm256_sub_pd(s, a))};
}

inline Dd4 two_sum(__m256d a, __m256d b) {
  const __m256d s = _mm256_add_pd(a, b);
  const __m256d bb = _mm256_sub_pd(s, a);
  const __m256d err = _mm256_add_pd(_mm256_sub_pd(a, _mm256_sub_pd(s, bb)),
                                    _mm256_sub_pd(b, bb));
  return {s, err};
}

inline Dd4 add(Dd4 a, Dd4 b) {
  Dd4 s = two_sum(a.hi, b.hi);
  const Dd4 t = two_sum(a.lo, b.lo);
  s.lo = _mm256_add_pd(s.lo, t.hi);
  s = quick_two_sum(s.hi, s.lo);
  s.lo = _mm256_add_pd(s.lo, t.lo);
  return quick_two_sum(s.hi, s.lo);
}

inline Dd4 mul(Dd4 a, Dd4 b) {
  const __m256d p = _mm256_mul_pd(a.hi, b.hi);
  __m256d e = _mm256_fmsub_pd(a.hi, b.hi, p);
  const __m256d cross = _mm256_add_pd(_mm256_mul_pd(a.hi, b.lo),
                                      _mm256_mul_pd(a.lo, b.hi));
  e = _mm256_add_pd(e, cross);
  return quick_two_sum(p, e);
}

inline __m256d negate(__m256d v) {
  return _mm256_xor_pd(v, _mm256_set1_pd(-0.0));
}

void dd_fnms_avx2(double a_hi, double a_lo, std::span<const double> x_hi,
                  std::span<const double> x_lo, std::span<double> y_hi,
                  std::span<double> y_lo) {
  const std::size_t n = y_hi.size();
  const Dd4 a{_mm256_set1_pd(a_hi), _mm256_set1_pd(a_lo)};
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const Dd4 x{_mm256_loadu_pd(x_hi.data() + j),
                _mm256_loadu_pd(x_lo.data() + j)};
    const Dd4 y{_mm256_loadu_pd(y_hi.data() + j),
                _mm256_loadu_pd(y_lo.data() + j)};
    const Dd4 p = mul(a, x);
    const Dd4 r = add(y, Dd4{negate(p.hi), negate(p.lo)});
    _mm256_storeu_pd(y_hi.data() + j, r.hi);
    _mm256_storeu_pd(y_lo.data() + j, r.lo);
  }
  const dd::Real as{a_hi, a_lo};
  for (; j < n; ++j) {
    const dd::Real r = dd::fnms({y_hi[j], y_lo[j]}, as, {x_hi[j], x_lo[j]});
    y_hi[j] = r.hi;
    y_lo[j] = r.lo;
  }
}

// Mirrors imq:: in kernel.hpp operation by operation.
inline __m256d fill_lane(FillOp op, __m256d e2, __m256d dx, __m256d dy) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_mul_pd(
      e2, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
  const __m256d p = _mm256_div_pd(one, _mm256_sqrt_pd(_mm256_add_pd(one, s)));
  const __m256d p2 = _mm256_mul_pd(p, p);
  switch (op) {
    case FillOp::Value:
      return p;
    case FillOp::DerivX:
    case FillOp::DerivY: {
      const __m256d off = op == FillOp::DerivX ? dx : dy;
      const __m256d p3 = _mm256_mul_pd(p2, p);
      return _mm256_mul_pd(_mm256_mul_pd(negate(e2), off), p3);
    }
    case FillOp::Fourth1d:
    case FillOp::Biharmonic: {
      const __m256d p4 = _mm256_mul_pd(p2, p2);
      const __m256d p9 = _mm256_mul_pd(_mm256_mul_pd(p4, p4), p);
      const __m256d ss = _mm256_mul_pd(s, s);
      __m256d poly;
      if (op == FillOp::Fourth1d) {
        poly = _mm256_add_pd(
            _mm256_sub_pd(_mm256_set1_pd(3.0),
                          _mm256_mul_pd(_mm256_set1_pd(24.0), s)),
            _mm256_mul_pd(_mm256_set1_pd(8.0), ss));
      } else {
        poly = _mm256_add_pd(
            _mm256_sub_pd(_mm256_set1_pd(8.0),
                          _mm256_mul_pd(_mm256_set1_pd(24.0), s)),
            _mm256_mul_pd(_mm256_set1_pd(3.0), ss));
      }
      const __m256d scale =
          _mm256_mul_pd(_mm256_set1_pd(3.0), _mm256_mul_pd(e2, e2));
      return _mm256_mul_pd(_mm256_mul_pd(scale, poly), p9);
    }
    case FillOp::Laplacian: {
      const __m256d p5 = _mm256_mul_pd(_mm256_mul_pd(p2, p2), p);
      return _mm256_mul_pd(
          _mm256_mul_pd(e2, _mm256_sub_pd(s, _mm256_set1_pd(2.0))), p5);
    }
  }
  return p;
}

void fill_imq_avx2(FillOp op, double e2, std::span<const double> ex,
                   std::span<const double> ey, double cx, double cy,
                   std::span<double> out) {
  const std::size_t n = ex.size();
  const bool two_d = !ey.empty();
  const __m256d ve2 = _mm256_set1_pd(e2);
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t r = 0;
  for (; r + 4 <= n; r += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(ex.data() + r), vcx);
    const __m256d dy =
        two_d ? _mm256_sub_pd(_mm256_loadu_pd(ey.data() + r), vcy) : zero;
    _mm256_storeu_pd(out.data() + r, fill_lane(op, ve2, dx, dy));
  }
  for (; r < n; ++r) {
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

}  // namespace

namespace detail {
const KernelTable kAvx2Table{&fill_imq_avx2, &dd_fnms_avx2};
}  // namespace detail

}  // namespace rosenau::simd
