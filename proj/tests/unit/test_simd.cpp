#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "rosenau/dd.hpp"
#include "rosenau/kernel.hpp"
#include "rosenau/simd.hpp"

using namespace rosenau;
using simd::FillOp;
using simd::Isa;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> fill(Isa isa, FillOp op, double e2, const std::vector<double>& ex,
                         const std::vector<double>& ey, double cx, double cy) {
  std::vector<double> out(ex.size());
  simd::table(isa).fill_imq(op, e2, ex, ey, cx, cy, out);
  return out;
}

}  // namespace

TEST_CASE("scalar fill reproduces the kernel closed forms") {
  const double eps = 1.7, e2 = eps * eps;
  const Kernel k(eps);
  const std::vector<double> ex = {-1.0, -0.25, 0.0, 0.3, 0.9, 2.0, 5.0};
  const std::vector<double> ey = {0.5, -0.1, 0.0, 0.7, -2.0, 0.2, 1.0};
  const double cx = 0.1, cy = -0.2;

  const auto d1 = fill(Isa::Scalar, FillOp::DerivX, e2, ex, {}, cx, 0.0);
  const auto d4 = fill(Isa::Scalar, FillOp::Fourth1d, e2, ex, {}, cx, 0.0);
  const auto lap = fill(Isa::Scalar, FillOp::Laplacian, e2, ex, ey, cx, cy);
  const auto bih = fill(Isa::Scalar, FillOp::Biharmonic, e2, ex, ey, cx, cy);
  const auto dy = fill(Isa::Scalar, FillOp::DerivY, e2, ex, ey, cx, cy);
  for (std::size_t i = 0; i < ex.size(); ++i) {
    CHECK(d1[i] == k.d1(ex[i] - cx));
    CHECK(d4[i] == k.d4(ex[i] - cx));
    CHECK(lap[i] == k.laplacian2(ex[i] - cx, ey[i] - cy));
    CHECK(bih[i] == k.biharmonic2(ex[i] - cx, ey[i] - cy));
    CHECK(dy[i] == k.grad2(ex[i] - cx, ey[i] - cy)[1]);
  }
}

TEST_CASE("avx2 fill matches scalar bit for bit") {
  if (!simd::available(Isa::Avx2)) {
    MESSAGE("avx2 not available on this machine; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pos(-3.0, 3.0), eps(0.05, 5.0);
  // Lengths straddle the vector width so the remainder loop is covered.
  for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 64u, 101u}) {
    std::vector<double> ex(n), ey(n);
    for (auto& v : ex) v = pos(rng);
    for (auto& v : ey) v = pos(rng);
    const double e = eps(rng), e2 = e * e, cx = pos(rng), cy = pos(rng);
    for (auto op : {FillOp::Value, FillOp::DerivX, FillOp::DerivY, FillOp::Fourth1d,
                    FillOp::Laplacian, FillOp::Biharmonic}) {
      CHECK(same_bits(fill(Isa::Scalar, op, e2, ex, ey, cx, cy),
                      fill(Isa::Avx2, op, e2, ex, ey, cx, cy)));
      if (op == FillOp::Value || op == FillOp::DerivX || op == FillOp::Fourth1d) {
        CHECK(same_bits(fill(Isa::Scalar, op, e2, ex, {}, cx, 0.0),
                        fill(Isa::Avx2, op, e2, ex, {}, cx, 0.0)));
      }
    }
  }
}

TEST_CASE("dd_fnms matches the scalar double-double update") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {1u, 4u, 7u, 33u}) {
    std::vector<double> xh(n), xl(n), yh(n), yl(n);
    for (std::size_t j = 0; j < n; ++j) {
      xh[j] = u(rng);
      xl[j] = u(rng) * 1e-17 * std::abs(xh[j]);
      yh[j] = u(rng) * 1e3;
      yl[j] = u(rng) * 1e-14;
    }
    const double ah = u(rng), al = u(rng) * 1e-17;

    // Reference in binary128 arithmetic.
    using quad = __float128;
    for (Isa isa : {Isa::Scalar, Isa::Avx2}) {
      if (!simd::available(isa)) continue;
      auto h = yh, l = yl;
      simd::table(isa).dd_fnms(ah, al, xh, xl, h, l);
      for (std::size_t j = 0; j < n; ++j) {
        const quad ref = (quad(yh[j]) + quad(yl[j])) - (quad(ah) + quad(al)) * (quad(xh[j]) + quad(xl[j]));
        const quad got = quad(h[j]) + quad(l[j]);
        const quad diff = got > ref ? got - ref : ref - got;
        CHECK(static_cast<double>(diff) <= 1e-29 * std::max(1.0, std::abs(static_cast<double>(ref))));
      }
    }
    if (simd::available(Isa::Avx2)) {
      auto h1 = yh, l1 = yl, h2 = yh, l2 = yl;
      simd::table(Isa::Scalar).dd_fnms(ah, al, xh, xl, h1, l1);
      simd::table(Isa::Avx2).dd_fnms(ah, al, xh, xl, h2, l2);
      CHECK(same_bits(h1, h2));
      CHECK(same_bits(l1, l2));
    }
  }
}

TEST_CASE("dispatch") {
  CHECK(simd::available(Isa::Scalar));
  CHECK(simd::to_string(Isa::Avx2) == "avx2");
  // An unavailable request must fall back to the reference table.
  if (!simd::available(Isa::Avx2)) CHECK(&simd::table(Isa::Avx2) == &simd::table(Isa::Scalar));
  CHECK(simd::available(simd::active()));
}
