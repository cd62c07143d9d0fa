#pragma once

#include <cmath>

// Double-double arithmetic: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2,
// giving roughly 106 significant bits. Only the operations the dense solver
// needs are provided. All routines are branch-free so the SIMD variants can
// reproduce them bit for bit.
namespace rosenau::dd {

struct Real {
  double hi = 0.0;
  double lo = 0.0;
};

inline Real quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline Real two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline Real two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline Real add(Real a, Real b) {
  Real s = two_sum(a.hi, b.hi);
  const Real t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline Real neg(Real a) { return {-a.hi, -a.lo}; }

inline Real sub(Real a, Real b) { return add(a, neg(b)); }

inline Real mul(Real a, Real b) {
  Real p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline Real div(Real a, Real b) {
  const double q1 = a.hi / b.hi;
  Real r = sub(a, mul(Real{q1, 0.0}, b));
  const double q2 = r.hi / b.hi;
  r = sub(r, mul(Real{q2, 0.0}, b));
  const double q3 = r.hi / b.hi;
  Real q = quick_two_sum(q1, q2);
  return add(q, Real{q3, 0.0});
}

inline Real sqrt(Real a) {
  if (a.hi <= 0.0) return {0.0, 0.0};
  const double x = std::sqrt(a.hi);
  const Real r = sub(a, two_prod(x, x));
  return quick_two_sum(x, r.hi / (2.0 * x));
}

// y - a*x, the update used by elimination and substitution.
inline Real fnms(Real y, Real a, Real x) { return sub(y, mul(a, x)); }

inline double to_double(Real a) { return a.hi + a.lo; }

inline double abs_hi(Real a) { return std::fabs(a.hi); }

}  // namespace rosenau::dd
