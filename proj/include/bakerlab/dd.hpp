#pragma once

#include <cmath>

namespace bakerlab {

// Double-double arithmetic (~31 significant digits). Classic error-free
// transformations: TwoSum (Knuth) and TwoProd via fma (Dekker). Only the
// operations the boundary-orbit iteration needs are provided.
struct DD {
  double hi = 0;
  double lo = 0;

  DD() = default;
  DD(double h) : hi(h), lo(0) {}
  DD(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
};

namespace dd_detail {
inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}
inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}
inline DD two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}
}  // namespace dd_detail

inline DD operator+(DD a, DD b) {
  DD s = dd_detail::two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
  DD p = dd_detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DD operator/(DD a, DD b) {
  double q1 = a.hi / b.hi;
  DD r = a - b * DD(q1);
  double q2 = r.hi / b.hi;
  r = r - b * DD(q2);
  double q3 = r.hi / b.hi;
  DD q = dd_detail::quick_two_sum(q1, q2);
  return q + DD(q3);
}

inline DD dd_sqrt(DD a) {
  if (a.hi <= 0) return {0, 0};
  double s = std::sqrt(a.hi);
  DD sd(s);
  // one Newton step in dd: s <- (s + a/s) / 2
  DD t = (sd + a / sd);
  return {t.hi * 0.5, t.lo * 0.5};
}

struct DDComplex {
  DD re, im;

  DDComplex() = default;
  DDComplex(DD r, DD i) : re(r), im(i) {}
  DDComplex(double r, double i) : re(r), im(i) {}
};

inline DDComplex operator+(const DDComplex& a, const DDComplex& b) {
  return {a.re + b.re, a.im + b.im};
}
inline DDComplex operator-(const DDComplex& a, const DDComplex& b) {
  return {a.re - b.re, a.im - b.im};
}
inline DDComplex operator*(const DDComplex& a, const DDComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline DDComplex operator*(DD s, const DDComplex& a) { return {s * a.re, s * a.im}; }

inline DD norm2(const DDComplex& a) { return a.re * a.re + a.im * a.im; }

inline DDComplex operator/(const DDComplex& a, const DDComplex& b) {
  DD d = norm2(b);
  DDComplex num = a * DDComplex{b.re, -b.im};
  return {num.re / d, num.im / d};
}

// project to the unit circle: z / |z|
inline DDComplex dd_normalize(const DDComplex& z) {
  DD r = dd_sqrt(norm2(z));
  if (r.hi == 0) return z;
  return {z.re / r, z.im / r};
}

}  // namespace bakerlab
