#pragma once

// Double-double arithmetic (~31 significant digits) for tolerance-tightening
// audits. Error-free transforms follow the usual QD recipes (Dekker/Knuth,
// TwoProd via FMA).

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

namespace frob {

struct DDouble {
  double hi = 0.0, lo = 0.0;

  constexpr DDouble() = default;
  constexpr DDouble(double h) : hi(h) {}
  constexpr DDouble(double h, double l) : hi(h), lo(l) {}
  constexpr DDouble(int v) : hi(v) {}

  explicit operator double() const { return hi; }
};

namespace dd_detail {
inline DDouble two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}
inline DDouble quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}
inline DDouble two_prod(double a, double b) {
  double p = a * b;
  double err = std::fma(a, b, -p);
  return {p, err};
}
}  // namespace dd_detail

inline DDouble operator+(DDouble a, DDouble b) {
  using namespace dd_detail;
  DDouble s = two_sum(a.hi, b.hi);
  double lo = s.lo + a.lo + b.lo;
  return quick_two_sum(s.hi, lo);
}
inline DDouble operator-(DDouble a) { return {-a.hi, -a.lo}; }
inline DDouble operator-(DDouble a, DDouble b) { return a + (-b); }
inline DDouble operator*(DDouble a, DDouble b) {
  using namespace dd_detail;
  DDouble p = two_prod(a.hi, b.hi);
  double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, lo);
}
inline DDouble operator/(DDouble a, DDouble b) {
  double q1 = a.hi / b.hi;
  DDouble r = a - b * DDouble(q1);
  double q2 = r.hi / b.hi;
  r = r - b * DDouble(q2);
  double q3 = r.hi / b.hi;
  DDouble q = dd_detail::quick_two_sum(q1, q2);
  return q + DDouble(q3);
}
inline DDouble& operator+=(DDouble& a, DDouble b) { return a = a + b; }
inline DDouble& operator-=(DDouble& a, DDouble b) { return a = a - b; }
inline DDouble& operator*=(DDouble& a, DDouble b) { return a = a * b; }
inline DDouble& operator/=(DDouble& a, DDouble b) { return a = a / b; }

inline bool operator==(DDouble a, DDouble b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(DDouble a, DDouble b) { return !(a == b); }
inline bool operator<(DDouble a, DDouble b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(DDouble a, DDouble b) { return b < a; }
inline bool operator<=(DDouble a, DDouble b) { return !(b < a); }
inline bool operator>=(DDouble a, DDouble b) { return !(a < b); }

inline DDouble abs(DDouble a) { return a.hi < 0 ? -a : a; }
inline DDouble fabs(DDouble a) { return abs(a); }
inline bool isfinite(DDouble a) { return std::isfinite(a.hi); }
inline bool isnan(DDouble a) { return std::isnan(a.hi); }

inline DDouble sqrt(DDouble a) {
  if (a.hi == 0.0) return {0.0, 0.0};
  // one Newton step on 1/sqrt around the double estimate
  double x = 1.0 / std::sqrt(a.hi);
  double ax = a.hi * x;
  DDouble err = a - DDouble(ax) * DDouble(ax);
  return DDouble(ax) + DDouble(err.hi * (x * 0.5));
}

namespace dd_const {
inline const DDouble ln2{6.931471805599453e-01, 2.3190468138462996e-17};
inline const DDouble pi{3.141592653589793116e+00, 1.224646799147353207e-16};
inline const DDouble pi_2{1.570796326794896558e+00, 6.123233995736766036e-17};
}  // namespace dd_const

inline DDouble exp(DDouble a) {
  // e^a = 2^m * e^r with r = a - m ln2, |r| <= ln2/2, Taylor on r
  if (a.hi > 709.0) return {std::numeric_limits<double>::infinity(), 0.0};
  if (a.hi < -709.0) return {0.0, 0.0};
  double m = std::round(a.hi / dd_const::ln2.hi);
  DDouble r = a - dd_const::ln2 * DDouble(m);
  DDouble sum = 1.0, term = 1.0;
  for (int k = 1; k <= 24; ++k) {
    term = term * r / DDouble(double(k));
    sum += term;
    if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) break;
  }
  double scale = std::ldexp(1.0, int(m));
  return {sum.hi * scale, sum.lo * scale};
}

namespace dd_detail {
inline DDouble sin_taylor(DDouble r) {
  DDouble sum = r, term = r;
  DDouble r2 = r * r;
  for (int k = 1; k <= 16; ++k) {
    term = term * r2 / DDouble(double((2 * k) * (2 * k + 1)));
    sum += (k % 2 ? -term : term);
    if (std::fabs(term.hi) < 1e-35) break;
  }
  return sum;
}
inline DDouble cos_taylor(DDouble r) {
  DDouble sum = 1.0, term = 1.0;
  DDouble r2 = r * r;
  for (int k = 1; k <= 16; ++k) {
    term = term * r2 / DDouble(double((2 * k - 1) * (2 * k)));
    sum += (k % 2 ? -term : term);
    if (std::fabs(term.hi) < 1e-35) break;
  }
  return sum;
}
}  // namespace dd_detail

inline void sincos(DDouble a, DDouble& s, DDouble& c) {
  double q = std::round(a.hi / dd_const::pi_2.hi);
  DDouble r = a - dd_const::pi_2 * DDouble(q);
  long iq = long(q) & 3;
  if (iq < 0) iq += 4;
  DDouble sr = dd_detail::sin_taylor(r), cr = dd_detail::cos_taylor(r);
  switch (iq) {
    case 0: s = sr; c = cr; break;
    case 1: s = cr; c = -sr; break;
    case 2: s = -sr; c = -cr; break;
    default: s = -cr; c = sr; break;
  }
}
inline DDouble sin(DDouble a) { DDouble s, c; sincos(a, s, c); return s; }
inline DDouble cos(DDouble a) { DDouble s, c; sincos(a, s, c); return c; }

inline std::ostream& operator<<(std::ostream& os, DDouble a) { return os << a.hi; }

// Complex double-double. Mirrors the std::complex interface the templated
// numeric code relies on.
struct CDD {
  DDouble re, im;

  constexpr CDD() = default;
  constexpr CDD(DDouble r) : re(r) {}
  constexpr CDD(DDouble r, DDouble i) : re(r), im(i) {}
  constexpr CDD(double r) : re(r) {}
  constexpr CDD(double r, double i) : re(r), im(i) {}
  constexpr CDD(int r) : re(double(r)) {}

  DDouble real() const { return re; }
  DDouble imag() const { return im; }
  CDD& operator+=(const CDD& o) { re += o.re; im += o.im; return *this; }
  CDD& operator-=(const CDD& o) { re -= o.re; im -= o.im; return *this; }
  CDD& operator*=(const CDD& o) { *this = CDD{re * o.re - im * o.im, re * o.im + im * o.re}; return *this; }
  CDD& operator/=(const CDD& o);
};

inline CDD operator+(CDD a, const CDD& b) { return a += b; }
inline CDD operator-(CDD a, const CDD& b) { return a -= b; }
inline CDD operator-(const CDD& a) { return {-a.re, -a.im}; }
inline CDD operator*(CDD a, const CDD& b) { return a *= b; }
inline CDD operator/(const CDD& a, const CDD& b) {
  DDouble d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline CDD& CDD::operator/=(const CDD& o) { return *this = *this / o; }
inline bool operator==(const CDD& a, const CDD& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const CDD& a, const CDD& b) { return !(a == b); }

inline DDouble real(const CDD& z) { return z.re; }
inline DDouble imag(const CDD& z) { return z.im; }
inline CDD conj(const CDD& z) { return {z.re, -z.im}; }
inline DDouble norm(const CDD& z) { return z.re * z.re + z.im * z.im; }
inline DDouble abs(const CDD& z) {
  DDouble n = norm(z);
  return sqrt(n);
}
inline CDD sqrt(const CDD& z) {
  // principal branch, matching std::sqrt(std::complex)
  DDouble m = abs(z);
  if (m.hi == 0.0) return {0.0, 0.0};
  DDouble u = sqrt((m + z.re) / DDouble(2.0));
  DDouble v = sqrt((m - z.re) / DDouble(2.0));
  if (z.im < DDouble(0.0)) v = -v;
  if (z.re >= DDouble(0.0)) return {u, v};
  // for Re z < 0 the u formula loses accuracy; derive u from v
  DDouble uu = z.im / (v * DDouble(2.0));
  if (v.hi != 0.0) return {uu, v};
  return {u, v};
}
inline CDD exp(const CDD& z) {
  DDouble e = exp(z.re), s, c;
  sincos(z.im, s, c);
  return {e * c, e * s};
}
inline bool isfinite(const CDD& z) { return isfinite(z.re) && isfinite(z.im); }

inline std::ostream& operator<<(std::ostream& os, const CDD& z) {
  return os << "(" << z.re << "," << z.im << ")";
}

}  // namespace frob

#include <Eigen/Core>

namespace Eigen {
template <>
struct NumTraits<frob::DDouble> : GenericNumTraits<frob::DDouble> {
  typedef frob::DDouble Real;
  typedef frob::DDouble NonInteger;
  typedef frob::DDouble Nested;
  static inline Real epsilon() { return {4.93e-32, 0.0}; }
  static inline Real dummy_precision() { return {1e-28, 0.0}; }
  static inline Real highest() { return {1.79769e308, 0.0}; }
  static inline Real lowest() { return {-1.79769e308, 0.0}; }
  enum {
    IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 0,
    ReadCost = 2, AddCost = 6, MulCost = 10
  };
};
template <>
struct NumTraits<frob::CDD> : GenericNumTraits<frob::CDD> {
  typedef frob::DDouble Real;
  typedef frob::CDD NonInteger;
  typedef frob::CDD Nested;
  static inline Real epsilon() { return {4.93e-32, 0.0}; }
  static inline Real dummy_precision() { return {1e-28, 0.0}; }
  enum {
    IsComplex = 1, IsInteger = 0, IsSigned = 1, RequireInitialization = 0,
    ReadCost = 4, AddCost = 12, MulCost = 40
  };
};
}  // namespace Eigen
