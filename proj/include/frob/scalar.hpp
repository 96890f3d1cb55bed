#pragma once

// Scalar layer: the numeric core is templated on the complex type C, either
// std::complex<double> (default) or frob::CDD (double-double audits).

#include <complex>
#include <Eigen/Dense>

#include "frob/ddouble.hpp"
#include "frob/rational.hpp"

namespace frob {

using cxd = std::complex<double>;

template <class C>
struct scalar_traits;

template <>
struct scalar_traits<cxd> {
  using real_t = double;
  static cxd make(double re, double im) { return {re, im}; }
  static real_t from_rational(const Rational& q) { return q.convert_to<double>(); }
  static double to_double(real_t x) { return x; }
};

template <>
struct scalar_traits<CDD> {
  using real_t = DDouble;
  static CDD make(double re, double im) { return {re, im}; }
  static real_t from_rational(const Rational& q) {
    double d0 = q.convert_to<double>();
    Rational rem = q - Rational(d0);
    return {d0, rem.convert_to<double>()};
  }
  static double to_double(real_t x) { return x.hi; }
};

template <class C>
using real_of = typename scalar_traits<C>::real_t;

template <class C>
C from_crational(const CRational& c) {
  using T = scalar_traits<C>;
  return C(T::from_rational(c.re), T::from_rational(c.im));
}

// |z| as a plain double, for residual/tolerance bookkeeping.
template <class C>
double mag(const C& z) {
  using std::abs;
  return scalar_traits<C>::to_double(abs(z));
}

template <class C>
using VecX = Eigen::Matrix<C, Eigen::Dynamic, 1>;
template <class C>
using MatX = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;

// Sum accumulator that tracks the largest summand magnitude, so residuals can
// be reported relative to the cancellation scale.
template <class C>
struct Accum {
  C sum{};
  double scale = 0.0;
  void add(const C& term) {
    sum += term;
    scale = std::max(scale, mag(term));
  }
  Accum& operator+=(const C& term) { add(term); return *this; }
};

}  // namespace frob
