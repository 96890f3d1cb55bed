#include <doctest.h>

#include <random>

#include "frob/expression.hpp"

using namespace frob;

namespace {
Expression a2_prepotential() {
  // 1/2 t1^2 t2 + t2^4 / 72
  return Expression::term(CRational(Rational(1, 2)), {2, 1}) +
         Expression::term(CRational(Rational(1, 72)), {0, 4});
}

Expression random_expression(std::mt19937_64& rng, int nvars, int nterms) {
  Expression e(nvars);
  for (int t = 0; t < nterms; ++t) {
    std::vector<int> pw(nvars);
    std::vector<Rational> kw(nvars, Rational(0));
    for (int a = 0; a < nvars; ++a) pw[a] = int(rng() % 4);
    if (rng() % 2) kw[rng() % nvars] = Rational(int(rng() % 5) - 2, 1 + int(rng() % 3));
    e += Expression::term(CRational(Rational(int(rng() % 19) - 9, 1 + int(rng() % 7))),
                          pw, kw);
  }
  return e;
}
}  // namespace

TEST_CASE("differentiate: power rule, zero case, exponential fixed point") {
  Expression F = a2_prepotential();
  // d/dt2 of 1/2 t1^2 t2 -> 1/2 t1^2
  Expression d2 = differentiate(Expression::term(CRational(Rational(1, 2)), {2, 1}), 1);
  CHECK(d2 == Expression::term(CRational(Rational(1, 2)), {2, 0}));
  // derivative of a constant is the zero expression
  CHECK(differentiate(Expression::constant(2, CRational(7L)), 0).is_zero());
  // d/dt2 exp(t2) = exp(t2)
  Expression ex = Expression::term(CRational(1L), {0, 0}, {Rational(0), Rational(1)});
  CHECK(differentiate(ex, 1) == ex);
  CHECK(differentiate(ex, 0).is_zero());
}

TEST_CASE("evaluate: A2 prepotential at (0,1) and trivial cases") {
  Expression F = a2_prepotential();
  VecX<cxd> pt(2);
  pt << cxd(0, 0), cxd(1, 0);
  CHECK(std::abs(F.evaluate<cxd>(pt) - cxd(1.0 / 72, 0)) < 1e-16);
  VecX<cxd> origin = VecX<cxd>::Zero(2);
  CHECK(std::abs(F.evaluate<cxd>(origin)) == 0.0);
  Expression ex = Expression::term(CRational(1L), {0, 0}, {Rational(0), Rational(1)});
  CHECK(std::abs(ex.evaluate<cxd>(origin) - cxd(1, 0)) < 1e-16);
}

TEST_CASE("mixed partials commute on random expressions") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 40; ++rep) {
    Expression e = random_expression(rng, 3, 5);
    int a = int(rng() % 3), b = int(rng() % 3);
    CHECK(differentiate(differentiate(e, a), b) ==
          differentiate(differentiate(e, b), a));
  }
}

TEST_CASE("derivative matches central finite difference") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    Expression e = random_expression(rng, 2, 4);
    int a = int(rng() % 2);
    Expression de = differentiate(e, a);
    VecX<cxd> pt(2);
    pt << cxd(0.3, 0.1), cxd(-0.2, 0.25);
    const double h = 1e-5;
    VecX<cxd> pp = pt, pm = pt;
    pp[a] += h;
    pm[a] -= h;
    cxd fd = (e.evaluate<cxd>(pp) - e.evaluate<cxd>(pm)) / (2 * h);
    cxd ex = de.evaluate<cxd>(pt);
    double scale = std::max({std::abs(ex), std::abs(fd), 1.0});
    CHECK(std::abs(fd - ex) / scale < 1e-8);
  }
}

TEST_CASE("canonical form merges terms and drops zeros") {
  Expression a = Expression::term(CRational(Rational(1, 3)), {1, 0});
  Expression b = Expression::term(CRational(Rational(-1, 3)), {1, 0});
  CHECK((a + b).is_zero());
  Expression c = a + a;
  REQUIRE(c.terms().size() == 1);
  CHECK(c.terms()[0].coeff == CRational(Rational(2, 3)));
}

TEST_CASE("term-list round trip is exact") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 25; ++rep) {
    Expression e = random_expression(rng, 3, 6);
    Expression back = Expression::parse_term_list(e.to_term_list(), 3);
    CHECK(e == back);
  }
  CHECK_THROWS_AS(Expression::parse_term_list("1 0 | 1 oops | 0 0", 2), ParseError);
}
