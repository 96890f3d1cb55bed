#include <doctest.h>

#include "frob/registry.hpp"
#include "frob/rotation.hpp"
#include "frob/sampling.hpp"

using namespace frob;

namespace {
const double kRt3 = 1.7320508075688772935;
}

TEST_CASE("validate A2: eta, WDVV, homogeneity") {
  FrobeniusSpec a2 = load_manifold("A2");
  ValidationReport rep = validate_spec(a2);
  CHECK(rep.passed);
  CHECK(rep.max_wdvv == 0.0);  // N = 2: WDVV is trivial
  CHECK(rep.max_homogeneity == 0.0);
  CHECK(std::abs(rep.eta(0, 0)) == 0.0);
  CHECK(std::abs(rep.eta(0, 1) - 1.0) == 0.0);
  CHECK(std::abs(rep.eta(1, 0) - 1.0) == 0.0);
  CHECK(std::abs(rep.eta(1, 1)) == 0.0);
}

TEST_CASE("degenerate and non-constant metrics are rejected") {
  // F = t1^3: eta row of zeros
  FrobeniusSpec bad("bad", 2, Expression::term(CRational(1L), {3, 0}),
                    {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}},
                    {Rational(0), Rational(0)}, Rational(0));
  CHECK_THROWS_AS(validate_spec(bad), DegenerateMetric);
  // F = t1^3 t2: fourth derivative with a t1 slot is nonzero
  FrobeniusSpec bad2("bad2", 2, Expression::term(CRational(1L), {3, 1}),
                     {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}},
                     {Rational(0), Rational(0)}, Rational(0));
  CHECK_THROWS_AS(validate_spec(bad2), NonConstantEta);
}

TEST_CASE("A3/A4/D4/P1/A2A2 pass validation at 50 sample points") {
  for (const char* name : {"A3", "A4", "D4", "P1", "A2A2"}) {
    FrobeniusSpec spec = load_manifold(name);
    ValidationReport rep = validate_spec(spec, 50, 2);
    INFO(name, ": ", rep.message);
    CHECK(rep.passed);
    CHECK(rep.max_wdvv < 1e-10);
    CHECK(rep.max_homogeneity == 0.0);
  }
}

TEST_CASE("quantum product: unit axis, commutativity, A2 value") {
  FrobeniusSpec a2 = load_manifold("A2");
  VecX<cxd> pt(2);
  pt << cxd(0, 0), cxd(1, 0);
  VecX<cxd> g1(2), g2(2);
  g1 << 1, 0;
  g2 << 0, 1;
  // gamma2 o gamma2 = (1/3) gamma1 at (0,1)
  VecX<cxd> p22 = quantum_product(a2, pt, g2, g2);
  CHECK(std::abs(p22[0] - cxd(1.0 / 3, 0)) < 1e-15);
  CHECK(std::abs(p22[1]) < 1e-15);
  // unit axis
  VecX<cxd> x(2);
  x << cxd(0.3, -0.2), cxd(1.1, 0.4);
  VecX<cxd> ux = quantum_product(a2, pt, g1, x);
  CHECK((ux - x).norm() < 1e-15);
  // commutativity
  VecX<cxd> xy = quantum_product(a2, pt, x, g2);
  VecX<cxd> yx = quantum_product(a2, pt, g2, x);
  CHECK((xy - yx).norm() < 1e-15);
}

TEST_CASE("A2 frame at (0,1): canonical values, idempotents, g, h") {
  FrobeniusSpec a2 = load_manifold("A2");
  VecX<cxd> pt(2);
  pt << cxd(0, 0), cxd(1, 0);
  Frame<cxd> fr = semisimple_frame(a2, pt);
  const double u0 = 2 * kRt3 / 9;  // eigenvalues of E o at (0,1)
  CHECK(std::abs(fr.u[0] - cxd(-u0, 0)) < 1e-14);
  CHECK(std::abs(fr.u[1] - cxd(+u0, 0)) < 1e-14);
  // idempotents 1/2 gamma1 -+ (sqrt3/2) gamma2
  CHECK(std::abs(fr.idem(0, 0) - 0.5) < 1e-12);
  CHECK(std::abs(fr.idem(0, 1) + kRt3 / 2) < 1e-12);
  CHECK(std::abs(fr.idem(1, 0) - 0.5) < 1e-12);
  CHECK(std::abs(fr.idem(1, 1) - kRt3 / 2) < 1e-12);
  // g = (-sqrt3/2, +sqrt3/2); one h purely imaginary
  CHECK(std::abs(fr.g[0] + kRt3 / 2) < 1e-13);
  CHECK(std::abs(fr.g[1] - kRt3 / 2) < 1e-13);
  CHECK(std::abs(fr.h[0].real()) < 1e-14);
  CHECK(fr.h[0].imag() > 0.9);
  // h_i^2 = g_i
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(fr.h[i] * fr.h[i] - fr.g[i]) < 1e-14);
}

TEST_CASE("frame invariants at sampled points of every builtin") {
  for (const char* name : {"A2", "A3", "A4", "D4", "P1", "A2A2"}) {
    FrobeniusSpec spec = load_manifold(name);
    const int N = spec.nvars();
    MatX<cxd> eta = spec.eta<cxd>();
    SampleRng rng(91);
    VecX<cxd> pt = base_point<cxd>(spec);
    for (int a = 0; a < N; ++a) pt[a] += rng.template box_complex<cxd>(0.15);
    Frame<cxd> fr = semisimple_frame(spec, pt);
    // E_i o E_j = delta_ij E_i
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        VecX<cxd> ei = fr.idem.row(i).transpose(), ej = fr.idem.row(j).transpose();
        VecX<cxd> prod = quantum_product(spec, pt, ei, ej);
        VecX<cxd> expect = (i == j) ? ei : VecX<cxd>::Zero(N).eval();
        INFO(name, " idempotent (", i, ",", j, ")");
        CHECK((prod - expect).norm() < 1e-9);
      }
    // sum_i E_i = gamma_1
    VecX<cxd> total = VecX<cxd>::Zero(N);
    for (int i = 0; i < N; ++i) total += fr.idem.row(i).transpose();
    CHECK(std::abs(total[0] - 1.0) < 1e-10);
    for (int a = 1; a < N; ++a) CHECK(std::abs(total[a]) < 1e-10);
    // eta(E_i, E_j) = 0 off-diagonal
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        cxd pair = (fr.idem.row(i) * eta * fr.idem.row(j).transpose())(0, 0);
        if (i != j) CHECK(std::abs(pair) < 1e-10);
      }
  }
}


TEST_CASE("solver failure and validation failure surface as typed errors") {
  FrobeniusSpec a3 = load_manifold("A3");
  VecX<cxd> pt(3);
  pt << cxd(0.1, 0.05), cxd(-0.04, 0.02), cxd(1.0, 0.05);
  FrameOptions opt;
  opt.max_iter = 1;  // force non-convergence
  CHECK_THROWS_AS(semisimple_frame(a3, pt, opt), EigensolverFailure);
  // well-formed file whose Euler weights are wrong for its prepotential
  FrobeniusSpec wrong("wrong", 2,
                      Expression::term(CRational(Rational(1, 2)), {2, 1}) +
                          Expression::term(CRational(Rational(1, 72)), {0, 5}),
                      {{Rational(1), Rational(0)}, {Rational(0), Rational(2, 3)}},
                      {Rational(0), Rational(0)}, Rational(1, 3));
  ValidationReport rep = validate_spec(wrong);
  CHECK_FALSE(rep.passed);
  CHECK(rep.max_homogeneity > 0.005);
}

TEST_CASE("A2 at the origin is not semisimple") {
  FrobeniusSpec a2 = load_manifold("A2");
  VecX<cxd> pt = VecX<cxd>::Zero(2);
  CHECK_THROWS_AS(semisimple_frame(a2, pt), NonSemisimplePoint);
}

TEST_CASE("semisimple_frame is bit-deterministic") {
  FrobeniusSpec a2 = load_manifold("A2");
  VecX<cxd> pt(2);
  pt << cxd(0.11, 0.07), cxd(0.93, -0.04);
  Frame<cxd> f1 = semisimple_frame(a2, pt);
  Frame<cxd> f2 = semisimple_frame(a2, pt);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::memcmp(&f1.u[i], &f2.u[i], sizeof(cxd)) == 0);
    CHECK(std::memcmp(&f1.h[i], &f2.h[i], sizeof(cxd)) == 0);
    for (int a = 0; a < 2; ++a) {
      cxd x = f1.idem(i, a), y = f2.idem(i, a);
      CHECK(std::memcmp(&x, &y, sizeof(cxd)) == 0);
    }
  }
}

TEST_CASE("directional derivative: E_i u_j = delta_ij; E_k h_i = r_ik h_k") {
  for (const char* name : {"A2", "A3", "A4", "D4", "P1", "A2A2"}) {
    FrobeniusSpec spec = load_manifold(name);
    const int N = spec.nvars();
    SampleRng rng(5);
    Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.15);
    RotationData<cxd> rd = rotation_data(spec, fr);
    for (int k = 0; k < N; ++k) {
      VecX<cxd> dir = fr.idem.row(k).transpose();
      for (int i = 0; i < N; ++i) {
        cxd du = directional_derivative(spec, fr.point, dir, FrameQuantity::U, i, 0,
                                        1e-3, FrameOptions{});
        CHECK(std::abs(du - (i == k ? 1.0 : 0.0)) < 1e-6);
        cxd dh = directional_derivative(spec, fr.point, dir, FrameQuantity::H, i, 0,
                                        1e-3, FrameOptions{});
        INFO(name, " E_", k, " h_", i);
        CHECK(std::abs(dh - rd.r(i, k) * fr.h[k]) < 1e-5);
      }
    }
    // derivative along the zero direction vanishes
    VecX<cxd> zero = VecX<cxd>::Zero(N);
    cxd dz = directional_derivative(spec, fr.point, zero, FrameQuantity::U, 0, 0,
                                    1e-3, FrameOptions{});
    CHECK(std::abs(dz) == 0.0);
  }
}
