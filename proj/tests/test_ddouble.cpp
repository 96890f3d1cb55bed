#include <doctest.h>

#include "frob/identities.hpp"
#include "frob/registry.hpp"
#include "frob/sampling.hpp"

using namespace frob;

TEST_CASE("double-double arithmetic reaches ~1e-31") {
  DDouble third = DDouble(1.0) / DDouble(3.0);
  DDouble back = third * DDouble(3.0) - DDouble(1.0);
  CHECK(std::abs(back.hi) < 1e-31);
  DDouble s = sqrt(DDouble(2.0));
  DDouble r = s * s - DDouble(2.0);
  CHECK(std::abs(r.hi) < 1e-31);
  // (1 + 1e-20) - 1 survives in dd
  DDouble x = DDouble(1.0) + DDouble(1e-20);
  CHECK((x - DDouble(1.0)).hi == doctest::Approx(1e-20).epsilon(1e-10));
}

TEST_CASE("double-double transcendentals against high-precision references") {
  // exp(1) = 2.718281828459045235360287471352662497757...
  DDouble e = exp(DDouble(1.0));
  CHECK(std::abs(e.hi - 2.718281828459045235e+00) < 1e-15);
  CHECK(std::abs((e - DDouble(2.718281828459045, 1.4456468917292502e-16)).hi) < 1e-30);
  // sin(1) = 0.8414709848078965066525023216302990...
  DDouble s1 = sin(DDouble(1.0));
  CHECK(std::abs((s1 - DDouble(0.8414709848078965, 1.776845092935536e-18)).hi) < 1e-29);
  DDouble s05 = sin(DDouble(0.5));
  CHECK(std::abs((s05 - DDouble(0.479425538604203, -5.103969860556013e-18)).hi) < 1e-29);
  // cos(2) = -0.4161468365471423869975682295007621...
  DDouble c2 = cos(DDouble(2.0));
  CHECK(std::abs(c2.hi - (-0.41614683654714238700)) < 1e-16);
  // exp over a range stays consistent with double to ~1e-16 relative
  for (double x : {-3.7, -0.2, 0.9, 4.4, 11.0}) {
    CHECK(std::abs(exp(DDouble(x)).hi - std::exp(x)) <
          1e-13 * std::max(1.0, std::exp(x)));
  }
}

TEST_CASE("complex double-double: principal sqrt and exp match std::complex") {
  for (auto z : {cxd(2.3, 1.1), cxd(-1.4, 0.3), cxd(-0.7, -2.0), cxd(0.0, 1.0)}) {
    CDD zd{z.real(), z.imag()};
    CDD s = sqrt(zd);
    cxd sref = std::sqrt(z);
    CHECK(std::abs(s.re.hi - sref.real()) < 1e-14);
    CHECK(std::abs(s.im.hi - sref.imag()) < 1e-14);
    CDD ez = exp(zd);
    cxd eref = std::exp(z);
    CHECK(std::abs(ez.re.hi - eref.real()) < 1e-14 * std::abs(eref));
    CHECK(std::abs(ez.im.hi - eref.imag()) < 1e-14 * std::abs(eref));
  }
}

TEST_CASE("rational to double-double conversion is two-limb exact") {
  Rational q(1, 3);
  DDouble d = scalar_traits<CDD>::from_rational(q);
  // residual after subtracting both limbs is at the 1e-33 level
  Rational back(d.hi);
  back += Rational(d.lo);
  Rational resid = q - back;
  CHECK(std::abs(resid.convert_to<double>()) < 1e-32);
}

TEST_CASE("double-double pipeline tightens the identity residuals") {
  FrobeniusSpec a2 = load_manifold("A2");
  VecX<CDD> pt(2);
  pt[0] = CDD(0.05, 0.02);
  pt[1] = CDD(1.01, -0.03);
  FrameOptions opt;
  opt.conv_tol = 1e-29;
  Frame<CDD> fr = semisimple_frame(a2, pt, opt);
  RotationData<CDD> rd = rotation_data(a2, fr);
  const int N = 2;
  // string equation at ~1e-30
  for (int i = 0; i < N; ++i) {
    CDD s{};
    for (int j = 0; j < N; ++j) s += rd.r(i, j) * fr.h[j];
    CHECK(mag(s) < 1e-28);
  }
  // genus-1 1-point vanishing at ~1e-28
  VecX<CDD> p1 = genus1_1pt(rd);
  for (int i = 0; i < N; ++i) CHECK(mag(p1[i]) < 1e-26);
  // double and dd agree on canonical values to double rounding
  VecX<cxd> ptd(2);
  ptd << cxd(0.05, 0.02), cxd(1.01, -0.03);
  Frame<cxd> frd = semisimple_frame(a2, ptd);
  for (int i = 0; i < N; ++i) {
    CHECK(std::abs(frd.u[i].real() - fr.u[i].re.hi) < 1e-13);
    CHECK(std::abs(frd.u[i].imag() - fr.u[i].im.hi) < 1e-13);
  }
}

TEST_CASE("double-double identity suite on A3 tightens every residual") {
  FrobeniusSpec a3 = load_manifold("A3");
  FrameOptions opt;
  opt.conv_tol = 1e-28;
  VecX<CDD> pt(3);
  pt[0] = CDD(0.03, 0.01);
  pt[1] = CDD(-0.05, 0.04);
  pt[2] = CDD(1.02, 0.03);
  IdentityContext<CDD> ctx(a3, rotation_data(a3, semisimple_frame(a3, pt, opt)), true, 0);
  for (const IdentityRow& row : run_identity_suite(ctx)) {
    INFO(row.id, " resid=", row.residual, " scale=", row.scale);
    CHECK(row.passed);
    // every algebraic residual drops far below double rounding
    if (row.id != "f2-small-finite")
      CHECK(row.residual < 1e-20 * std::max(row.scale, 1.0));
  }
}

TEST_CASE("double-double genus-2 components vanish at tightened tolerance") {
  FrobeniusSpec a2 = load_manifold("A2");
  VecX<CDD> pt(2);
  pt[0] = CDD(0.11, -0.04);
  pt[1] = CDD(0.96, 0.05);
  FrameOptions opt;
  opt.conv_tol = 1e-29;
  RotationData<CDD> rd = rotation_data(a2, semisimple_frame(a2, pt, opt));
  JetPoint<CDD> jets;
  jets.ux = VecX<CDD>(2);
  jets.uxx = VecX<CDD>(2);
  jets.ux[0] = CDD(1.1, 0.3);
  jets.ux[1] = CDD(0.7, -0.8);
  jets.uxx[0] = CDD(0.4, 1.2);
  jets.uxx[1] = CDD(-0.9, 0.6);
  G2Report<CDD> rep = g2_components(rd, jets);
  CHECK(rep.combo_Gij().rel() < 1e-25);
  CHECK(rep.combo_Gi().rel() < 1e-25);
  CHECK(rep.combo_Pij_sym().rel() < 1e-25);
  CHECK(rep.combo_Qi_half_Pii().rel() < 1e-25);
}
