#include <doctest.h>

#include "frob/correlators.hpp"
#include "frob/registry.hpp"
#include "frob/sampling.hpp"

using namespace frob;

namespace {
const double kRt3 = 1.7320508075688772935;

RotationData<cxd> a2_ref() {
  static FrobeniusSpec a2 = load_manifold("A2");
  VecX<cxd> pt(2);
  pt << cxd(0, 0), cxd(1, 0);
  return rotation_data(a2, semisimple_frame(a2, pt));
}
}  // namespace

TEST_CASE("A2 rotation data at (0,1) matches hand-computed values") {
  RotationData<cxd> rd = a2_ref();
  // r11 = sqrt3/8, r22 = -sqrt3/8, r12 = -i sqrt3/8
  CHECK(std::abs(rd.r(0, 0) - cxd(kRt3 / 8, 0)) < 1e-14);
  CHECK(std::abs(rd.r(1, 1) + cxd(kRt3 / 8, 0)) < 1e-14);
  CHECK(std::abs(rd.r(0, 1) - cxd(0, -kRt3 / 8)) < 1e-14);
  // theta_12 = -15i/64
  CHECK(std::abs(rd.th(0, 1) - cxd(0, -15.0 / 64)) < 1e-13);
  CHECK(std::abs(rd.th(1, 0) - cxd(0, +15.0 / 64)) < 1e-13);
  CHECK_THROWS_AS((void)rd.th(0, 0), UndefinedDiagonal);
  CHECK_THROWS_AS((void)rd.om(1, 1), UndefinedDiagonal);
  CHECK(rd.gamma(0, 0) == cxd(0, 0));
  CHECK(rd.gamma(0, 1) == rd.r(0, 1));
}

TEST_CASE("rotation invariants on every builtin: symmetry, string, theta, omega") {
  for (const char* name : {"A2", "A3", "A4", "D4", "P1", "A2A2"}) {
    FrobeniusSpec spec = load_manifold(name);
    const int N = spec.nvars();
    SampleRng rng(13);
    for (int s = 0; s < 4; ++s) {
      Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.15);
      RotationData<cxd> rd = rotation_data(spec, fr);
      for (int i = 0; i < N; ++i) {
        CHECK(std::abs(rd.v(i, i)) == 0.0);
        cxd str{};
        for (int j = 0; j < N; ++j) str += rd.r(i, j) * fr.h[j];
        INFO(name, " string equation, i=", i);
        CHECK(std::abs(str) < 1e-9);
        for (int j = 0; j < N; ++j) {
          CHECK(std::abs(rd.r(i, j) - rd.r(j, i)) < 1e-12);
          if (i == j) continue;
          cxd sum = rd.th(i, j) + rd.th(j, i);
          for (int k = 0; k < N; ++k) sum += rd.r(i, k) * rd.r(j, k);
          CHECK(std::abs(sum) < 1e-10);
          CHECK(std::abs(rd.om(i, j) - rd.om(j, i)) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("genus-0 4-point pattern: z_jiii = -z_jjii, z mixed = 0") {
  for (const char* name : {"A3", "A4", "D4", "P1"}) {
    FrobeniusSpec spec = load_manifold(name);
    const int N = spec.nvars();
    SampleRng rng(17);
    Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.15);
    Tensor<cxd> Z = genus0_4pt(spec, fr);
    double scale = 0;
    for (const auto& z : Z.v) scale = std::max(scale, std::abs(z));
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (i == j) continue;
        CHECK(std::abs(Z(j, i, i, i) + Z(j, j, i, i)) < 1e-9 * scale);
        for (int k = 0; k < N; ++k)
          for (int l = 0; l < N; ++l) {
            std::set<int> distinct{i, j, k, l};
            if (distinct.size() >= 3)
              CHECK(std::abs(Z(i, j, k, l)) < 1e-9 * scale);
          }
      }
  }
}

TEST_CASE("r from 4-point contraction matches finite difference of h") {
  for (const char* name : {"A2", "A3", "P1"}) {
    FrobeniusSpec spec = load_manifold(name);
    const int N = spec.nvars();
    SampleRng rng(23);
    Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.12);
    RotationData<cxd> rd = rotation_data(spec, fr);
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < N; ++k) {
        VecX<cxd> dir = fr.idem.row(k).transpose();
        cxd dh = frame_directional(spec, fr.point, dir, 1e-3,
                                   [&](const Frame<cxd>& f) { return f.h[i]; });
        cxd r_fd = dh / fr.h[k];
        INFO(name, " r(", i, ",", k, ")");
        CHECK(std::abs(r_fd - rd.r(i, k)) < 1e-5);
      }
  }
}

TEST_CASE("derivative rules: closed forms vs finite differences") {
  for (const char* name : {"A2", "A3", "A4", "D4", "P1", "A2A2"}) {
    FrobeniusSpec spec = load_manifold(name);
    SampleRng rng(29);
    Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.12);
    DerivRuleResiduals res = check_derivative_rules(spec, fr.point, 1e-3);
    INFO(name, " distinct=", res.case_distinct, " k=i:", res.case_k_eq_i,
         " i=j:", res.case_i_eq_j, " all:", res.case_all_eq, " th:", res.theta_rule);
    CHECK(res.max() < 1e-4);
  }
}

TEST_CASE("theta v identity, including the reducible fixture") {
  for (const char* name : {"A2", "A3", "A4", "D4", "P1", "A2A2"}) {
    FrobeniusSpec spec = load_manifold(name);
    SampleRng rng(31);
    Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.15);
    RotationData<cxd> rd = rotation_data(spec, fr);
    auto [resid, scale] = theta_v_identity(rd);
    CHECK(resid < 1e-10 * std::max(scale, 1.0));
  }
}

TEST_CASE("translation along the unit field shifts u uniformly, fixing the calculus") {
  FrobeniusSpec spec = load_manifold("A3");
  SampleRng rng(47);
  Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.12);
  RotationData<cxd> rd = rotation_data(spec, fr);
  auto [resid, scale] = theta_v_identity(rd);
  const cxd c(0.37, -0.21);
  VecX<cxd> shifted = fr.point;
  shifted[0] += c;  // t^1 direction is the unit field
  Frame<cxd> fr2 = semisimple_frame(spec, shifted);
  RotationData<cxd> rd2 = rotation_data(spec, fr2);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(fr2.u[i] - fr.u[i] - c) < 1e-12);
    CHECK(std::abs(fr2.h[i] - fr.h[i]) < 1e-12);
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(rd2.r(i, j) - rd.r(i, j)) < 1e-11);
      if (i != j) CHECK(std::abs(rd2.th(i, j) - rd.th(i, j)) < 1e-10);
    }
  }
  auto [resid2, scale2] = theta_v_identity(rd2);
  CHECK(std::abs(resid2 - resid) < 1e-12 * std::max(1.0, scale));
}

TEST_CASE("reducible fixture: cross-block rotation coefficients vanish") {
  FrobeniusSpec spec = load_manifold("A2A2");
  SampleRng rng(37);
  Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.1);
  RotationData<cxd> rd = rotation_data(spec, fr);
  // block membership via the s-coordinates of the direct sum:
  // gamma1 = d1+d3, gamma2 = d1-d3, gamma3 = d2-d4, gamma4 = (d2+d4)/2.
  // block 1 of the sum is spanned by (gamma1+gamma2, gamma4 + gamma3/1):
  // an idempotent lies in block 1 iff its s3/s4 components vanish:
  //   s1 = c1 + c2, s2 = c3 + c4/2, s3 = c1 - c2, s4 = -c3 + c4/2.
  int cross_pairs = 0;
  auto block_of = [&](int i) {
    cxd c1 = fr.idem(i, 0), c2 = fr.idem(i, 1), c3 = fr.idem(i, 2), c4 = fr.idem(i, 3);
    double b1 = std::abs(c1 - c2) + std::abs(-c3 + c4 / 2.0);  // s3, s4 parts
    double b2 = std::abs(c1 + c2) + std::abs(c3 + c4 / 2.0);   // s1, s2 parts
    return b1 < b2 ? 1 : 2;
  };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && block_of(i) != block_of(j)) {
        ++cross_pairs;
        CHECK(std::abs(rd.r(i, j)) < 1e-10);
      }
  CHECK(cross_pairs == 8);
}
