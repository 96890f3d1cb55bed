#include <doctest.h>

#include "frob/g2.hpp"
#include "frob/registry.hpp"
#include "frob/sampling.hpp"

using namespace frob;

namespace {
G2Report<cxd> report_at(const FrobeniusSpec& spec, SampleRng& rng,
                        HForm form = HForm::Definition) {
  Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.15);
  RotationData<cxd> rd = rotation_data(spec, fr);
  JetSample<cxd> j = sample_jet<cxd>(spec.nvars(), rng);
  return g2_components(rd, {j.ux, j.uxx}, form);
}
}  // namespace

TEST_CASE("H reduction: definition vs small-phase form") {
  for (const char* name : {"A2", "A3", "A4", "D4", "A2A2"}) {
    FrobeniusSpec spec = load_manifold(name);
    SampleRng rng(3);
    Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.15);
    RotationData<cxd> rd = rotation_data(spec, fr);
    VecX<cxd> hd = H_vector(rd, HForm::Definition);
    VecX<cxd> hs = H_vector(rd, HForm::SmallPhase);
    INFO(name);
    CHECK((hd - hs).cwiseAbs().maxCoeff() < 1e-8);
  }
  // the two forms genuinely disagree where genus-1 1-point functions do not
  // vanish; the disagreement is recorded, not asserted
  FrobeniusSpec p1 = load_manifold("P1");
  SampleRng rng(3);
  Frame<cxd> fr = sample_point<cxd>(p1, rng, 0.15);
  RotationData<cxd> rd = rotation_data(p1, fr);
  double diff = (H_vector(rd, HForm::Definition) - H_vector(rd, HForm::SmallPhase))
                    .cwiseAbs()
                    .maxCoeff();
  CHECK(diff > 1e-6);
}

TEST_CASE("H on the reducible fixture: cross-block terms contribute nothing") {
  FrobeniusSpec spec = load_manifold("A2A2");
  SampleRng rng(9);
  Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.1);
  RotationData<cxd> rd = rotation_data(spec, fr);
  VecX<cxd> H = H_vector(rd);
  // recompute keeping only pairs with |gamma_ij| above noise: identical value
  for (int i = 0; i < 4; ++i) {
    cxd kept{};
    for (int j = 0; j < 4; ++j)
      if (j != i && std::abs(rd.gamma(i, j)) > 1e-8)
        kept += (rd.u(i) - rd.u(j)) * rd.gamma(i, j) * rd.gamma(i, j);
    CHECK(std::abs(kept / 2.0 - H[i]) < 1e-12);
  }
}

TEST_CASE("vanishing combinations on ADE seeds, 20 samples each") {
  for (const char* name : {"A2", "A3", "A4", "D4"}) {
    FrobeniusSpec spec = load_manifold(name);
    SampleRng rng(1);
    for (int s = 0; s < 20; ++s) {
      G2Report<cxd> rep = report_at(spec, rng);
      INFO(name, " sample ", s);
      CHECK(rep.combo_Gij().rel() < 1e-7);
      CHECK(rep.combo_Gi().rel() < 1e-6);
      CHECK(rep.combo_Pij_sym().rel() < 1e-6);
      CHECK(rep.combo_Qi_half_Pii().rel() < 1e-6);
      CHECK(std::abs(rep.total) < 1e-6 * std::max(rep.scale_total, 1.0));
    }
  }
}

TEST_CASE("G_i is invariant under global rescaling of u_x") {
  FrobeniusSpec spec = load_manifold("A3");
  SampleRng rng(21);
  Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.15);
  RotationData<cxd> rd = rotation_data(spec, fr);
  JetSample<cxd> j = sample_jet<cxd>(3, rng);
  G2Report<cxd> a = g2_components(rd, {j.ux, j.uxx});
  VecX<cxd> ux2 = j.ux * cxd(2.7, -0.4);
  G2Report<cxd> b = g2_components(rd, {ux2, j.uxx});
  CHECK((a.Gi - b.Gi).cwiseAbs().maxCoeff() < 1e-12);
  // P/Q/Gij never see the jets at all
  CHECK((a.Pij - b.Pij).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.Qi - b.Qi).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("degenerate jets are rejected; uxx enters only through G_i") {
  FrobeniusSpec spec = load_manifold("A2");
  SampleRng rng(5);
  Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.15);
  RotationData<cxd> rd = rotation_data(spec, fr);
  JetSample<cxd> j = sample_jet<cxd>(2, rng);
  VecX<cxd> bad = j.ux;
  bad[1] = 0;
  CHECK_THROWS_AS(g2_components(rd, {bad, j.uxx}), JetDegenerate);
  // with uxx = 0 the total reduces to the P/Q/Gij part
  VecX<cxd> zero = VecX<cxd>::Zero(2);
  G2Report<cxd> rep = g2_components(rd, {j.ux, zero});
  cxd part{};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      if (i != k) part += rep.Gij(i, k) * j.ux[k] * j.ux[k] * j.ux[k] / j.ux[i];
      part += rep.Pij(i, k) * j.ux[i] * j.ux[k] / 2.0;
    }
  for (int i = 0; i < 2; ++i) part += rep.Qi[i] * j.ux[i] * j.ux[i];
  CHECK(std::abs(rep.total - part) < 1e-14 * std::max(1.0, rep.scale_total));
  CHECK(std::abs(g2_total(rd, {j.ux, zero}) - rep.total) == 0.0);
}

TEST_CASE("reduced G_ij equals the assembled component with the small-phase H") {
  for (const char* name : {"A2", "A3", "A4", "D4", "P1", "A2A2"}) {
    FrobeniusSpec spec = load_manifold(name);
    const int N = spec.nvars();
    SampleRng rng(31);
    Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.15);
    RotationData<cxd> rd = rotation_data(spec, fr);
    JetSample<cxd> j = sample_jet<cxd>(N, rng);
    G2Report<cxd> rep = g2_components(rd, {j.ux, j.uxx}, HForm::SmallPhase);
    for (int i = 0; i < N; ++i)
      for (int jj = 0; jj < N; ++jj) {
        if (i == jj) continue;
        auto [red, scale] = reduced_Gij(rd, i, jj);
        INFO(name, " (", i, ",", jj, ")");
        CHECK(std::abs(red - rep.Gij(i, jj)) <
              1e-8 * std::max({scale, rep.scale_Gij(i, jj), 1e-12}));
      }
  }
}

TEST_CASE("exploratory seed: G-function components evaluate finite") {
  FrobeniusSpec p1 = load_manifold("P1");
  SampleRng rng(41);
  G2Report<cxd> rep = report_at(p1, rng);
  CHECK(std::isfinite(std::abs(rep.total)));
  CHECK(std::isfinite(rep.combo_Gij().rel()));
}

TEST_CASE("branch flips leave the vanishing combinations vanishing") {
  for (const char* name : {"A2", "A3", "D4"}) {
    FrobeniusSpec spec = load_manifold(name);
    SampleRng rng(57);
    Frame<cxd> fr = sample_point<cxd>(spec, rng, 0.15);
    JetSample<cxd> j = sample_jet<cxd>(spec.nvars(), rng);
    for (uint32_t mask : {1u, 3u, 2u}) {
      Frame<cxd> flipped = flip_branches(fr, mask);
      RotationData<cxd> rd = rotation_data(spec, flipped);
      G2Report<cxd> rep = g2_components(rd, {j.ux, j.uxx});
      INFO(name, " mask ", mask);
      CHECK(rep.combo_Gij().rel() < 1e-7);
      CHECK(rep.combo_Gi().rel() < 1e-6);
      CHECK(rep.combo_Pij_sym().rel() < 1e-6);
      CHECK(rep.combo_Qi_half_Pii().rel() < 1e-6);
    }
  }
}
