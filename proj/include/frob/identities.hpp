#pragma once

// The identity suite: small-phase lemmas, the theta-sum lemma, the precise
// theta/Omega closed forms, the M-matrix relations, and the genus-2
// generating-function value restricted to the small phase space. Left and
// right sides are coded independently so a transcription slip cannot cancel.

#include "frob/g2.hpp"
#include "frob/report.hpp"

namespace frob {

struct SingularM : Error { using Error::Error; };

// Default tolerances per identity id (relative to the summand scale).
double identity_tolerance(const std::string& id);

// Central context: every check consumes the same rotation data.
template <class C>
struct IdentityContext {
  const FrobeniusSpec& spec;
  RotationData<C> rd;
  bool conditions_hold;  // genus-1 vanishing (C2) holds for this seed
  int sample = -1;

  IdentityContext(const FrobeniusSpec& s, RotationData<C> r, bool cond, int samp)
      : spec(s), rd(std::move(r)), conditions_hold(cond), sample(samp) {}
};

namespace id_detail {

inline IdentityRow make_row(int sample, const std::string& id, const std::string& anchor,
                            const std::string& pattern, double resid, double scale,
                            bool asserted) {
  IdentityRow row;
  row.sample = sample;
  row.id = id;
  row.anchor = anchor;
  row.pattern = pattern;
  row.residual = resid;
  row.scale = std::max(scale, 1e-300);
  row.tolerance = identity_tolerance(id);
  row.asserted = asserted;
  // tolerance is relative to the summand scale, floored at unit scale so that
  // noise-level sums (e.g. cross-block terms of reducible seeds) do not
  // self-compare against a noise-level scale
  row.passed = resid <= row.tolerance * std::max(row.scale, 1.0);
  return row;
}

}  // namespace id_detail

// ------------------------------------------------------- small-phase lemmas

template <class C>
std::vector<IdentityRow> check_small_lemmas(const IdentityContext<C>& ctx) {
  const RotationData<C>& rd = ctx.rd;
  const int N = rd.n();
  std::vector<IdentityRow> rows;
  using id_detail::make_row;

  {  // string equation: sum_j r_ij h_j = 0
    double resid = 0, scale = 1e-300;
    for (int i = 0; i < N; ++i) {
      Accum<C> a;
      for (int j = 0; j < N; ++j) a.add(rd.r(i, j) * rd.h(j));
      resid = std::max(resid, mag(a.sum));
      scale = std::max(scale, a.scale);
    }
    rows.push_back(make_row(ctx.sample, "string-equation", "eq:string", "all-i",
                            resid, scale, true));
  }
  {  // theta_ij + theta_ji + sum_k r_ik r_jk = 0
    double resid = 0, scale = 1e-300;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (i == j) continue;
        Accum<C> a;
        a.add(rd.th(i, j));
        a.add(rd.th(j, i));
        for (int k = 0; k < N; ++k) a.add(rd.r(i, k) * rd.r(j, k));
        resid = std::max(resid, mag(a.sum));
        scale = std::max(scale, a.scale);
      }
    rows.push_back(make_row(ctx.sample, "theta-symmetry", "eq:theta", "all-ij",
                            resid, scale, true));
  }
  {  // sum_j r_ij v_ij = -(1/12) sum_j r_ij h_i/h_j   (needs genus-1 vanishing)
    double resid = 0, scale = 1e-300;
    for (int i = 0; i < N; ++i) {
      Accum<C> lhs, rhs;
      for (int j = 0; j < N; ++j) {
        lhs.add(rd.r(i, j) * rd.v(i, j));
        rhs.add(rd.r(i, j) * rd.h(i) / rd.h(j) / C(-12.0));
      }
      resid = std::max(resid, mag(C(lhs.sum - rhs.sum)));
      scale = std::max({scale, lhs.scale, rhs.scale});
    }
    rows.push_back(make_row(ctx.sample, "g1-1pt-reduction", "eq:g=1 1-pt small",
                            "all-i", resid, scale, ctx.conditions_hold));
  }
  {  // theta_ij h_j/h_i + theta_ji h_i/h_j = 12 r_ij^2 + sum_l (...)
    double resid = 0, scale = 1e-300;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (i == j) continue;
        Accum<C> lhs, rhs;
        lhs.add(rd.th(i, j) * rd.h(j) / rd.h(i));
        lhs.add(rd.th(j, i) * rd.h(i) / rd.h(j));
        rhs.add(C(12.0) * rd.r(i, j) * rd.r(i, j));
        for (int l = 0; l < N; ++l) {
          rhs.add(rd.r(i, l) * rd.r(j, l) * rd.h(i) * rd.h(j) / (rd.h(l) * rd.h(l)));
          rhs.add(-rd.r(i, j) * rd.r(i, l) * rd.h(j) / rd.h(l));
          rhs.add(-rd.r(i, j) * rd.r(j, l) * rd.h(i) / rd.h(l));
        }
        resid = std::max(resid, mag(C(lhs.sum - rhs.sum)));
        scale = std::max({scale, lhs.scale, rhs.scale});
      }
    rows.push_back(make_row(ctx.sample, "g1-2pt-reduction", "eq:g=1 2-pt small",
                            "all-ij", resid, scale, ctx.conditions_hold));
  }
  {  // H_i (definition) = (1/24) sum_k r_ik h_i/h_k
    VecX<C> hd = H_vector(rd, HForm::Definition);
    VecX<C> hs = H_vector(rd, HForm::SmallPhase);
    double resid = 0, scale = 1e-300;
    for (int i = 0; i < N; ++i) {
      resid = std::max(resid, mag(C(hd[i] - hs[i])));
      scale = std::max({scale, mag(hd[i]), mag(hs[i]), 1.0});
    }
    rows.push_back(make_row(ctx.sample, "h-reduction", "eq:H", "all-i", resid,
                            scale, ctx.conditions_hold));
  }
  return rows;
}

// Lemma: 2 sum_{i != k} theta_ki / h_i = (r,h expression), for every k.
template <class C>
std::vector<IdentityRow> check_lemma_sumtheta(const IdentityContext<C>& ctx) {
  const RotationData<C>& rd = ctx.rd;
  const int N = rd.n();
  double resid = 0, scale = 1e-300;
  for (int k = 0; k < N; ++k) {
    Accum<C> lhs, rhs;
    for (int i = 0; i < N; ++i)
      if (i != k) lhs.add(C(2.0) * rd.th(k, i) / rd.h(i));
    for (int i = 0; i < N; ++i) {
      rhs.add(C(7.0) * rd.h(k) * rd.r(i, k) * rd.r(i, k) / (rd.h(i) * rd.h(i)));
      rhs.add(C(-6.0) * rd.r(i, k) * rd.r(i, k) / rd.h(k));
      rhs.add(C(-2.0) * rd.h(k) * rd.h(k) * rd.r(i, i) * rd.r(i, k) /
              (rd.h(i) * rd.h(i) * rd.h(i)));
    }
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        rhs.add(rd.h(k) * rd.h(k) * rd.r(i, j) * rd.r(j, k) /
                (rd.h(i) * rd.h(j) * rd.h(j)));
        rhs.add(-rd.h(k) * rd.r(i, k) * rd.r(j, k) / (rd.h(i) * rd.h(j)));
      }
    resid = std::max(resid, mag(C(lhs.sum - rhs.sum)));
    scale = std::max({scale, lhs.scale, rhs.scale});
  }
  std::vector<IdentityRow> rows;
  rows.push_back(id_detail::make_row(ctx.sample, "sum-theta", "eq:sumtheta", "all-k",
                                     resid, scale, ctx.conditions_hold));
  return rows;
}

// ------------------------------------------------- precise closed forms

namespace id_detail {

// eqn:Pijc right-hand side (theta/r/h closed form of P_ij, i != j)
template <class C>
void pij_closed_form(const RotationData<C>& rd, int i, int j, Accum<C>& a) {
  const int N = rd.n();
  const MatX<C>& r = rd.r;
  auto h = [&](int x) { return rd.h(x); };
  auto th = [&](int x, int y) { return rd.th(x, y); };
  auto p = [&](int x, int k) {
    C v = C(1.0);
    for (int q = 0; q < k; ++q) v *= h(x);
    return v;
  };
  for (int k = 0; k < N; ++k)
    if (k != j) a.add(-h(i) * h(j) * r(i, k) * th(k, j) / (C(480.0) * p(k, 4)));
  a.add(C(-41.0) * r(i, j) * th(i, j) / (C(1440.0) * p(i, 2)));
  a.add(r(i, i) * h(j) * th(i, j) / (C(240.0) * p(i, 3)));
  for (int k = 0; k < N; ++k)
    a.add(-r(i, k) * h(j) * th(i, j) / (C(480.0) * p(i, 2) * h(k)));
  for (int k = 0; k < N; ++k)
    if (k != i) a.add(-r(i, j) * h(j) * h(k) * th(i, k) / (C(360.0) * p(i, 4)));
  for (int k = 0; k < N; ++k)
    if (k != i) a.add(-r(i, j) * h(j) * th(k, i) / (C(288.0) * p(i, 2) * h(k)));
  a.add(C(41.0) * r(i, j) * r(i, j) * r(i, j) / (C(240.0) * h(i) * h(j)));
  a.add(C(-13.0) * r(i, j) * r(j, j) * r(j, j) * h(i) / (C(240.0) * p(j, 3)));
  a.add(-r(i, j) * r(i, i) * r(i, i) * h(j) / (C(240.0) * p(i, 3)));
  a.add(C(-93.0) * r(i, i) * r(i, j) * r(i, j) / (C(2880.0) * p(i, 2)));
  a.add(C(93.0) * r(j, j) * r(i, j) * r(i, j) / (C(2880.0) * p(j, 2)));
  for (int k = 0; k < N; ++k) {
    a.add(-r(i, j) * r(i, k) * r(i, k) * h(j) / (C(720.0) * p(i, 3)));
    a.add(r(i, j) * r(j, j) * r(i, k) / (C(1440.0) * h(j) * h(k)));
    a.add(C(-13.0) * r(i, j) * r(i, j) * r(j, k) / (C(720.0) * h(j) * h(k)));
    a.add(-r(i, i) * r(i, j) * r(j, k) / (C(1440.0) * h(i) * h(k)));
    a.add(C(19.0) * r(i, j) * r(j, j) * r(j, k) * h(i) / (C(1440.0) * p(j, 2) * h(k)));
    a.add(-r(i, j) * r(i, i) * r(i, k) * h(j) / (C(288.0) * p(i, 2) * h(k)));
    a.add(C(7.0) * h(i) * r(i, j) * r(j, k) * r(j, k) / (C(160.0) * p(j, 3)));
    a.add(C(11.0) * r(i, j) * r(i, k) * r(j, k) / (C(2880.0) * p(k, 2)));
    a.add(r(i, k) * r(i, k) * r(j, k) * h(j) / (C(96.0) * p(k, 3)));
    a.add(r(i, j) * r(j, k) * r(k, k) * h(i) / (C(360.0) * p(k, 3)));
  }
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) {
      a.add(r(i, j) * r(i, l) * r(k, l) * h(j) / (C(720.0) * p(i, 2) * h(k)));
      a.add(-r(i, j) * r(j, k) * r(j, l) * h(i) / (C(1440.0) * h(j) * h(k) * h(l)));
      a.add(C(-7.0) * r(i, j) * r(j, k) * r(k, l) * h(i) / (C(1440.0) * p(j, 2) * h(l)));
      a.add(-r(i, j) * r(j, l) * r(k, l) * h(i) / (C(720.0) * h(k) * p(l, 2)));
    }
}

// (Q+P) right-hand side: 5760 (P_ii/2 + Q_i) in theta/Omega/v/r/h form
template <class C>
void qp_closed_form(const RotationData<C>& rd, int i, Accum<C>& a) {
  const int N = rd.n();
  const MatX<C>& r = rd.r;
  auto h = [&](int x) { return rd.h(x); };
  auto th = [&](int x, int y) { return rd.th(x, y); };
  auto om_t = [&](int x, int y) {
    return rd.om(x, y) * (h(x) / h(y) - h(y) / h(x));
  };
  auto p = [&](int x, int k) {
    C v = C(1.0);
    for (int q = 0; q < k; ++q) v *= h(x);
    return v;
  };
  for (int j = 0; j < N; ++j)
    if (j != i) a.add(C(-5.0) * om_t(i, j) / p(i, 2));
  for (int k = 0; k < N; ++k)
    if (k != i)
      for (int l = 0; l < N; ++l)
        a.add(C(5.0) * r(k, l) * th(i, k) / (h(i) * h(l)));
  for (int k = 0; k < N; ++k)
    if (k != i) a.add(C(-108.0) * r(i, k) * th(i, k) / p(i, 2));
  for (int k = 0; k < N; ++k)
    if (k != i) a.add(C(-8.0) * r(i, k) * th(k, i) / p(k, 2));
  for (int l = 0; l < N; ++l)
    if (l != i)
      for (int k = 0; k < N; ++k)
        a.add(C(-2.0) * r(k, l) * h(i) * th(i, l) / (h(k) * p(l, 2)));
  for (int l = 0; l < N; ++l)
    if (l != i)
      for (int k = 0; k < N; ++k)
        a.add(C(40.0) * r(i, k) * rd.v(l, k) * th(i, l) / p(i, 2));
  for (int k = 0; k < N; ++k)
    if (k != i) a.add(C(4.0) * r(k, k) * h(i) * th(i, k) / p(k, 3));
  for (int k = 0; k < N; ++k)
    if (k != i) a.add(C(-6.0) * p(i, 2) * r(i, k) * th(k, i) / p(k, 4));
  for (int k = 0; k < N; ++k)
    if (k != i) a.add(C(-40.0) * r(i, i) * h(k) * th(i, k) / p(i, 3));
  for (int k = 0; k < N; ++k)
    if (k != i)
      for (int l = 0; l < N; ++l)
        a.add(C(5.0) * r(i, l) * th(k, i) / (h(l) * h(k)));
  for (int l = 0; l < N; ++l)
    if (l != i)
      for (int k = 0; k < N; ++k)
        a.add(C(16.0) * r(i, k) * h(l) * th(i, l) / (p(i, 2) * h(k)));
  for (int k = 0; k < N; ++k)
    if (k != i) a.add(C(-10.0) * r(i, i) * th(k, i) / (h(i) * h(k)));
  a.add(C(-240.0) * r(i, i) * r(i, i) * r(i, i) / p(i, 2));
  for (int k = 0; k < N; ++k) {
    a.add(C(210.0) * r(i, k) * r(i, k) * r(i, i) / p(i, 2));
    a.add(C(8.0) * r(k, k) * r(i, i) * r(i, k) * h(i) / p(k, 3));
    a.add(C(-24.0) * r(i, k) * r(i, k) * r(i, k) / (h(i) * h(k)));
    a.add(C(12.0) * r(i, i) * r(i, k) * r(i, k) / p(k, 2));
    a.add(C(118.0) * r(i, i) * r(i, i) * r(i, k) / (h(i) * h(k)));
    a.add(C(30.0) * r(i, k) * r(i, k) * r(i, k) * h(i) / p(k, 3));
  }
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) {
      a.add(C(-14.0) * r(i, i) * r(i, k) * r(i, l) / (h(k) * h(l)));
      a.add(C(-10.0) * r(i, k) * r(i, i) * r(k, l) / (h(i) * h(l)));
      a.add(C(-4.0) * r(k, l) * r(i, i) * r(i, l) * h(i) / (h(k) * p(l, 2)));
      a.add(C(-12.0) * r(i, k) * r(i, l) * r(k, l) / p(k, 2));
      a.add(C(2.0) * r(i, l) * r(i, l) * r(k, l) / (h(k) * h(l)));
      a.add(C(-221.0) / C(3.0) * r(i, k) * r(i, k) * r(i, l) / (h(i) * h(l)));
    }
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k)
      for (int l = 0; l < N; ++l) {
        a.add(r(i, k) * r(i, l) * r(i, j) * h(i) / (C(3.0) * h(j) * h(k) * h(l)));
        a.add(C(5.0) * r(i, k) * r(i, j) * r(k, l) / (h(j) * h(l)));
      }
}

// g=1 3-pt reduction RHS (r,h function shared with the 3-point closed form)
template <class C>
void triple_rhs(const RotationData<C>& rd, int i, int j, int k, Accum<C>& a) {
  const int N = rd.n();
  const MatX<C>& r = rd.r;
  auto h = [&](int x) { return rd.h(x); };
  a.add(C(6.0) * r(i, j) * r(i, j) * r(i, k) * h(k) / h(i));
  a.add(C(6.0) * r(i, j) * r(i, j) * r(j, k) * h(k) / h(j));
  a.add(C(6.0) * r(i, k) * r(i, k) * r(i, j) * h(j) / h(i));
  a.add(C(6.0) * r(j, k) * r(j, k) * r(i, j) * h(i) / h(j));
  a.add(C(6.0) * r(i, k) * r(i, k) * r(j, k) * h(j) / h(k));
  a.add(C(6.0) * r(j, k) * r(j, k) * r(i, k) * h(i) / h(k));
  a.add(C(12.0) * r(i, j) * r(i, k) * r(j, k));
  for (int l = 0; l < N; ++l) {
    C h2 = h(l) * h(l);
    a.add(r(i, l) * r(j, k) * r(k, l) * h(i) * h(j) / h2);
    a.add(r(i, k) * r(j, l) * r(k, l) * h(i) * h(j) / h2);
    a.add(r(i, k) * r(i, l) * r(j, l) * h(j) * h(k) / h2);
    a.add(r(i, j) * r(i, l) * r(k, l) * h(j) * h(k) / h2);
    a.add(r(i, j) * r(j, l) * r(k, l) * h(i) * h(k) / h2);
    a.add(r(i, l) * r(j, k) * r(j, l) * h(i) * h(k) / h2);
    a.add(-r(i, l) * r(j, l) * r(k, l) * h(i) * h(j) * h(k) / (h2 * h(l)));
    a.add(-r(i, k) * r(j, k) * r(k, l) * h(i) * h(j) / (h(k) * h(l)));
    a.add(-r(i, j) * r(i, k) * r(i, l) * h(j) * h(k) / (h(i) * h(l)));
    a.add(-r(i, j) * r(j, k) * r(j, l) * h(i) * h(k) / (h(j) * h(l)));
    a.add(-r(i, j) * r(j, k) * r(k, l) * h(i) / h(l));
    a.add(-r(i, k) * r(j, k) * r(j, l) * h(i) / h(l));
    a.add(-r(i, k) * r(j, k) * r(i, l) * h(j) / h(l));
    a.add(-r(i, j) * r(i, k) * r(k, l) * h(j) / h(l));
    a.add(-r(i, j) * r(i, l) * r(j, k) * h(k) / h(l));
    a.add(-r(i, j) * r(i, k) * r(j, l) * h(k) / h(l));
  }
}

}  // namespace id_detail

template <class C>
std::vector<IdentityRow> check_closed_forms(const IdentityContext<C>& ctx) {
  const RotationData<C>& rd = ctx.rd;
  const int N = rd.n();
  std::vector<IdentityRow> rows;
  using id_detail::make_row;
  const MatX<C>& r = rd.r;
  auto h = [&](int x) { return rd.h(x); };
  auto th = [&](int x, int y) { return rd.th(x, y); };

  // P_ij closed form vs the assembled component (small-phase H route)
  {
    JetPoint<C> jets;  // P does not see the jets; any admissible value works
    jets.ux = VecX<C>::Ones(N);
    jets.uxx = VecX<C>::Zero(N);
    G2Report<C> rep = g2_components(rd, jets, HForm::SmallPhase);
    double residP = 0, scaleP = 1e-300;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (i == j) continue;
        Accum<C> b;
        id_detail::pij_closed_form(rd, i, j, b);
        residP = std::max(residP, mag(C(b.sum - rep.Pij(i, j))));
        scaleP = std::max({scaleP, b.scale, rep.scale_Pij(i, j)});
      }
    rows.push_back(make_row(ctx.sample, "pij-closed-form", "eqn:Pijc", "all-ij",
                            residP, scaleP, true));
    double residQ = 0, scaleQ = 1e-300;
    for (int i = 0; i < N; ++i) {
      Accum<C> b;
      id_detail::qp_closed_form(rd, i, b);
      C lhs = C(5760.0) * (rep.Pij(i, i) / C(2.0) + rep.Qi[i]);
      residQ = std::max(residQ, mag(C(lhs - b.sum)));
      scaleQ = std::max({scaleQ, b.scale, 5760.0 * rep.scale_Qi[i]});
    }
    // valid only where genus-1 primaries vanish: its derivation consumes the
    // one-point reduction, so it downgrades to informational elsewhere
    rows.push_back(make_row(ctx.sample, "qp-closed-form", "Q+P", "all-i", residQ,
                            scaleQ, ctx.conditions_hold));
  }

  // theta-weighted 3-point reduction, distinct indices
  if (N >= 3) {
    double resid = 0, scale = 1e-300;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
          if (i == j || j == k || i == k) continue;
          Accum<C> lhs, rhs;
          lhs.add(th(i, k) * r(j, k) * h(j) / h(i));
          lhs.add(th(k, i) * r(i, j) * h(j) / h(k));
          lhs.add(th(j, k) * r(i, k) * h(i) / h(j));
          lhs.add(th(k, j) * r(i, j) * h(i) / h(k));
          lhs.add(th(i, j) * r(j, k) * h(k) / h(i));
          lhs.add(th(j, i) * r(i, k) * h(k) / h(j));
          id_detail::triple_rhs(rd, i, j, k, rhs);
          resid = std::max(resid, mag(C(lhs.sum - rhs.sum)));
          scale = std::max({scale, lhs.scale, rhs.scale});
        }
    rows.push_back(make_row(ctx.sample, "g1-3pt-reduction", "g=1 3-ptijkjian",
                            "distinct-ijk", resid, scale, ctx.conditions_hold));
  }

  // Omega-tilde elimination from phi_iij
  {
    double resid = 0, scale = 1e-300;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (i == j) continue;
        Accum<C> a;
        a.add(rd.om(i, j) * (h(i) / h(j) - h(j) / h(i)));
        {
          Accum<C> brace;
          brace.add(C(20.0) * r(i, j));
          brace.add(C(4.0) * r(i, i) * h(j) / h(i));
          for (int k = 0; k < N; ++k) {
            brace.add(-r(i, k) * h(j) / h(k));
            brace.add(-r(j, k) * h(i) / h(k));
          }
          a.add(th(i, j) * brace.sum);
        }
        for (int k = 0; k < N; ++k)
          if (k != i) a.add(C(2.0) * th(i, k) * r(j, k) * h(j) / h(i));
        a.add(C(24.0) * r(i, i) * r(i, i) * r(i, j) * h(j) / h(i));
        a.add(C(24.0) * r(i, j) * r(i, j) * r(i, j) * h(i) / h(j));
        for (int k = 0; k < N; ++k) {
          a.add(C(-12.0) * r(i, k) * r(i, k) * r(j, k) * h(j) / h(k));
          a.add(C(4.0) * r(i, j) * r(i, k) * r(j, k) * h(i) * h(i) / (h(k) * h(k)));
          a.add(C(-4.0) * r(i, j) * r(i, j) * r(i, k) * h(i) / h(k));
          a.add(C(-4.0) * r(i, i) * r(i, j) * r(i, k) * h(j) / h(k));
          a.add(C(-3.0) * r(i, j) * r(i, k) * r(i, k) * h(i) * h(j) / (h(k) * h(k)));
          a.add(C(-4.0) * r(i, k) * r(i, k) * r(i, j) * h(j) / h(i));
          a.add(C(2.0) * r(i, j) * r(k, k) * r(i, k) * h(i) * h(i) * h(j) /
                (h(k) * h(k) * h(k)));
          a.add(C(-2.0) * r(i, j) * r(i, j) * r(j, k) * h(i) * h(i) / (h(k) * h(j)));
          a.add(C(-2.0) * r(i, k) * r(i, k) * r(j, k) * h(i) * h(i) * h(j) /
                (h(k) * h(k) * h(k)));
        }
        for (int k = 0; k < N; ++k)
          for (int l = 0; l < N; ++l) {
            a.add(-h(i) * h(i) * h(j) / (h(k) * h(l) * h(l)) * r(i, j) * r(k, l) * r(l, i));
            a.add(h(i) * h(j) / (h(k) * h(l)) * r(i, j) * r(i, k) * r(l, i));
            a.add(-r(k, l) * r(j, l) * r(i, k) * h(i) * h(j) / (h(l) * h(l)));
            a.add(-r(i, l) * r(k, l) * r(j, k) * h(i) * h(j) / (h(l) * h(l)));
            a.add(r(i, k) * r(i, l) * r(j, k) * h(j) / h(l));
            a.add(r(i, k) * r(k, l) * r(j, k) * h(i) * h(j) / (h(k) * h(l)));
          }
        resid = std::max(resid, mag(a.sum));
        scale = std::max(scale, a.scale);
      }
    rows.push_back(make_row(ctx.sample, "phi-iij-reduction", "g=13-pt2", "all-ij",
                            resid, scale, ctx.conditions_hold));
  }

  // theta-triple sum reduction
  {
    double resid = 0, scale = 1e-300;
    for (int i = 0; i < N; ++i) {
      Accum<C> lhs, rhs;
      for (int k = 0; k < N; ++k)
        if (k != i) {
          lhs.add(C(4.0) * th(i, k) * r(i, k) / (h(i) * h(i)));
          lhs.add(C(4.0) * th(i, k) * r(k, k) * h(i) / (h(k) * h(k) * h(k)));
          for (int j = 0; j < N; ++j)
            lhs.add(C(-2.0) * th(i, k) * r(j, k) / (h(i) * h(j)));
        }
      auto& a = rhs;
      a.add(C(-96.0) * r(i, i) * r(i, i) * r(i, i) / (h(i) * h(i)));
      for (int j = 0; j < N; ++j)
        a.add(C(48.0) * r(i, j) * r(i, j) * r(i, j) / (h(i) * h(j)));
      for (int k = 0; k < N; ++k) {
        a.add(C(44.0) * r(i, i) * r(i, i) * r(i, k) / (h(i) * h(k)));
        a.add(C(12.0) * r(i, k) * r(i, k) * r(i, i) / (h(k) * h(k)));
        a.add(C(-8.0) * r(i, i) * r(k, k) * r(i, k) * h(i) / (h(k) * h(k) * h(k)));
        a.add(C(20.0) * r(i, k) * r(i, k) * r(i, i) / (h(i) * h(i)));
        a.add(C(28.0) * r(i, k) * r(i, k) * r(i, k) * h(i) / (h(k) * h(k) * h(k)));
      }
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
          a.add(C(-12.0) * r(i, j) * r(i, k) * r(j, k) / (h(k) * h(k)));
          a.add(C(-10.0) * r(i, j) * r(i, j) * r(i, k) / (h(i) * h(k)));
          a.add(C(-18.0) * r(i, j) * r(i, j) * r(j, k) / (h(j) * h(k)));
          a.add(C(-8.0) * r(i, i) * r(i, j) * r(i, k) / (h(j) * h(k)));
          a.add(C(-7.0) * r(i, j) * r(i, k) * r(i, k) * h(i) / (h(k) * h(k) * h(j)));
          a.add(C(4.0) * r(i, i) * r(j, k) * r(i, j) * h(i) / (h(k) * h(j) * h(j)));
          a.add(C(2.0) * r(i, k) * r(k, k) * r(i, j) * h(i) * h(i) /
                (h(k) * h(k) * h(k) * h(j)));
          a.add(C(4.0) * r(i, k) * r(i, j) * r(k, j) * h(i) * h(i) /
                (h(k) * h(k) * h(j) * h(j)));
          a.add(C(-4.0) * r(i, k) * r(i, k) * r(j, k) * h(i) * h(i) /
                (h(k) * h(k) * h(k) * h(j)));
        }
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
          for (int l = 0; l < N; ++l) {
            a.add(C(2.0) * r(i, j) * r(i, k) * r(j, l) / (h(k) * h(l)));
            a.add(C(-2.0) * r(i, k) * r(j, k) * r(j, l) * h(i) / (h(l) * h(k) * h(k)));
            a.add(C(-2.0) * r(j, k) * r(k, l) * r(i, j) * h(i) / (h(k) * h(k) * h(l)));
            a.add(C(2.0) * r(i, j) * r(j, k) * r(j, l) * h(i) / (h(j) * h(k) * h(l)));
            a.add(r(i, j) * r(i, l) * r(i, k) * h(i) / (h(k) * h(j) * h(l)));
            a.add(-r(i, l) * r(j, k) * r(i, j) * h(i) * h(i) / (h(k) * h(j) * h(j) * h(l)));
          }
      resid = std::max(resid, mag(C(lhs.sum - rhs.sum)));
      scale = std::max({scale, lhs.scale, rhs.scale});
    }
    rows.push_back(make_row(ctx.sample, "theta-triple-reduction", "lem 2.4.2",
                            "all-i", resid, scale, ctx.conditions_hold));
  }

  // the genus-2 vanishing lemma for theta r v sums
  {
    double resid = 0, scale = 1e-300;
    for (int i = 0; i < N; ++i) {
      Accum<C> lhs, rhs;
      for (int j = 0; j < N; ++j)
        if (j != i)
          for (int k = 0; k < N; ++k)
            lhs.add(C(80.0) * th(i, j) * r(i, k) * rd.v(j, k) / (h(i) * h(i)));
      auto om_t = [&](int x, int y) {
        return rd.om(x, y) * (h(x) / h(y) - h(y) / h(x));
      };
      auto& a = rhs;
      for (int j = 0; j < N; ++j)
        if (j != i) {
          a.add(C(-15.0) * om_t(j, i) / (h(i) * h(i)));
          a.add(C(-5.0) * om_t(j, i) / (h(j) * h(j)));
          a.add(C(-24.0) * th(j, i) * r(j, j) * h(i) / (h(j) * h(j) * h(j)));
          a.add(C(-400.0) * th(j, i) * r(j, i) / (h(i) * h(i)));
          for (int k = 0; k < N; ++k)
            a.add(C(22.0) * th(j, i) * r(j, k) / (h(k) * h(i)));
        }
      a.add(C(288.0) * r(i, i) * r(i, i) * r(i, i) / (h(i) * h(i)));
      for (int j = 0; j < N; ++j) {
        a.add(C(792.0) * r(i, i) * r(i, j) * r(i, j) / (h(i) * h(i)));
        a.add(C(180.0) * r(i, i) * r(i, j) * r(i, j) / (h(j) * h(j)));
        a.add(C(144.0) * r(i, j) * r(i, i) * r(i, i) / (h(i) * h(j)));
        a.add(C(-72.0) * r(j, j) * r(i, j) * r(i, i) * h(i) / (h(j) * h(j) * h(j)));
        a.add(C(-960.0) * r(i, j) * r(i, j) * r(i, j) / (h(i) * h(j)));
      }
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) {
          a.add(C(-284.0) / C(3.0) * r(i, k) * r(i, j) * r(i, j) / (h(i) * h(k)));
          a.add(C(144.0) * r(j, k) * r(i, j) * r(i, j) / (h(j) * h(k)));
          a.add(C(-60.0) * r(i, j) * r(i, i) * r(i, k) / (h(j) * h(k)));
          a.add(C(-67.0) * r(i, j) * r(i, j) * r(i, k) * h(i) / (h(k) * h(j) * h(j)));
          a.add(C(-24.0) * r(k, k) * r(j, k) * r(i, j) * h(i) / (h(k) * h(k) * h(k)));
          a.add(C(36.0) * r(j, k) * r(i, j) * r(i, i) * h(i) / (h(k) * h(j) * h(j)));
          a.add(C(26.0) * r(j, j) * r(i, j) * r(i, k) * h(i) * h(i) /
                (h(k) * h(j) * h(j) * h(j)));
          a.add(C(-400.0) * r(i, j) * r(i, k) * r(j, k) / (h(i) * h(i)));
        }
      for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k)
          for (int l = 0; l < N; ++l) {
            a.add(C(12.0) * r(l, j) * r(i, j) * r(l, k) * h(i) / (h(k) * h(j) * h(j)));
            a.add(C(12.0) * r(l, i) * r(k, j) * r(j, l) * h(i) / (h(k) * h(j) * h(j)));
            a.add(C(-12.0) * r(l, i) * r(l, k) * r(l, j) * h(i) / (h(l) * h(j) * h(k)));
            a.add(C(22.0) * r(j, k) * r(i, k) * r(j, l) / (h(i) * h(l)));
            a.add(C(-12.0) * r(i, j) * r(i, l) * r(j, k) / (h(k) * h(l)));
            a.add(C(-13.0) * r(i, j) * r(i, k) * r(j, l) * h(i) * h(i) /
                  (h(j) * h(j) * h(k) * h(l)));
            a.add(C(37.0) / C(3.0) * r(i, j) * r(i, k) * r(i, l) * h(i) /
                  (h(j) * h(k) * h(l)));
          }
      resid = std::max(resid, mag(C(lhs.sum - rhs.sum)));
      scale = std::max({scale, lhs.scale, rhs.scale});
    }
    rows.push_back(make_row(ctx.sample, "te-der-g2", "lem 2.5", "all-i", resid,
                            scale, ctx.conditions_hold));
  }
  return rows;
}

// ------------------------------------------- M-matrix and O1/O2 relations

template <class C>
std::vector<IdentityRow> check_section4(const IdentityContext<C>& ctx) {
  const FrobeniusSpec& spec = ctx.spec;
  const RotationData<C>& rd = ctx.rd;
  const VecX<C>& pt = rd.frame.point;
  const int N = spec.nvars();
  std::vector<IdentityRow> rows;
  using id_detail::make_row;

  Tensor<C> F3 = spec.partials_at(pt, 3);
  Tensor<C> F4 = spec.partials_at(pt, 4);
  Tensor<C> F5 = spec.partials_at(pt, 5);
  MatX<C> M(N, N);
  for (int m = 0; m < N; ++m)
    for (int p = 0; p < N; ++p) M(m, p) = F3(0, m, p);
  double detM = mag(C(M.determinant()));
  if (detM < 1e-12) throw SingularM("det M vanishes at the sample point");
  MatX<C> Mi = M.inverse();

  // O1 - O2 via M contractions
  Accum<C> o1, o2;
  for (int a = 0; a < N; ++a)
    for (int a2 = 0; a2 < N; ++a2)
      for (int b = 0; b < N; ++b)
        for (int b2 = 0; b2 < N; ++b2)
          o1.add(F4(a, a2, b, b2) * Mi(a, a2) * Mi(b, b2));
  for (int a = 0; a < N; ++a)
    for (int a2 = 0; a2 < N; ++a2)
      for (int b = 0; b < N; ++b)
        for (int b2 = 0; b2 < N; ++b2)
          for (int p = 0; p < N; ++p)
            for (int p2 = 0; p2 < N; ++p2)
              o2.add(F3(a, b, p) * F4(0, a2, b2, p2) * Mi(a, a2) * Mi(b, b2) * Mi(p, p2));
  C o1o2 = o1.sum - o2.sum;
  C direct = c1_direct_contraction(spec, pt);
  rows.push_back(make_row(ctx.sample, "lemma-3-1", "lemma 3.1", "scalar",
                          mag(C(o1o2 - direct)),
                          std::max({o1.scale, o2.scale, mag(direct), 1.0}), true));

  // semisimple closed form: sum_{i<j} r_ij (h_i^2 + h_j^2)^2 / (h_i^3 h_j^3)
  Accum<C> rh;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      C num = rd.h(i) * rd.h(i) + rd.h(j) * rd.h(j);
      C den = rd.h(i) * rd.h(i) * rd.h(i) * rd.h(j) * rd.h(j) * rd.h(j);
      rh.add(rd.r(i, j) * num * num / den);
    }
  rows.push_back(make_row(ctx.sample, "o1o2-closed-form", "lemma 3.1 remark",
                          "scalar", mag(C(o1o2 - rh.sum)),
                          std::max({rh.scale, o1.scale, 1.0}), true));

  // genus-1 quantities in the flat frame, converted from the idempotent frame
  VecX<C> p1 = genus1_1pt(rd);
  MatX<C> p2 = genus1_2pt(rd);
  MatX<C> eta = spec.eta<C>();
  MatX<C> aw(N, N);  // aw(i, mu): coefficient of E_i in gamma_mu
  for (int mu = 0; mu < N; ++mu)
    for (int i = 0; i < N; ++i) {
      C pair{};
      for (int b = 0; b < N; ++b) pair += eta(mu, b) * rd.frame.idem(i, b);
      aw(i, mu) = pair / rd.g(i);
    }
  VecX<C> g1_flat(N);  // <<gamma_mu>>_1
  for (int mu = 0; mu < N; ++mu) {
    C acc{};
    for (int i = 0; i < N; ++i) acc += aw(i, mu) * p1[i];
    g1_flat[mu] = acc;
  }
  MatX<C> g1_flat2(N, N);  // <<gamma_mu gamma_sigma>>_1
  for (int mu = 0; mu < N; ++mu)
    for (int sg = 0; sg < N; ++sg) {
      C acc{};
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) acc += aw(i, mu) * aw(j, sg) * p2(i, j);
      g1_flat2(mu, sg) = acc;
    }

  {  // <<gamma_mu>>_1 = (1/24) <<gamma_1 gamma_a gamma_b gamma_mu>> (M^-1)^{ab}
    double resid = 0, scale = 1.0;
    for (int mu = 0; mu < N; ++mu) {
      Accum<C> rhs;
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
          rhs.add(F4(0, a, b, mu) * Mi(a, b) / C(24.0));
      resid = std::max(resid, mag(C(g1_flat[mu] - rhs.sum)));
      scale = std::max({scale, mag(g1_flat[mu]), rhs.scale});
    }
    rows.push_back(make_row(ctx.sample, "genus1-constitutive-d1", "eqn:dF1",
                            "all-mu", resid, scale, ctx.conditions_hold));
  }
  {  // second derivative of the genus-1 constitutive relation
    double resid = 0, scale = 1.0;
    for (int mu = 0; mu < N; ++mu)
      for (int sg = 0; sg < N; ++sg) {
        Accum<C> rhs;
        for (int a = 0; a < N; ++a)
          for (int b = 0; b < N; ++b) {
            for (int a2 = 0; a2 < N; ++a2)
              for (int b2 = 0; b2 < N; ++b2)
                rhs.add(-F4(0, a, b, mu) * F4(0, a2, b2, sg) * Mi(a, a2) * Mi(b, b2) /
                        C(24.0));
            rhs.add(F5(0, a, b, mu, sg) * Mi(a, b) / C(24.0));
          }
        resid = std::max(resid, mag(C(g1_flat2(mu, sg) - rhs.sum)));
        scale = std::max({scale, mag(g1_flat2(mu, sg)), rhs.scale});
      }
    rows.push_back(make_row(ctx.sample, "genus1-constitutive-d2", "eqn:ddF1",
                            "all-mu-sigma", resid, scale, ctx.conditions_hold));
  }
  {  // Q16 - Q15/24 = 0 when all genus-1 primary invariants vanish
    VecX<C> g1_with_unit(N);  // <<gamma_1 gamma_b>>_1
    for (int b = 0; b < N; ++b) g1_with_unit[b] = g1_flat2(0, b);
    Accum<C> q16, q15;
    for (int b = 0; b < N; ++b)
      for (int b2 = 0; b2 < N; ++b2)
        q16.add(g1_flat[b] * g1_with_unit[b2] * Mi(b, b2));
    for (int a = 0; a < N; ++a)
      for (int a2 = 0; a2 < N; ++a2)
        for (int b = 0; b < N; ++b)
          for (int b2 = 0; b2 < N; ++b2)
            q15.add(F4(0, a, a2, b) * g1_with_unit[b2] * Mi(a, a2) * Mi(b, b2));
    C val = q16.sum - q15.sum / C(24.0);
    rows.push_back(make_row(ctx.sample, "q16-q15-relation", "lemma 4.1(i)", "scalar",
                            mag(val), std::max({q16.scale, q15.scale / 24.0, 1.0}),
                            ctx.conditions_hold));
  }
  return rows;
}

// ------------------------------------------- genus-2 value on small phase

// The genus-2 generating-function expression restricted to the small phase
// space (tau-pairings set to zero). Two independent transcriptions guard the
// 20-term formula; returns (value, |forward - reversed|, scale).
template <class C>
struct F2SmallResult {
  C value{};
  double dual_residual = 0;
  double scale = 1;
};

// pairings <tau_-^k(S), E_i> restrict to zero on the small phase space
template <class C>
C small_phase_tau_pairing(int /*order*/, int /*i*/) { return C{}; }

template <class C>
F2SmallResult<C> evaluate_F2_small(const RotationData<C>& rd) {
  const int N = rd.n();
  const MatX<C>& r = rd.r;
  auto h = [&](int x) { return rd.h(x); };
  auto g = [&](int x) { return rd.g(x); };
  auto v = [&](int x, int y) { return rd.v(x, y); };

  Accum<C> fwd;
  for (int i = 0; i < N; ++i)
    fwd.add(C(-5.0) * small_phase_tau_pairing<C>(3, i) / (g(i) * g(i)));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (j != i)
        fwd.add(C(5.0) * rd.om(i, j) *
                (h(i) / h(j) / g(j) - C(1.0) / (h(i) * h(j))));
  for (int i = 0; i < N; ++i) {
    Accum<C> brace;
    brace.add(C(24.0) * r(i, i) / g(i));
    for (int j = 0; j < N; ++j) {
      brace.add(C(5.0) * r(i, j) * h(i) / (h(j) * g(j)));
      brace.add(C(144.0) * r(i, j) * v(i, j) / g(i));
    }
    fwd.add(small_phase_tau_pairing<C>(2, i) / g(i) * brace.sum);
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      Accum<C> brace;
      brace.add(C(-24.0) * r(i, i) * h(j) / (g(i) * h(i)));
      brace.add(C(200.0) * r(i, j) / g(j));
      for (int k = 0; k < N; ++k) {
        brace.add(r(i, k) * v(i, k) *
                  (C(120.0) / (h(i) * h(j)) - C(144.0) * h(j) / (g(i) * h(i))));
        brace.add(r(j, k) * v(i, k) * (C(85.0) / g(i) + C(45.0) / g(j)));
      }
      fwd.add(rd.th(i, j) * brace.sum);
      fwd.scale = std::max(fwd.scale, mag(rd.th(i, j)) * brace.scale);
    }
  for (int i = 0; i < N; ++i) {
    fwd.add(C(-576.0) * r(i, i) * r(i, i) * r(i, i) / g(i));
    C rv{};
    for (int j = 0; j < N; ++j) rv += r(i, j) * v(i, j);
    fwd.add(C(-576.0) * rv * rv * rv / g(i));
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      fwd.add(C(480.0) * r(i, j) * r(i, j) * r(i, j) / (h(i) * h(j)));
      fwd.add(C(-23.0) * r(i, i) * r(i, j) * r(i, j) / g(i));
      fwd.add(C(-1728.0) * r(i, i) * r(i, i) * r(i, j) * v(i, j) / g(i));
    }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k) {
        fwd.add(C(-24.0) * r(i, i) * r(i, k) * r(j, k) * h(j) / (g(i) * h(i)));
        fwd.add(C(115.0) * r(i, j) * r(i, k) * r(j, k) / g(i));
        fwd.add(C(1452.0) * r(i, k) * r(i, k) * r(i, j) * v(i, j) / g(i));
        fwd.add(C(-1728.0) * r(i, i) * r(i, j) * v(i, j) * r(i, k) * v(i, k) / g(i));
      }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
          fwd.add(C(120.0) * r(i, k) * r(j, k) * r(i, l) * v(i, l) / (h(i) * h(j)));
          fwd.add(C(-144.0) * r(i, j) * r(i, l) * r(j, k) * v(j, k) * h(l) /
                  (g(j) * h(j)));
          fwd.add(C(-40.0) * r(i, k) * r(j, k) * r(i, l) * v(j, l) / g(i));
          fwd.add(C(720.0) * r(i, j) * r(i, k) * v(i, k) * r(j, l) * v(j, l) /
                  (h(i) * h(j)));
        }

  // reversed-order re-implementation: loops run backwards, fractions grouped
  // differently; any transcription slip shows up as a dual-eval residual
  C rev{};
  {
    C acc{};
    for (int i = N - 1; i >= 0; --i) {
      C hi2 = h(i) * h(i);
      for (int l = N - 1; l >= 0; --l)
        for (int k = N - 1; k >= 0; --k)
          for (int j = N - 1; j >= 0; --j)
            acc += (C(120.0) * r(i, k) * r(j, k) * r(i, l) * v(i, l) / (h(j)) +
                    C(720.0) * r(i, j) * r(i, k) * v(i, k) * r(j, l) * v(j, l) / h(j)) /
                       h(i) -
                   C(144.0) * r(i, j) * r(i, l) * r(j, k) * v(j, k) * h(l) /
                       (h(j) * h(j) * h(j)) -
                   C(40.0) * r(i, k) * r(j, k) * r(i, l) * v(j, l) / hi2;
      for (int k = N - 1; k >= 0; --k)
        for (int j = N - 1; j >= 0; --j)
          acc += (C(115.0) * r(i, j) * r(i, k) * r(j, k) +
                  C(1452.0) * r(i, k) * r(i, k) * r(i, j) * v(i, j) -
                  C(1728.0) * r(i, i) * r(i, j) * v(i, j) * r(i, k) * v(i, k)) /
                     hi2 -
                 C(24.0) * r(i, i) * r(i, k) * r(j, k) * h(j) / (hi2 * h(i));
      C rv{};
      for (int j = N - 1; j >= 0; --j) rv += r(i, j) * v(i, j);
      acc += -C(576.0) * (r(i, i) * r(i, i) * r(i, i) + rv * rv * rv) / hi2;
      for (int j = N - 1; j >= 0; --j)
        acc += C(480.0) * r(i, j) * r(i, j) * r(i, j) / (h(i) * h(j)) -
               (C(23.0) * r(i, i) * r(i, j) * r(i, j) +
                C(1728.0) * r(i, i) * r(i, i) * r(i, j) * v(i, j)) /
                   hi2;
      for (int j = N - 1; j >= 0; --j) {
        if (j == i) continue;
        C br = C(-24.0) * r(i, i) * h(j) / (hi2 * h(i)) + C(200.0) * r(i, j) / (h(j) * h(j));
        for (int k = N - 1; k >= 0; --k) {
          br += r(i, k) * v(i, k) * (C(120.0) / (h(i) * h(j)) - C(144.0) * h(j) / (hi2 * h(i)));
          br += r(j, k) * v(i, k) * (C(85.0) / hi2 + C(45.0) / (h(j) * h(j)));
        }
        acc += rd.th(i, j) * br;
        acc += C(5.0) * rd.om(i, j) * (h(i) - h(j) * h(j) / h(i)) / (h(j) * h(j) * h(j));
      }
    }
    rev = acc;
  }
  F2SmallResult<C> out;
  out.value = fwd.sum;
  out.dual_residual = mag(C(fwd.sum - rev));
  out.scale = std::max(fwd.scale, 1.0);
  return out;
}

template <class C>
std::vector<IdentityRow> check_F2_small(const IdentityContext<C>& ctx) {
  F2SmallResult<C> res = evaluate_F2_small(ctx.rd);
  std::vector<IdentityRow> rows;
  rows.push_back(id_detail::make_row(ctx.sample, "f2-small-dual-eval", "appendix C",
                                     "scalar", res.dual_residual, res.scale, true));
  IdentityRow finite;
  finite.sample = ctx.sample;
  finite.id = "f2-small-finite";
  finite.anchor = "appendix C";
  finite.pattern = "scalar";
  finite.residual = std::isfinite(mag(res.value)) ? 0.0 : 1.0;
  finite.scale = 1.0;
  finite.tolerance = identity_tolerance(finite.id);
  finite.asserted = true;
  finite.passed = finite.residual == 0.0;
  rows.push_back(finite);
  return rows;
}

// -------------------------------------------------- genus-0 pattern + fd

template <class C>
std::vector<IdentityRow> check_genus0_pattern(const IdentityContext<C>& ctx) {
  const int N = ctx.rd.n();
  Tensor<C> Z = genus0_4pt(ctx.spec, ctx.rd.frame);
  double scale = 1e-300, resid = 0;
  for (const auto& z : Z.v) scale = std::max(scale, mag(z));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i != j) resid = std::max(resid, mag(C(Z(j, i, i, i) + Z(j, j, i, i))));
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
          std::array<int, 4> idx{i, j, k, l};
          std::sort(idx.begin(), idx.end());
          int uniq = int(std::unique(idx.begin(), idx.end()) - idx.begin());
          if (uniq >= 3) resid = std::max(resid, mag(Z(i, j, k, l)));
        }
    }
  std::vector<IdentityRow> rows;
  rows.push_back(id_detail::make_row(ctx.sample, "genus0-4pt-pattern",
                                     "eq:g=0 4-pt", "all", resid, scale, true));
  return rows;
}

template <class C>
std::vector<IdentityRow> check_deriv_rule_rows(const FrobeniusSpec& spec,
                                               const VecX<C>& pt, double step,
                                               int sample,
                                               const FrameOptions& opt = {}) {
  DerivRuleResiduals res = check_derivative_rules(spec, pt, step, opt);
  std::vector<IdentityRow> rows;
  auto add = [&](const std::string& id, const std::string& pattern, double v) {
    rows.push_back(id_detail::make_row(sample, id, "eq:der of r", pattern, v, 1.0, true));
  };
  add("deriv-rule-distinct", "i!=j!=k", res.case_distinct);
  add("deriv-rule-k-eq-i", "k=i!=j", res.case_k_eq_i);
  add("deriv-rule-i-eq-j", "i=j!=k", res.case_i_eq_j);
  add("deriv-rule-all-eq", "i=j=k", res.case_all_eq);
  rows.back().anchor = "eq:der of r";
  add("deriv-rule-theta", "E_j theta_ij", res.theta_rule);
  rows.back().anchor = "E_j theta_ij rule";
  return rows;
}

template <class C>
std::vector<IdentityRow> check_recursion_rows(const FrobeniusSpec& spec,
                                              const VecX<C>& pt, int sample,
                                              double step = 1e-3,
                                              const FrameOptions& opt = {}) {
  const int N = spec.nvars();
  Frame<C> fr = semisimple_frame(spec, pt, opt);
  RotationData<C> rd = rotation_data(spec, fr);
  VecX<C> p1 = genus1_1pt(rd);
  MatX<C> p2 = genus1_2pt(rd);
  std::vector<IdentityRow> rows;

  CorrelatorFn<C> base_phi1 = [&](const VecX<C>& q, std::span<const int> idx) {
    Frame<C> fq = semisimple_frame(spec, q, opt);
    return genus1_1pt(rotation_data(spec, fq))[idx[0]];
  };
  CorrelatorFn<C> base_phi2 = [&](const VecX<C>& q, std::span<const int> idx) {
    Frame<C> fq = semisimple_frame(spec, q, opt);
    return genus1_2pt(rotation_data(spec, fq))(idx[0], idx[1]);
  };
  {
    double resid = 0, scale = 1.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        std::vector<int> idx{i, j};
        C rec = recursion_step(spec, pt, base_phi1, idx, step, 4, opt);
        resid = std::max(resid, mag(C(rec - p2(i, j))));
        scale = std::max(scale, mag(p2(i, j)));
      }
    rows.push_back(id_detail::make_row(sample, "recursion-phi-ij", "eq:ditui",
                                       "all-ij", resid, scale, true));
  }
  if (N >= 3) {
    double resid = 0, scale = 1.0;
    for (int i = 0; i < N && i < 2; ++i)
      for (int j = i + 1; j < N; ++j)
        for (int k = j + 1; k < N; ++k) {
          std::vector<int> idx{i, j, k};
          C rec = recursion_step(spec, pt, base_phi2, idx, step, 4, opt);
          C cf = genus1_3pt_distinct(rd, i, j, k);
          resid = std::max(resid, mag(C(rec - cf)));
          scale = std::max(scale, mag(cf));
        }
    rows.push_back(id_detail::make_row(sample, "recursion-phi-ijk", "eq:ditui",
                                       "distinct-ijk", resid, scale, true));
  }
  {
    double resid = 0, scale = 1.0;
    for (int i = 0; i < N; ++i) {
      int j = (i + 1) % N;
      std::vector<int> idx{i, i, j};
      C rec = recursion_step(spec, pt, base_phi2, idx, step, 4, opt);
      C cf = genus1_3pt_iij(rd, i, j);
      resid = std::max(resid, mag(C(rec - cf)));
      scale = std::max(scale, mag(cf));
    }
    rows.push_back(id_detail::make_row(sample, "recursion-phi-iij", "eq:ditui",
                                       "i=j!=k", resid, scale, true));
  }
  {
    CorrelatorFn<C> base_z4 = [&](const VecX<C>& q, std::span<const int> idx) {
      Frame<C> fq = semisimple_frame(spec, q, opt);
      Tensor<C> Z = genus0_4pt(spec, fq);
      return Z(idx[0], idx[1], idx[2], idx[3]);
    };
    // exact 5th partials contracted with the idempotent rows
    Tensor<C> F5 = spec.partials_at(pt, 5);
    double resid = 0, scale = 1.0;
    for (int i = 0; i < N; ++i) {
      std::vector<int> idx{i, i, i, i, i};
      C rec = recursion_step(spec, pt, base_z4, idx, step, 4, opt);
      C exact{};
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
          for (int c = 0; c < N; ++c)
            for (int d = 0; d < N; ++d)
              for (int e = 0; e < N; ++e)
                exact += fr.idem(i, a) * fr.idem(i, b) * fr.idem(i, c) *
                         fr.idem(i, d) * fr.idem(i, e) * F5(a, b, c, d, e);
      resid = std::max(resid, mag(C(rec - exact)));
      scale = std::max(scale, mag(exact));
    }
    rows.push_back(id_detail::make_row(sample, "recursion-z5", "eq:ditui",
                                       "z_iiiii", resid, scale, true));
  }
  return rows;
}

// Full identity sweep at one sample.
template <class C>
std::vector<IdentityRow> run_identity_suite(const IdentityContext<C>& ctx) {
  std::vector<IdentityRow> rows;
  auto take = [&](std::vector<IdentityRow> v) {
    rows.insert(rows.end(), v.begin(), v.end());
  };
  take(check_genus0_pattern(ctx));
  take(check_small_lemmas(ctx));
  take(check_lemma_sumtheta(ctx));
  take(check_closed_forms(ctx));
  take(check_section4(ctx));
  take(check_F2_small(ctx));
  {
    auto [resid, scale] = theta_v_identity(ctx.rd);
    rows.push_back(id_detail::make_row(ctx.sample, "theta-v-product", "theta v",
                                       "all-ij", resid, scale, true));
  }
  return rows;
}

}  // namespace frob
