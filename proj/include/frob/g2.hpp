#pragma once

// The genus-2 G-function: every component (G_i = G_{i,1}+G_{i,2}, G_ij,
// P_ij, Q_i), the assembled jet-space value, and the vanishing combinations
// certified by the acceptance suite. All partial derivatives are replaced by
// the closed-form first-derivative rules; summations skip exactly the terms
// with vanishing literal denominators (u_ik at k = i) and the
// vanishing-diagonal rotation coefficients.

#include "frob/correlators.hpp"

namespace frob {

struct JetDegenerate : Error { using Error::Error; };

template <class C>
struct JetPoint {
  VecX<C> ux, uxx;
};

// H_i = (1/2) sum_{j != i} (u_i - u_j) gamma_ij^2 (definition), or the
// small-phase-space reduction (1/24) sum_k r_ik h_i / h_k used by the
// closed-form comparisons.
enum class HForm { Definition, SmallPhase };

template <class C>
VecX<C> H_vector(const RotationData<C>& rd, HForm form = HForm::Definition) {
  const int N = rd.n();
  VecX<C> H(N);
  for (int i = 0; i < N; ++i) {
    C s{};
    if (form == HForm::Definition) {
      for (int j = 0; j < N; ++j)
        if (j != i) s += (rd.u(i) - rd.u(j)) * rd.gamma(i, j) * rd.gamma(i, j);
      H[i] = s / C(2.0);
    } else {
      for (int k = 0; k < N; ++k) s += rd.r(i, k) * rd.h(i) / rd.h(k);
      H[i] = s / C(24.0);
    }
  }
  return H;
}

template <class C>
struct G2Report {
  VecX<C> Gi;
  MatX<C> Gij, Pij;
  VecX<C> Qi;
  Eigen::VectorXd scale_Gi, scale_Qi;
  Eigen::MatrixXd scale_Gij, scale_Pij;
  C total;
  double scale_total = 0;
  HForm h_form = HForm::Definition;

  struct Combo {
    double residual = 0, scale = 1;
    double rel() const { return residual / std::max(scale, 1e-300); }
  };
  // the four vanishing combinations of the main theorem
  Combo combo_Gi() const {
    Combo c;
    for (int i = 0; i < Gi.size(); ++i) {
      c.residual = std::max(c.residual, mag(Gi[i]));
      c.scale = std::max(c.scale, scale_Gi[i]);
    }
    return c;
  }
  Combo combo_Gij() const {
    Combo c;
    for (int i = 0; i < Gi.size(); ++i)
      for (int j = 0; j < Gi.size(); ++j) {
        if (i == j) continue;
        c.residual = std::max(c.residual, mag(Gij(i, j)));
        c.scale = std::max(c.scale, scale_Gij(i, j));
      }
    return c;
  }
  Combo combo_Pij_sym() const {
    Combo c;
    for (int i = 0; i < Gi.size(); ++i)
      for (int j = 0; j < Gi.size(); ++j) {
        if (i == j) continue;
        c.residual = std::max(c.residual, mag(C(Pij(i, j) + Pij(j, i))));
        c.scale = std::max({c.scale, scale_Pij(i, j), mag(Pij(i, j))});
      }
    return c;
  }
  Combo combo_Qi_half_Pii() const {
    Combo c;
    for (int i = 0; i < Gi.size(); ++i) {
      c.residual = std::max(c.residual, mag(C(Qi[i] + Pij(i, i) / C(2.0))));
      c.scale = std::max({c.scale, scale_Qi[i], scale_Pij(i, i)});
    }
    return c;
  }
};

namespace g2_detail {

template <class C>
struct Ctx {
  const RotationData<C>& rd;
  VecX<C> H;
  int N;
  Ctx(const RotationData<C>& r, HForm form) : rd(r), H(H_vector(r, form)), N(r.n()) {}
  C g(int a, int b) const { return rd.gamma(a, b); }
  C dg(int a, int b, int dir) const { return d_gamma(rd, a, b, dir); }
  C dh(int a, int dir) const { return d_h(rd, a, dir); }
  C h(int a) const { return rd.h(a); }
  C u(int a) const { return rd.u(a); }
  C hp(int a, int p) const {
    C r = C(1.0);
    for (int k = 0; k < p; ++k) r *= rd.h(a);
    return r;
  }
  // d_k (h_k^{-1} gamma_ik)
  C d_hinv_g(int i, int k) const {
    return dg(i, k, k) / h(k) - g(i, k) * dh(k, k) / (h(k) * h(k));
  }
};

// G_{i,1}: the part carrying explicit jet coordinates.
template <class C>
void Gi1(const Ctx<C>& c, int i, const VecX<C>& ux, Accum<C>& acc) {
  const int N = c.N;
  auto dx_h = [&](int a) {
    C s{};
    for (int m = 0; m < N; ++m) s += ux[m] * c.dh(a, m);
    return s;
  };
  auto dx_g = [&](int a, int b) {
    C s{};
    for (int m = 0; m < N; ++m) s += ux[m] * c.dg(a, b, m);
    return s;
  };
  C dxh_i = dx_h(i);
  acc.add(dxh_i * c.H[i] / (C(60.0) * ux[i] * c.hp(i, 3)));
  acc.add(C(-7.0) * c.dh(i, i) * dxh_i / (C(5760.0) * ux[i] * c.hp(i, 4)));
  for (int k = 0; k < N; ++k) {
    acc.add(c.g(i, k) * c.H[k] / (C(120.0) * c.h(i) * c.h(k)) * ux[k] / ux[i]);
    acc.add(-c.g(i, k) * dxh_i / (C(5760.0) * c.hp(i, 2) * c.h(k) * ux[i]));
    acc.add(-c.g(i, k) * c.dh(k, k) * ux[k] / (C(1152.0) * c.h(i) * c.hp(k, 2) * ux[i]));
    acc.add(c.dg(i, k, i) * c.h(k) * ux[k] / (C(1920.0) * ux[i] * c.hp(i, 3)));
    acc.add(dx_g(i, k) / (C(5760.0) * ux[i] * c.h(i) * c.h(k)));
    acc.add(c.dg(i, k, k) * ux[k] / (C(2880.0) * c.h(i) * c.h(k) * ux[i]));
    acc.add(C(-7.0) * c.g(i, k) * c.g(i, k) * ux[k] / (C(1152.0) * c.hp(i, 2) * ux[i]));
  }
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l)
      acc.add(-ux[k] * c.h(k) * c.g(i, l) * c.g(k, l) /
              (C(1920.0) * ux[i] * c.h(i) * c.hp(l, 2)));
}

// G_{i,2}: jet-independent part of G_i.
template <class C>
void Gi2(const Ctx<C>& c, int i, Accum<C>& acc) {
  const int N = c.N;
  acc.add(C(-3.0) * c.dh(i, i) * c.H[i] / (C(40.0) * c.hp(i, 3)));
  acc.add(C(19.0) * c.dh(i, i) * c.dh(i, i) / (C(2880.0) * c.hp(i, 4)));
  for (int k = 0; k < N; ++k) {
    acc.add(c.g(i, k) * c.H[i] / (C(120.0) * c.h(i) * c.h(k)));
    acc.add(C(7.0) * c.g(i, k) * c.H[k] / (C(120.0) * c.h(i) * c.h(k)));
    acc.add(C(-4.0) * c.g(i, k) * c.dh(i, i) / (C(5760.0) * c.hp(i, 2) * c.h(k)));
    acc.add(C(-7.0) * c.g(i, k) * c.dh(k, k) / (C(2880.0) * c.h(i) * c.hp(k, 2)));
    acc.add(c.g(i, k) * c.dh(k, k) / (C(384.0) * c.hp(i, 3)));
    acc.add(-c.dg(i, k, k) * c.h(k) / (C(384.0) * c.hp(i, 3)));
    acc.add(c.dg(i, k, i) / (C(2880.0) * c.h(i) * c.h(k)));
    acc.add(C(7.0) * c.dg(i, k, k) / (C(2880.0) * c.h(i) * c.h(k)));
    acc.add(c.g(i, k) * c.h(i) * c.dh(k, k) / (C(2880.0) * c.hp(k, 4)));
    acc.add(C(-19.0) * c.g(i, k) * c.g(i, k) / (C(720.0) * c.hp(i, 2)));
    acc.add(c.g(i, k) * c.g(i, k) / (C(1440.0) * c.hp(k, 2)));
  }
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l)
      acc.add(-c.h(i) * c.g(i, l) * c.g(k, l) / (C(2880.0) * c.h(k) * c.hp(l, 2)));
}

template <class C>
void Gij_comp(const Ctx<C>& c, int i, int j, Accum<C>& acc) {
  const int N = c.N;
  acc.add(-c.g(i, j) * c.g(i, j) * c.H[j] / (C(120.0) * c.hp(j, 2)));
  acc.add(c.g(i, j) * c.g(i, j) * c.g(i, j) / (C(480.0) * c.h(i) * c.h(j)));
  acc.add(-c.g(i, j) / C(5760.0) *
          (c.dg(i, j, i) / c.hp(i, 2) + c.dg(i, j, j) / c.hp(j, 2)));
  acc.add(c.g(i, j) * c.g(i, j) / C(5760.0) *
          (c.dh(i, i) / c.hp(i, 3) + C(3.0) * c.dh(j, j) / c.hp(j, 3)));
  for (int k = 0; k < N; ++k) {
    acc.add(c.g(i, j) * c.g(i, k) * c.g(j, k) / (C(5760.0) * c.hp(k, 2)));
    acc.add(c.g(i, j) * c.g(i, j) / (C(5760.0) * c.h(k)) *
            (c.g(j, k) / c.h(j) - c.g(i, k) / c.h(i)));
  }
}

template <class C>
void Pij_comp(const Ctx<C>& c, int i, int j, Accum<C>& acc) {
  const int N = c.N;
  const VecX<C>& H = c.H;
  acc.add(C(-2.0) * c.g(i, j) * H[i] * H[j] / (C(5.0) * c.h(i) * c.h(j)));
  acc.add(c.g(i, j) * c.dh(j, j) * H[i] / (C(20.0) * c.h(i) * c.hp(j, 2)));
  acc.add(c.g(i, j) * c.h(i) * c.dh(j, j) * H[j] / (C(20.0) * c.hp(j, 4)));
  acc.add(C(-19.0) * c.g(i, j) * c.g(i, j) * H[j] / (C(30.0) * c.hp(j, 2)));
  acc.add(-c.dg(i, j, i) * H[j] / (C(60.0) * c.h(i) * c.h(j)));
  acc.add(C(41.0) * c.g(i, j) * c.g(i, j) * c.g(i, j) / (C(240.0) * c.h(i) * c.h(j)));
  acc.add(C(-41.0) * c.g(i, j) * c.dg(i, j, i) / (C(1440.0) * c.hp(i, 2)));
  acc.add(c.dg(i, j, i) * c.dh(j, j) / (C(1440.0) * c.h(i) * c.hp(j, 2)));
  acc.add(C(79.0) * c.g(i, j) * c.g(i, j) * c.dh(j, j) / (C(1440.0) * c.hp(j, 3)));
  acc.add(-c.g(i, j) * c.dh(i, i) * c.dh(j, j) / (C(720.0) * c.hp(i, 2) * c.hp(j, 2)));
  acc.add(-c.g(i, j) * c.h(i) * c.dh(j, j) * c.dh(j, j) / (C(288.0) * c.hp(j, 5)));
  for (int k = 0; k < N; ++k) {
    acc.add(c.g(i, j) * c.g(i, k) * H[j] / (C(60.0) * c.h(j) * c.h(k)));
    acc.add(-c.g(i, k) * c.g(j, k) * c.h(i) * c.h(j) * H[k] / (C(30.0) * c.hp(k, 4)));
    acc.add(-c.g(i, j) * c.g(j, k) * c.h(i) * H[j] / (C(60.0) * c.hp(j, 2) * c.h(k)));
    acc.add(c.g(i, k) * c.g(j, k) * c.h(i) * H[j] / (C(60.0) * c.h(j) * c.hp(k, 2)));
    acc.add(C(-7.0) * c.g(i, j) * c.g(j, k) * c.h(i) * H[k] / (C(60.0) * c.hp(j, 2) * c.h(k)));
    acc.add(-c.g(i, j) * c.g(i, k) * c.dh(j, j) / (C(720.0) * c.hp(j, 2) * c.h(k)));
    acc.add(c.g(i, j) * c.g(j, k) * c.h(i) * c.dh(j, j) / (C(240.0) * c.hp(j, 3) * c.h(k)));
    acc.add(-c.g(i, k) * c.g(j, k) * c.h(i) * c.dh(j, j) /
            (C(1440.0) * c.hp(j, 2) * c.hp(k, 2)));
    acc.add(c.g(i, j) * c.g(j, k) * c.h(i) * c.dh(k, k) / (C(720.0) * c.hp(k, 4)));
    acc.add(c.g(i, k) * c.g(j, k) * c.h(i) * c.h(j) * c.dh(k, k) / (C(288.0) * c.hp(k, 5)));
    acc.add(c.g(j, k) * c.dg(i, j, i) / (C(1440.0) * c.h(i) * c.h(k)));
    acc.add(-c.h(j) * c.h(k) * c.g(i, j) * c.dg(i, k, i) / (C(360.0) * c.hp(i, 4)));
    acc.add(-c.h(j) *
            (C(3.0) * c.g(i, k) * c.dg(i, j, i) + C(2.0) * c.g(i, j) * c.dg(i, k, i)) /
            (C(1440.0) * c.hp(i, 2) * c.h(k)));
    acc.add(C(-7.0) * c.h(j) * c.g(i, j) * c.d_hinv_g(i, k) / (C(1440.0) * c.hp(i, 2)));
    acc.add(-c.h(i) * c.h(j) * c.g(i, k) * c.dg(j, k, k) / (C(480.0) * c.hp(k, 4)));
    acc.add(c.g(i, j) * c.g(i, j) * c.g(j, k) / (C(120.0) * c.h(j) * c.h(k)));
    acc.add(C(7.0) * c.h(i) * c.g(i, j) * c.g(j, k) * c.g(j, k) / (C(160.0) * c.hp(j, 3)));
    acc.add(C(11.0) * c.g(i, j) * c.g(i, k) * c.g(j, k) / (C(2880.0) * c.hp(k, 2)));
    acc.add(c.h(j) * c.g(i, k) * c.g(i, k) * c.g(j, k) / (C(96.0) * c.hp(k, 3)));
  }
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) {
      acc.add(c.h(i) * c.h(j) * c.g(i, l) * c.g(j, l) / (C(720.0) * c.h(k) * c.hp(l, 2)) *
              (c.g(k, l) / c.h(l) - c.g(j, k) / (C(2.0) * c.h(j))));
      acc.add(-c.h(i) * c.g(i, j) * c.g(j, l) * c.g(k, l) / (C(720.0) * c.h(k) * c.hp(l, 2)));
    }
}

template <class C>
void Qi_comp(const Ctx<C>& c, int i, Accum<C>& acc) {
  const int N = c.N;
  const VecX<C>& H = c.H;
  C dhi = c.dh(i, i);
  acc.add(C(4.0) * H[i] * H[i] * H[i] / (C(5.0) * c.hp(i, 2)));
  acc.add(C(-7.0) * dhi * H[i] * H[i] / (C(10.0) * c.hp(i, 3)));
  acc.add(C(7.0) * dhi * dhi * H[i] / (C(48.0) * c.hp(i, 4)));
  acc.add(-dhi * dhi * dhi / (C(120.0) * c.hp(i, 5)));
  for (int k = 0; k < N; ++k) {
    acc.add(C(7.0) * c.g(i, k) * H[i] * H[k] / (C(10.0) * c.h(i) * c.h(k)));
    acc.add(-c.g(i, k) * dhi * H[i] / (C(120.0) * c.hp(i, 2) * c.h(k)));
    acc.add(C(7.0) * c.d_hinv_g(i, k) * H[i] / (C(240.0) * c.h(i)));
    acc.add(C(-7.0) * c.g(i, k) * dhi * H[k] / (C(80.0) * c.hp(i, 2) * c.h(k)));
    if (k != i) {
      C uik = c.u(i) - c.u(k);
      acc.add(c.g(i, k) * H[k] / (C(576.0) * uik * c.h(i) * c.h(k)));
      acc.add(c.g(i, k) * c.h(k) * H[i] / (C(576.0) * uik * c.hp(i, 3)));
      acc.add(-c.dg(i, k, i) * c.h(k) / (C(576.0) * uik * c.hp(i, 3)));
      acc.add(-c.dg(i, k, k) / (C(576.0) * uik * c.h(i) * c.h(k)));
    }
    acc.add((C(2.0) * H[i] + C(7.0) * H[k]) * c.dg(i, k, i) / (C(240.0) * c.h(i) * c.h(k)));
    acc.add(C(-31.0) * c.g(i, k) * c.g(i, k) * H[i] / (C(144.0) * c.hp(i, 2)));
    acc.add(c.g(i, k) * dhi * dhi / (C(720.0) * c.hp(i, 3) * c.h(k)));
    acc.add(C(253.0) * c.g(i, k) * c.g(i, k) * dhi / (C(5760.0) * c.hp(i, 3)));
    acc.add(-c.dg(i, k, i) * dhi / (C(960.0) * c.hp(i, 2) * c.h(k)));
    acc.add(-c.g(i, k) * c.g(i, k) * c.dh(k, k) / (C(2880.0) * c.hp(k, 3)));
    acc.add(C(-7.0) * c.d_hinv_g(i, k) * dhi / (C(1920.0) * c.hp(i, 2)));
    acc.add(C(-7.0) * c.dg(i, k, i) * c.dh(k, k) / (C(5760.0) * c.h(i) * c.hp(k, 2)));
    acc.add(C(-41.0) * c.dg(i, k, i) * dhi * c.h(k) / (C(5760.0) * c.hp(i, 4)));
    acc.add((dhi * c.g(i, k) + c.h(i) * c.dg(i, k, i)) * c.dh(k, k) /
            (C(2880.0) * c.hp(k, 4)));
    acc.add(C(-113.0) * c.g(i, k) * c.dg(i, k, i) / (C(5760.0) * c.hp(i, 2)));
    acc.add((C(3.0) * c.dg(i, k, i) + c.dg(i, k, k)) * c.g(i, k) / (C(1440.0) * c.hp(k, 2)));
    acc.add(-c.g(i, k) * c.g(i, k) * c.g(i, k) / (C(240.0) * c.h(i) * c.h(k)));
  }
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) {
      acc.add(-c.g(k, l) * (dhi * c.g(i, l) + c.h(i) * c.dg(i, l, i)) /
              (C(2880.0) * c.h(k) * c.hp(l, 2)));
      acc.add(c.g(i, l) * c.g(i, l) * c.g(k, l) / (C(2880.0) * c.h(k) * c.h(l)));
      acc.add(-c.g(i, k) * c.g(i, l) * c.g(i, l) / (C(240.0) * c.h(i) * c.h(k)));
      acc.add(-c.g(k, l) * c.dg(i, k, i) / (C(2880.0) * c.h(i) * c.h(l)));
      if (l != i)
        acc.add((c.u(l) - c.u(k)) * c.g(i, k) * c.dg(k, l, l) /
                (C(1152.0) * (c.u(i) - c.u(l)) * c.h(i) * c.h(l)));
      acc.add((c.u(k) - c.u(l)) * c.g(i, k) * c.g(k, l) * c.dg(i, l, i) /
              (C(144.0) * c.hp(i, 2)));
      // 1/1440 pinned by the qp closed-form comparison and the
      // P_ii/2 + Q_i vanishing on the singularity seeds
      acc.add(c.h(l) * c.g(i, k) * c.dg(i, l, i) / (C(1440.0) * c.hp(i, 2) * c.h(k)));
      if (k != i)
        acc.add(c.h(k) * (c.u(k) - c.u(l)) * c.g(k, l) * c.dg(i, l, i) /
                (C(1152.0) * (c.u(i) - c.u(k)) * c.hp(i, 3)));
      acc.add(c.h(l) * (c.u(i) - c.u(k)) * c.g(i, k) * c.g(i, k) * c.dg(i, l, i) /
              (C(40.0) * c.hp(i, 3)));
    }
}

}  // namespace g2_detail

template <class C>
G2Report<C> g2_components(const RotationData<C>& rd, const JetPoint<C>& jets,
                                 HForm h_form = HForm::Definition) {
  const int N = rd.n();
  for (int i = 0; i < N; ++i)
    if (mag(jets.ux[i]) == 0.0)
      throw JetDegenerate("u_x vanishes in direction " + std::to_string(i));
  g2_detail::Ctx<C> ctx(rd, h_form);
  G2Report<C> rep;
  rep.h_form = h_form;
  rep.Gi = VecX<C>(N);
  rep.Qi = VecX<C>(N);
  rep.Gij = MatX<C>::Zero(N, N);
  rep.Pij = MatX<C>(N, N);
  rep.scale_Gi = Eigen::VectorXd(N);
  rep.scale_Qi = Eigen::VectorXd(N);
  rep.scale_Gij = Eigen::MatrixXd::Zero(N, N);
  rep.scale_Pij = Eigen::MatrixXd(N, N);
  for (int i = 0; i < N; ++i) {
    Accum<C> gi;
    g2_detail::Gi1(ctx, i, jets.ux, gi);
    g2_detail::Gi2(ctx, i, gi);
    rep.Gi[i] = gi.sum;
    rep.scale_Gi[i] = gi.scale;
    Accum<C> qi;
    g2_detail::Qi_comp(ctx, i, qi);
    rep.Qi[i] = qi.sum;
    rep.scale_Qi[i] = qi.scale;
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      Accum<C> p;
      g2_detail::Pij_comp(ctx, i, j, p);
      rep.Pij(i, j) = p.sum;
      rep.scale_Pij(i, j) = p.scale;
      if (i != j) {
        Accum<C> g;
        g2_detail::Gij_comp(ctx, i, j, g);
        rep.Gij(i, j) = g.sum;
        rep.scale_Gij(i, j) = g.scale;
      }
    }
  // G^(2) = sum_i G_i uxx^i + sum_{i!=j} G_ij (ux^j)^3/ux^i
  //         + (1/2) sum_{ij} P_ij ux^i ux^j + sum_i Q_i (ux^i)^2
  Accum<C> tot;
  // the cancellation scale of the assembly inherits the per-component
  // summand scales, weighted by their jet factors
  double sc = 0;
  for (int i = 0; i < N; ++i) {
    tot.add(rep.Gi[i] * jets.uxx[i]);
    sc = std::max(sc, rep.scale_Gi[i] * mag(jets.uxx[i]));
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      C w = jets.ux[j] * jets.ux[j] * jets.ux[j] / jets.ux[i];
      tot.add(rep.Gij(i, j) * w);
      sc = std::max(sc, rep.scale_Gij(i, j) * mag(w));
    }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      C w = jets.ux[i] * jets.ux[j] / C(2.0);
      tot.add(rep.Pij(i, j) * w);
      sc = std::max(sc, rep.scale_Pij(i, j) * mag(w));
    }
  for (int i = 0; i < N; ++i) {
    C w = jets.ux[i] * jets.ux[i];
    tot.add(rep.Qi[i] * w);
    sc = std::max(sc, rep.scale_Qi[i] * mag(w));
  }
  rep.total = tot.sum;
  rep.scale_total = std::max(tot.scale, sc);
  return rep;
}

template <class C>
C g2_total(const RotationData<C>& rd, const JetPoint<C>& jets) {
  return g2_components(rd, jets).total;
}

// Reduced expression for G_ij: the algebraic substitution of the small-phase
// H form and the derivative rules into the component formula.
template <class C>
std::pair<C, double> reduced_Gij(const RotationData<C>& rd, int i, int j) {
  const int N = rd.n();
  Accum<C> brace;
  brace.add(rd.th(i, j) * rd.h(j) / rd.h(i));
  brace.add(rd.th(j, i) * rd.h(i) / rd.h(j));
  brace.add(C(-12.0) * rd.r(i, j) * rd.r(i, j));
  for (int l = 0; l < N; ++l) {
    brace.add(-rd.r(i, l) * rd.r(j, l) * rd.h(i) * rd.h(j) / (rd.h(l) * rd.h(l)));
    brace.add(rd.r(i, j) * rd.r(i, l) * rd.h(j) / rd.h(l));
    brace.add(rd.r(i, j) * rd.r(j, l) * rd.h(i) / rd.h(l));
  }
  C pref = -rd.r(i, j) / (C(5760.0) * rd.h(i) * rd.h(j));
  return {pref * brace.sum, mag(pref) * brace.scale};
}

}  // namespace frob
