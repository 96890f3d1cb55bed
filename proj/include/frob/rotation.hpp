#pragma once

// Rotation-coefficient calculus at a semisimple point: r_ij, v_ij, theta_ij,
// Omega_ij, their closed-form first derivatives, and the finite-difference
// cross-checks of the derivative rules.

#include "frob/frobenius.hpp"

namespace frob {

struct UndefinedDiagonal : Error { using Error::Error; };

template <class C>
struct RotationData {
  Frame<C> frame;
  MatX<C> r;      // big-phase rotation coefficients restricted to H
  MatX<C> v;      // v_ij = (u_j - u_i) r_ij
  MatX<C> theta;  // diagonal tagged NaN
  MatX<C> omega;  // diagonal tagged NaN

  int n() const { return int(r.rows()); }
  const C& u(int i) const { return frame.u[i]; }
  const C& g(int i) const { return frame.g[i]; }
  const C& h(int i) const { return frame.h[i]; }

  // theta/Omega are defined only off-diagonal
  const C& th(int i, int j) const {
    if (i == j) throw UndefinedDiagonal("theta_ii is undefined");
    return theta(i, j);
  }
  const C& om(int i, int j) const {
    if (i == j) throw UndefinedDiagonal("Omega_ii is undefined");
    return omega(i, j);
  }
  // rotation coefficients in the convention with vanishing diagonal
  C gamma(int i, int j) const { return i == j ? C{} : r(i, j); }
};

// Genus-0 4-point values z_{ijkl}: exact 4th partials of F contracted with
// the idempotent coefficient rows.
template <class C>
Tensor<C> genus0_4pt(const FrobeniusSpec& spec, const Frame<C>& fr) {
  const int N = spec.nvars();
  Tensor<C> F4 = spec.partials_at(fr.point, 4);
  // contract one slot at a time
  Tensor<C> T1(N, 4), T2(N, 4), T3(N, 4), Z(N, 4);
  for (int i = 0; i < N; ++i)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c)
        for (int d = 0; d < N; ++d) {
          C acc{};
          for (int a = 0; a < N; ++a) acc += fr.idem(i, a) * F4(a, b, c, d);
          T1(i, b, c, d) = acc;
        }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int c = 0; c < N; ++c)
        for (int d = 0; d < N; ++d) {
          C acc{};
          for (int b = 0; b < N; ++b) acc += fr.idem(j, b) * T1(i, b, c, d);
          T2(i, j, c, d) = acc;
        }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int d = 0; d < N; ++d) {
          C acc{};
          for (int c = 0; c < N; ++c) acc += fr.idem(k, c) * T2(i, j, c, d);
          T3(i, j, k, d) = acc;
        }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
          C acc{};
          for (int d = 0; d < N; ++d) acc += fr.idem(l, d) * T3(i, j, k, d);
          Z(i, j, k, l) = acc;
        }
  return Z;
}

// r from the genus-0 4-point structure: z_iiii = -g_i r_ii,
// z_jiii = -h_i h_j r_ij; theta, Omega from their definitions.
template <class C>
RotationData<C> rotation_data(const FrobeniusSpec& spec, const Frame<C>& fr) {
  const int N = spec.nvars();
  Tensor<C> Z = genus0_4pt(spec, fr);
  RotationData<C> rd;
  rd.frame = fr;
  rd.r = MatX<C>(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      rd.r(i, j) = (i == j) ? -Z(i, i, i, i) / fr.g[i]
                            : -Z(j, i, i, i) / (fr.h[i] * fr.h[j]);
  rd.v = MatX<C>(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) rd.v(i, j) = (fr.u[j] - fr.u[i]) * rd.r(i, j);
  const C nan = scalar_traits<C>::make(std::numeric_limits<double>::quiet_NaN(), 0);
  rd.theta = MatX<C>::Constant(N, N, nan);
  rd.omega = MatX<C>::Constant(N, N, nan);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      C s{};
      for (int k = 0; k < N; ++k) s += rd.r(i, k) * rd.v(j, k);
      rd.theta(i, j) = (rd.r(i, j) + s) / (fr.u[j] - fr.u[i]);
    }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      C s{};
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) s += rd.r(i, l) * rd.r(j, k) * rd.v(k, l);
      rd.omega(i, j) = (rd.theta(i, j) - rd.theta(j, i) + s) / (fr.u[j] - fr.u[i]);
    }
  return rd;
}

// --------------------------------------------------- closed-form derivatives
// E_k r_ij (first-derivative rules; the tau-pairing term vanishes on H).
template <class C>
C d_r(const RotationData<C>& rd, int i, int j, int k) {
  const int N = rd.n();
  C base = rd.r(i, k) * rd.r(j, k);
  if (i != j) {
    if (k == i) return base + rd.th(i, j);
    if (k == j) return base + rd.th(j, i);
    return base;
  }
  if (k != i) return base + rd.h(k) / rd.h(i) * rd.th(i, k);
  C extra{};
  for (int l = 0; l < N; ++l) extra -= C(2.0) * rd.r(i, l) * rd.r(i, l);
  for (int p = 0; p < N; ++p)
    if (p != i) extra += rd.h(p) / rd.h(i) * rd.th(p, i);
  return base + extra;
}

// E_k gamma_ij in the vanishing-diagonal convention (gamma_ii == 0 as a
// function, so all its derivatives vanish).
template <class C>
C d_gamma(const RotationData<C>& rd, int i, int j, int k) {
  if (i == j) return C{};
  return d_r(rd, i, j, k);
}

// E_k h_i = r_ik h_k
template <class C>
C d_h(const RotationData<C>& rd, int i, int k) {
  return rd.r(i, k) * rd.h(k);
}

// E_j theta_ij = (r_jj - (h_j/h_i) r_ij) theta_ij - Omega_ij, i != j
template <class C>
C d_theta_j(const RotationData<C>& rd, int i, int j) {
  return (rd.r(j, j) - rd.h(j) / rd.h(i) * rd.r(i, j)) * rd.th(i, j) - rd.om(i, j);
}

// ------------------------------------------------ finite-difference checks

template <class C>
C directional_derivative(const FrobeniusSpec& spec, const VecX<C>& pt,
                         const VecX<C>& dir, FrameQuantity q, int i, int j,
                         double step, const FrameOptions& opt) {
  switch (q) {
    case FrameQuantity::U:
      return frame_directional(spec, pt, dir, step,
                               [&](const Frame<C>& f) { return f.u[i]; }, opt);
    case FrameQuantity::G:
      return frame_directional(spec, pt, dir, step,
                               [&](const Frame<C>& f) { return f.g[i]; }, opt);
    case FrameQuantity::H:
      return frame_directional(spec, pt, dir, step,
                               [&](const Frame<C>& f) { return f.h[i]; }, opt);
    case FrameQuantity::R:
      return frame_directional(
          spec, pt, dir, step,
          [&](const Frame<C>& f) { return rotation_data(spec, f).r(i, j); }, opt);
    case FrameQuantity::Theta:
      return frame_directional(
          spec, pt, dir, step,
          [&](const Frame<C>& f) { return rotation_data(spec, f).th(i, j); }, opt);
  }
  throw Error("bad frame quantity");
}

struct DerivRuleResiduals {
  double case_distinct = 0;   // i != j != k
  double case_k_eq_i = 0;     // k = i != j
  double case_i_eq_j = 0;     // i = j != k
  double case_all_eq = 0;     // i = j = k
  double theta_rule = 0;      // E_j theta_ij
  double max() const {
    return std::max({case_distinct, case_k_eq_i, case_i_eq_j, case_all_eq, theta_rule});
  }
};

// |finite difference - closed form| / scale for every case of the
// first-derivative rules, max over index patterns.
template <class C>
DerivRuleResiduals check_derivative_rules(const FrobeniusSpec& spec,
                                          const VecX<C>& pt, double step,
                                          const FrameOptions& opt = {}) {
  const int N = spec.nvars();
  Frame<C> fr = semisimple_frame(spec, pt, opt);
  RotationData<C> rd = rotation_data(spec, fr);
  DerivRuleResiduals out;
  auto dir_of = [&](int k) {
    VecX<C> d(N);
    for (int a = 0; a < N; ++a) d[a] = fr.idem(k, a);
    return d;
  };
  for (int k = 0; k < N; ++k) {
    VecX<C> ek = dir_of(k);
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        C fd = frame_directional(
            spec, pt, ek, step,
            [&](const Frame<C>& f) { return rotation_data(spec, f).r(i, j); }, opt);
        C cf = d_r(rd, i, j, k);
        double scale = std::max({mag(fd), mag(cf), 1e-6});
        double res = mag(C(fd - cf)) / scale;
        if (i != j && k != i && k != j) out.case_distinct = std::max(out.case_distinct, res);
        else if (i != j) out.case_k_eq_i = std::max(out.case_k_eq_i, res);
        else if (k != i) out.case_i_eq_j = std::max(out.case_i_eq_j, res);
        else out.case_all_eq = std::max(out.case_all_eq, res);
      }
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      VecX<C> ej = dir_of(j);
      C fd = frame_directional(
          spec, pt, ej, step,
          [&](const Frame<C>& f) { return rotation_data(spec, f).th(i, j); }, opt);
      C cf = d_theta_j(rd, i, j);
      double scale = std::max({mag(fd), mag(cf), 1e-6});
      out.theta_rule = std::max(out.theta_rule, mag(C(fd - cf)) / scale);
    }
  return out;
}

// Reassigns square-root branches h_i -> -h_i on the masked indices. Observable
// quantities must not care; used by the branch-flip invariance checks.
template <class C>
Frame<C> flip_branches(Frame<C> fr, uint32_t mask) {
  for (int i = 0; i < int(fr.h.size()); ++i)
    if (mask & (1u << i)) fr.h[i] = -fr.h[i];
  return fr;
}

// theta_ij v_ij = r_ij (r_ij + sum_k r_ik v_jk); max residual over i != j.
template <class C>
std::pair<double, double> theta_v_identity(const RotationData<C>& rd) {
  const int N = rd.n();
  double resid = 0, scale = 1e-300;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      C lhs = rd.th(i, j) * rd.v(i, j);
      C s = rd.r(i, j);
      for (int k = 0; k < N; ++k) s += rd.r(i, k) * rd.v(j, k);
      C rhs = rd.r(i, j) * s;
      resid = std::max(resid, mag(C(lhs - rhs)));
      scale = std::max({scale, mag(lhs), mag(rhs)});
    }
  return {resid, scale};
}

}  // namespace frob
