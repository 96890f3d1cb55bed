#pragma once

// Genus-0 and genus-1 correlation functions in the idempotent frame:
// closed forms for 1-, 2- and selected 3-point functions, the recursion that
// raises the point count, and the condition checks (C1)/(C2).

#include <functional>
#include <span>

#include "frob/rotation.hpp"

namespace frob {

struct RecursionDepthExceeded : Error { using Error::Error; };

// 24 phi_i = -12 sum_j r_ij v_ij - sum_j (h_i/h_j) r_ij
template <class C>
VecX<C> genus1_1pt(const RotationData<C>& rd) {
  const int N = rd.n();
  VecX<C> phi(N);
  for (int i = 0; i < N; ++i) {
    C s{};
    for (int j = 0; j < N; ++j)
      s += C(-12.0) * rd.r(i, j) * rd.v(i, j) - rd.h(i) / rd.h(j) * rd.r(i, j);
    phi[i] = s / C(24.0);
  }
  return phi;
}

// Genus-1 2-point functions; the tau-pairing term in phi_ii vanishes on H.
template <class C>
MatX<C> genus1_2pt(const RotationData<C>& rd) {
  const int N = rd.n();
  VecX<C> p1 = genus1_1pt(rd);
  MatX<C> out(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i != j) {
        C s = C(12.0) * rd.r(i, j) * rd.r(i, j);
        for (int l = 0; l < N; ++l)
          s += rd.r(i, l) * rd.r(j, l) * rd.h(i) * rd.h(j) / (rd.h(l) * rd.h(l)) -
               rd.r(i, j) * rd.r(i, l) * rd.h(j) / rd.h(l) -
               rd.r(i, j) * rd.r(j, l) * rd.h(i) / rd.h(l);
        s -= rd.th(i, j) * rd.h(j) / rd.h(i) + rd.th(j, i) * rd.h(i) / rd.h(j);
        s -= C(24.0) * rd.r(i, j) *
             (rd.h(j) / rd.h(i) * p1[i] + rd.h(i) / rd.h(j) * p1[j]);
        out(i, j) = s / C(24.0);
      } else {
        C s = C(12.0) * rd.r(i, i) * rd.r(i, i);
        for (int j2 = 0; j2 < N; ++j2) {
          C hr = rd.h(i) / rd.h(j2);
          s += rd.r(i, j2) * rd.r(i, j2) * (C(-10.0) + hr * hr) -
               C(2.0) * rd.r(i, i) * rd.r(i, j2) * hr;
        }
        for (int j2 = 0; j2 < N; ++j2)
          if (j2 != i)
            s -= rd.th(i, j2) * rd.h(i) / rd.h(j2) + rd.th(j2, i) * rd.h(j2) / rd.h(i);
        s -= C(48.0) * rd.r(i, i) * p1[i];
        for (int j2 = 0; j2 < N; ++j2)
          s += C(24.0) * rd.r(i, j2) * rd.h(i) / rd.h(j2) * p1[j2];
        out(i, i) = s / C(24.0);
      }
    }
  return out;
}

// Genus-1 3-point function phi_ijk for distinct i, j, k (closed form).
template <class C>
C genus1_3pt_distinct(const RotationData<C>& rd, int i, int j, int k) {
  const int N = rd.n();
  VecX<C> p1 = genus1_1pt(rd);
  MatX<C> p2 = genus1_2pt(rd);
  const MatX<C>& r = rd.r;
  auto h = [&](int a) { return rd.h(a); };
  auto th = [&](int a, int b) { return rd.th(a, b); };
  C s{};
  s += C(-24.0) * r(i,k) * r(j,k) * h(j) / h(i) * p1[i];
  s += C(-24.0) * r(i,k) * r(j,k) * h(i) / h(j) * p1[j];
  s += C(-24.0) * r(i,j) * r(i,k) * h(k) / h(j) * p1[j];
  s += C(-24.0) * r(i,j) * r(j,k) * h(k) / h(i) * p1[i];
  s += C(-24.0) * r(i,k) * r(i,j) * h(j) / h(k) * p1[k];
  s += C(-24.0) * r(i,j) * r(j,k) * h(i) / h(k) * p1[k];
  s += C(-24.0) * r(i,k) * r(j,k) * (h(j) / h(k)) * (h(i) / h(k)) * p1[k];
  s += C(-24.0) * r(i,j) * r(j,k) * (h(k) / h(j)) * (h(i) / h(j)) * p1[j];
  s += C(-24.0) * r(i,k) * r(j,i) * (h(k) / h(i)) * (h(j) / h(i)) * p1[i];
  s += C(-24.0) * r(i,j) * h(i) / h(j) * p2(j,k);
  s += C(-24.0) * r(i,k) * h(i) / h(k) * p2(j,k);
  s += C(-24.0) * r(i,j) * h(j) / h(i) * p2(i,k);
  s += C(-24.0) * r(j,k) * h(j) / h(k) * p2(i,k);
  s += C(-24.0) * r(i,k) * h(k) / h(i) * p2(i,j);
  s += C(-24.0) * r(j,k) * h(k) / h(j) * p2(i,j);
  s -= th(i,k) * r(j,k) * h(j) / h(i);
  s -= th(k,i) * r(i,j) * h(j) / h(k);
  s -= th(j,k) * r(i,k) * h(i) / h(j);
  s -= th(k,j) * r(i,j) * h(i) / h(k);
  s -= th(i,j) * r(j,k) * h(k) / h(i);
  s -= th(j,i) * r(i,k) * h(k) / h(j);
  s += C(6.0) * r(i,j) * r(i,j) * r(i,k) * h(k) / h(i);
  s += C(6.0) * r(i,j) * r(i,j) * r(j,k) * h(k) / h(j);
  s += C(6.0) * r(i,k) * r(i,k) * r(i,j) * h(j) / h(i);
  s += C(6.0) * r(j,k) * r(j,k) * r(i,j) * h(i) / h(j);
  s += C(6.0) * r(i,k) * r(i,k) * r(j,k) * h(j) / h(k);
  s += C(6.0) * r(j,k) * r(j,k) * r(i,k) * h(i) / h(k);
  s += C(12.0) * r(i,j) * r(i,k) * r(j,k);
  for (int l = 0; l < N; ++l) {
    C h2 = h(l) * h(l);
    s += r(i,l) * r(j,k) * r(k,l) * h(i) * h(j) / h2;
    s += r(i,k) * r(j,l) * r(k,l) * h(i) * h(j) / h2;
    s += r(i,k) * r(i,l) * r(j,l) * h(j) * h(k) / h2;
    s += r(i,j) * r(i,l) * r(k,l) * h(j) * h(k) / h2;
    s += r(i,j) * r(j,l) * r(k,l) * h(i) * h(k) / h2;
    s += r(i,l) * r(j,k) * r(j,l) * h(i) * h(k) / h2;
    s -= r(i,l) * r(j,l) * r(k,l) * h(i) * h(j) * h(k) / (h2 * h(l));
    s -= r(i,k) * r(j,k) * r(k,l) * h(i) * h(j) / (h(k) * h(l));
    s -= r(i,j) * r(i,k) * r(i,l) * h(j) * h(k) / (h(i) * h(l));
    s -= r(i,j) * r(j,k) * r(j,l) * h(i) * h(k) / (h(j) * h(l));
    s -= r(i,j) * r(j,k) * r(k,l) * h(i) / h(l);
    s -= r(i,k) * r(j,k) * r(j,l) * h(i) / h(l);
    s -= r(i,k) * r(j,k) * r(i,l) * h(j) / h(l);
    s -= r(i,j) * r(i,k) * r(k,l) * h(j) / h(l);
    s -= r(i,j) * r(i,l) * r(j,k) * h(k) / h(l);
    s -= r(i,j) * r(i,k) * r(j,l) * h(k) / h(l);
  }
  return s / C(12.0);
}

// Genus-1 3-point function phi_iij for i != j; tau-pairing term is 0 on H.
template <class C>
C genus1_3pt_iij(const RotationData<C>& rd, int i, int j) {
  const int N = rd.n();
  VecX<C> p1 = genus1_1pt(rd);
  MatX<C> p2 = genus1_2pt(rd);
  const MatX<C>& r = rd.r;
  auto h = [&](int a) { return rd.h(a); };
  auto th = [&](int a, int b) { return rd.th(a, b); };
  C omt = rd.om(i, j) * (h(i) / h(j) - h(j) / h(i));
  C s = omt;
  {
    C brace = C(24.0) * r(i,j) + C(4.0) * r(i,i) * h(j) / h(i);
    for (int k = 0; k < N; ++k)
      brace -= r(i,k) * h(j) / h(k) + r(j,k) * h(i) / h(k);
    s += th(i,j) * brace;
  }
  s += th(j,i) * C(4.0) * r(i,j) * (h(i) * h(i)) / (h(j) * h(j));
  for (int k = 0; k < N; ++k)
    if (k != i) s += th(i,k) * r(j,k) * h(j) / h(i);
  for (int k = 0; k < N; ++k)
    if (k != i)
      s += th(k,i) * (C(3.0) * r(i,j) * h(j) * h(k) / (h(i) * h(i)) -
                      r(i,j) * h(j) / h(k) - r(j,k) * h(i) * h(j) / (h(k) * h(k)));
  s -= C(24.0) * r(i,i) * r(i,i) * r(i,j) * h(j) / h(i);
  s -= C(24.0) * r(i,j) * r(i,j) * r(i,j) * h(i) / h(j);
  for (int k = 0; k < N; ++k) {
    s += C(21.0) * r(i,j) * r(i,k) * r(i,k) * h(j) / h(i);
    s -= C(2.0) * r(i,k) * r(i,k) * r(j,k) * h(i) * h(i) * h(j) / (h(k) * h(k) * h(k));
    s += C(4.0) * r(i,i) * r(i,j) * r(i,k) * h(j) / h(k);
    s += C(2.0) * r(j,k) * r(i,j) * r(i,j) * h(i) * h(i) / (h(j) * h(k));
  }
  for (int k = 0; k < N; ++k)
    for (int l = 0; l < N; ++l) {
      s -= r(i,k) * r(j,l) * r(k,l) * h(i) * h(j) / (h(l) * h(l));
      s -= r(i,j) * r(i,k) * r(k,l) * h(j) / h(l);
    }
  s += C(96.0) * r(i,i) * r(i,j) * h(j) / h(i) * p1[i];
  s -= C(24.0) * th(i,j) * (p1[i] * h(j) / h(i) + p1[j] * h(i) / h(j));
  s += C(48.0) * r(i,j) * r(i,j) * h(i) * h(i) / (h(j) * h(j)) * p1[j];
  for (int k = 0; k < N; ++k)
    s -= C(24.0) * r(i,j) * r(i,k) * h(j) / h(k) * p1[k];
  for (int k = 0; k < N; ++k)
    s += C(24.0) * r(i,k) * h(i) / h(k) * p2(j, k);
  return s / C(24.0);
}

// Aggregated correlator values at one point: the genus-0 4-point tensor and
// the genus-1 closed forms (3-point entries on demand via the functions
// above; only the patterns with at most two distinct indices are tabulated).
template <class C>
struct CorrelatorTables {
  Tensor<C> z4;
  VecX<C> phi1;
  MatX<C> phi2;
  MatX<C> phi_iij;  // (i, j) entry = phi_{iij}, diagonal unset
};

template <class C>
CorrelatorTables<C> genus1_closed_forms(const FrobeniusSpec& spec,
                                        const RotationData<C>& rd) {
  const int N = rd.n();
  CorrelatorTables<C> t;
  t.z4 = genus0_4pt(spec, rd.frame);
  t.phi1 = genus1_1pt(rd);
  t.phi2 = genus1_2pt(rd);
  t.phi_iij = MatX<C>::Zero(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) t.phi_iij(i, j) = genus1_3pt_iij(rd, i, j);
  return t;
}

// ----------------------------------------------------------- recursion step
// A correlator evaluator in the idempotent frame at an arbitrary nearby
// point; indices refer to the sheet ordering of the frame at that point.
template <class C>
using CorrelatorFn = std::function<C(const VecX<C>&, std::span<const int>)>;

// Raises a k-point function to k+1 points:
//   <<E_{i1} ... E_{ik+1}>> = E_{ik+1} <<E_{i1}..E_{ik}>>
//     - (sum_j r_{ij,ik+1} h_{ik+1}/h_{ij}) <<E_{i1}..E_{ik}>>
//     - sum_j r_{ij,ik+1} h_{ij}/h_{ik+1} <<.. E_{ij} dropped .. E_{ik+1}>>
//     + sum_j delta_{ik+1,ij} sum_p r_{p,ik+1} h_{ik+1}/h_p <<.. E_{ij}->E_p ..>>
template <class C>
C recursion_step(const FrobeniusSpec& spec, const VecX<C>& pt,
                 const CorrelatorFn<C>& base, std::span<const int> indices,
                 double step, int k_max = 4, const FrameOptions& opt = {}) {
  const int kp1 = int(indices.size());
  if (kp1 < 2) throw Error("recursion needs at least two indices");
  if (kp1 > k_max + 1)
    throw RecursionDepthExceeded("k exceeds configured maximum");
  const int last = indices[kp1 - 1];
  std::vector<int> head(indices.begin(), indices.end() - 1);
  Frame<C> fr = semisimple_frame(spec, pt, opt);
  RotationData<C> rd = rotation_data(spec, fr);
  const int N = rd.n();

  // derivative term, with sheet re-pairing at the stencil points
  VecX<C> dir(N);
  for (int a = 0; a < N; ++a) dir[a] = fr.idem(last, a);
  auto aligned = [&](const VecX<C>& q, const std::vector<int>& idx) {
    Frame<C> fq = semisimple_frame(spec, q, opt);
    Frame<C> aligned_fq = fq;
    align_frame(aligned_fq, fr);
    // position of base-sheet index within the frame at q
    std::vector<int> perm(N);
    for (int i = 0; i < N; ++i) {
      int best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (int jj = 0; jj < N; ++jj) {
        double d = mag(C(fq.u[jj] - aligned_fq.u[i]));
        if (d < bd) { bd = d; best = jj; }
      }
      perm[i] = best;
    }
    std::vector<int> mapped(idx.size());
    for (size_t s = 0; s < idx.size(); ++s) mapped[s] = perm[idx[s]];
    return base(q, mapped);
  };
  auto eval_at = [&](double s) {
    VecX<C> q = pt + dir * C(s);
    return aligned(q, head);
  };
  auto central = [&](double hh) { return (eval_at(hh) - eval_at(-hh)) / C(2 * hh); };
  C deriv = (central(step / 2) * C(4.0) - central(step)) / C(3.0);

  C val = deriv;
  C weight{};
  for (int ij : head) weight += rd.r(ij, last) * rd.h(last) / rd.h(ij);
  val -= weight * base(pt, head);

  for (int jslot = 0; jslot < kp1 - 1; ++jslot) {
    std::vector<int> dropped;
    for (int s = 0; s < kp1 - 1; ++s)
      if (s != jslot) dropped.push_back(head[s]);
    std::vector<int> with_last = dropped;
    with_last.push_back(last);
    val -= rd.r(head[jslot], last) * rd.h(head[jslot]) / rd.h(last) *
           base(pt, with_last);
    if (head[jslot] == last) {
      for (int p = 0; p < N; ++p) {
        std::vector<int> with_p = dropped;
        with_p.push_back(p);
        val += rd.r(p, last) * rd.h(last) / rd.h(p) * base(pt, with_p);
      }
    }
  }
  return val;
}

// ------------------------------------------------------- condition checks

template <class C>
struct C1Report {
  std::vector<C> direct;        // eta-contracted <<g_a g^a g_b g^b>> per point
  std::vector<C> rh_form;       // sum r_ij/(h_i h_j) - 2 sum r_ii/h_i^2
  double max_pointwise = 0;     // |direct - rh_form|
  double spread = 0;            // max |direct - direct_0|
  bool passed = false;
};

template <class C>
C c1_direct_contraction(const FrobeniusSpec& spec, const VecX<C>& pt) {
  const int N = spec.nvars();
  Tensor<C> F4 = spec.partials_at(pt, 4);
  MatX<C> ei = spec.eta<C>().inverse();
  C acc{};
  for (int a = 0; a < N; ++a)
    for (int a2 = 0; a2 < N; ++a2)
      for (int b = 0; b < N; ++b)
        for (int b2 = 0; b2 < N; ++b2)
          acc += ei(a, a2) * ei(b, b2) * F4(a, a2, b, b2);
  return acc;
}

template <class C>
C c1_rh_form(const RotationData<C>& rd) {
  const int N = rd.n();
  C acc{};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) acc += rd.r(i, j) / (rd.h(i) * rd.h(j));
  for (int i = 0; i < N; ++i)
    acc -= C(2.0) * rd.r(i, i) / (rd.h(i) * rd.h(i));
  return acc;
}

template <class C>
C1Report<C> check_condition_C1(const FrobeniusSpec& spec,
                               const std::vector<VecX<C>>& points,
                               double tol_pointwise, double tol_spread,
                               const FrameOptions& opt = {}) {
  C1Report<C> rep;
  for (const auto& pt : points) {
    Frame<C> fr = semisimple_frame(spec, pt, opt);
    RotationData<C> rd = rotation_data(spec, fr);
    rep.direct.push_back(c1_direct_contraction(spec, pt));
    rep.rh_form.push_back(c1_rh_form(rd));
  }
  for (size_t s = 0; s < rep.direct.size(); ++s) {
    rep.max_pointwise =
        std::max(rep.max_pointwise, mag(C(rep.direct[s] - rep.rh_form[s])));
    rep.spread = std::max(rep.spread, mag(C(rep.direct[s] - rep.direct[0])));
  }
  rep.passed = rep.max_pointwise < tol_pointwise && rep.spread < tol_spread;
  return rep;
}

template <class C>
struct C2Report {
  double max_phi1 = 0, max_phi2 = 0, max_phi3 = 0;
  bool passed = false;
  double max() const { return std::max({max_phi1, max_phi2, max_phi3}); }
};

// max |phi| over index patterns with k <= 3, at each supplied point
template <class C>
C2Report<C> check_condition_C2(const FrobeniusSpec& spec,
                               const std::vector<VecX<C>>& points, double tol,
                               const FrameOptions& opt = {}) {
  C2Report<C> rep;
  const int N = spec.nvars();
  for (const auto& pt : points) {
    Frame<C> fr = semisimple_frame(spec, pt, opt);
    RotationData<C> rd = rotation_data(spec, fr);
    VecX<C> p1 = genus1_1pt(rd);
    MatX<C> p2 = genus1_2pt(rd);
    for (int i = 0; i < N; ++i) rep.max_phi1 = std::max(rep.max_phi1, mag(p1[i]));
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) rep.max_phi2 = std::max(rep.max_phi2, mag(p2(i, j)));
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (i == j) continue;
        rep.max_phi3 = std::max(rep.max_phi3, mag(genus1_3pt_iij(rd, i, j)));
        for (int k = j + 1; k < N; ++k)
          if (k != i)
            rep.max_phi3 = std::max(rep.max_phi3, mag(genus1_3pt_distinct(rd, i, j, k)));
      }
  }
  rep.passed = rep.max() < tol;
  return rep;
}

}  // namespace frob
