#pragma once

// Frobenius-manifold core: validated prepotential data, quantum product,
// canonical coordinates / idempotent frames, metric coefficients g_i, h_i,
// and finite-difference directional derivatives of frame quantities.

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "frob/eigensolver.hpp"
#include "frob/expression.hpp"
#include "frob/scalar.hpp"

namespace frob {

struct DegenerateMetric : Error { using Error::Error; };
struct NonConstantEta : Error { using Error::Error; };
struct NonSemisimplePoint : Error { using Error::Error; };
struct BranchMismatch : Error { using Error::Error; };
struct ValidationFailed : Error { using Error::Error; };

// Rank-k value tensors over an N-dim index set, dense, tiny N.
template <class C>
struct Tensor {
  int N = 0, K = 0;
  std::vector<C> v;
  Tensor() = default;
  Tensor(int n, int k) : N(n), K(k), v(size_t(std::pow(n, k)), C{}) {}
  template <class... I>
  C& operator()(I... idx) {
    size_t off = 0;
    for (int i : std::initializer_list<int>{int(idx)...}) off = off * N + i;
    return v[off];
  }
  template <class... I>
  const C& operator()(I... idx) const {
    size_t off = 0;
    for (int i : std::initializer_list<int>{int(idx)...}) off = off * N + i;
    return v[off];
  }
};

class FrobeniusSpec {
 public:
  FrobeniusSpec(std::string name, int nvars, Expression F,
                std::vector<std::vector<Rational>> euler_matrix,
                std::vector<Rational> euler_shift, Rational charge_d,
                std::vector<CRational> base_point = {});

  // Key-value document; see README for the exact grammar.
  static FrobeniusSpec parse(const std::string& text);
  std::string serialize() const;

  const std::string& name() const { return name_; }
  int nvars() const { return N_; }
  const Expression& prepotential() const { return F_; }
  const Rational& charge_d() const { return d_; }
  const std::vector<std::vector<Rational>>& euler_matrix() const { return A_; }
  const std::vector<Rational>& euler_shift() const { return b_; }
  const std::vector<CRational>& base_point() const { return base_; }

  // Exact partial derivative of F by a sorted multi-index (any order).
  const Expression& partial(std::vector<int> idx) const;

  // eta_{ab} = F_{1ab}; exact entries. Throws NonConstantEta if F_{1ab} is
  // not symbolically constant.
  const std::vector<std::vector<CRational>>& eta_exact() const;

  template <class C>
  MatX<C> eta() const {
    const auto& ex = eta_exact();
    MatX<C> m(N_, N_);
    for (int a = 0; a < N_; ++a)
      for (int b = 0; b < N_; ++b) m(a, b) = from_crational<C>(ex[a][b]);
    return m;
  }

  template <class C>
  VecX<C> euler_at(const VecX<C>& pt) const {
    VecX<C> e(N_);
    for (int a = 0; a < N_; ++a) {
      C acc = C(scalar_traits<C>::from_rational(b_[a]));
      for (int b = 0; b < N_; ++b)
        acc += C(scalar_traits<C>::from_rational(A_[a][b])) * pt[b];
      e[a] = acc;
    }
    return e;
  }

  // All order-K partials of F evaluated at a point, as a symmetric tensor.
  template <class C>
  Tensor<C> partials_at(const VecX<C>& pt, int K) const {
    Tensor<C> T(N_, K);
    std::vector<int> idx(K, 0);
    // iterate sorted multi-indices
    auto rec = [&](auto&& self, int slot, int lo) -> void {
      if (slot == K) {
        C val = partial(idx).template evaluate<C>(pt);
        std::vector<int> perm = idx;
        std::sort(perm.begin(), perm.end());
        do {
          size_t off = 0;
          for (int i : perm) off = off * N_ + i;
          T.v[off] = val;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return;
      }
      for (int a = lo; a < N_; ++a) {
        idx[slot] = a;
        self(self, slot + 1, a);
      }
    };
    rec(rec, 0, 0);
    return T;
  }

 private:
  std::string name_;
  int N_;
  Expression F_;
  std::vector<std::vector<Rational>> A_;
  std::vector<Rational> b_;
  Rational d_;
  std::vector<CRational> base_;
  // orders <= 5 are filled eagerly at construction; higher orders derive on
  // demand under the lock (frames and sweeps share one spec across threads)
  mutable std::map<std::vector<int>, Expression> partials_;
  mutable std::unique_ptr<std::shared_mutex> partials_mutex_ =
      std::make_unique<std::shared_mutex>();
  mutable std::optional<std::vector<std::vector<CRational>>> eta_;
  void precompute_partials(int max_order) const;
};

struct ValidationReport {
  Eigen::MatrixXcd eta;
  double max_wdvv = 0.0;
  double max_homogeneity = 0.0;
  bool passed = false;
  std::string message;
};

// eta constancy/nondegeneracy (symbolic), WDVV at seeded sample points,
// quasi-homogeneity E.F = (3-d) F + (polynomial of degree <= 2) (symbolic).
ValidationReport validate_spec(const FrobeniusSpec& spec, int samples = 24,
                               uint64_t seed = 1);

struct FrameOptions {
  double eps_gap_rel = 1e-6;   // gap threshold = eps_gap_rel * max|u|
  double eps_gap_floor = 1e-6; // scale floor for near-nilpotent E o
  double conv_tol = 1e-13;
  int max_iter = 500;
};

template <class C>
struct Frame {
  VecX<C> point;
  VecX<C> u;      // canonical values, sorted by (Re, Im)
  MatX<C> idem;   // row i = coefficients of E_i in the flat basis
  VecX<C> g, h;   // g_i = eta(E_i, E_i), h_i = principal sqrt
  double gap = 0.0;
};

template <class C>
MatX<C> structure_tensor_product(const FrobeniusSpec& spec, const Tensor<C>& F3,
                                 const MatX<C>& eta_inv, const VecX<C>& X) {
  // L[g][b] = sum_a X^a c_{ab}^g
  const int N = spec.nvars();
  MatX<C> L = MatX<C>::Zero(N, N);
  for (int b = 0; b < N; ++b)
    for (int g = 0; g < N; ++g) {
      C acc{};
      for (int a = 0; a < N; ++a) {
        C cab{};
        for (int d = 0; d < N; ++d) cab += F3(a, b, d) * eta_inv(d, g);
        acc += X[a] * cab;
      }
      L(g, b) = acc;
    }
  return L;
}

template <class C>
VecX<C> quantum_product(const FrobeniusSpec& spec, const VecX<C>& pt,
                        const VecX<C>& X, const VecX<C>& Y) {
  Tensor<C> F3 = spec.partials_at(pt, 3);
  MatX<C> eta_inv = spec.eta<C>().inverse();
  MatX<C> L = structure_tensor_product(spec, F3, eta_inv, X);
  return L * Y;
}

template <class C>
Frame<C> semisimple_frame(const FrobeniusSpec& spec, const VecX<C>& pt,
                          const FrameOptions& opt = {}) {
  using std::abs;
  using std::sqrt;
  const int N = spec.nvars();
  Tensor<C> F3 = spec.partials_at(pt, 3);
  MatX<C> eta = spec.eta<C>();
  MatX<C> eta_inv = eta.inverse();
  VecX<C> E = spec.euler_at(pt);
  MatX<C> L = structure_tensor_product(spec, F3, eta_inv, E);

  EigenOptions<C> eopt;
  eopt.tol = opt.conv_tol;
  eopt.max_iter = opt.max_iter;
  std::vector<C> roots = durand_kerner(char_poly(L), eopt);
  std::sort(roots.begin(), roots.end(), [](const C& a, const C& b) {
    using T = scalar_traits<C>;
    auto ra = T::to_double(a.real()), rb = T::to_double(b.real());
    if (ra != rb) return ra < rb;
    return T::to_double(a.imag()) < T::to_double(b.imag());
  });

  Frame<C> fr;
  fr.point = pt;
  fr.u = VecX<C>(N);
  for (int i = 0; i < N; ++i) fr.u[i] = roots[i];
  double umax = 0.0, gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < N; ++i) umax = std::max(umax, mag(fr.u[i]));
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) gap = std::min(gap, mag(C(fr.u[i] - fr.u[j])));
  fr.gap = (N > 1) ? gap : std::numeric_limits<double>::infinity();
  if (N > 1 && !(fr.gap > opt.eps_gap_rel * std::max(umax, opt.eps_gap_floor)))
    throw NonSemisimplePoint("canonical-value gap " + std::to_string(fr.gap) +
                             " below threshold");

  fr.idem = MatX<C>(N, N);
  fr.g = VecX<C>(N);
  fr.h = VecX<C>(N);
  for (int i = 0; i < N; ++i) {
    VecX<C> v = eigenvector(L, fr.u[i]);
    // rescale along the eigenline so that E o E = E exactly
    VecX<C> vv(N);
    for (int g = 0; g < N; ++g) {
      C acc{};
      for (int a = 0; a < N; ++a) {
        C row{};
        for (int b = 0; b < N; ++b) {
          C cab{};
          for (int d = 0; d < N; ++d) cab += F3(a, b, d) * eta_inv(d, g);
          row += cab * v[b];
        }
        acc += v[a] * row;
      }
      vv[g] = acc;
    }
    int m = 0;
    double best = -1;
    for (int a = 0; a < N; ++a)
      if (mag(v[a]) > best) { best = mag(v[a]); m = a; }
    C lambda = vv[m] / v[m];
    if (mag(lambda) == 0.0) throw EigensolverFailure("idempotent rescale failed");
    for (int a = 0; a < N; ++a) fr.idem(i, a) = v[a] / lambda;
    C gi{};
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) gi += fr.idem(i, a) * eta(a, b) * fr.idem(i, b);
    fr.g[i] = gi;
    fr.h[i] = sqrt(gi);
  }
  return fr;
}

// Index permutation matching frame f onto ref by nearest canonical value,
// plus a square-root branch alignment of h. Used by finite-difference
// stencils to stay on one sheet.
template <class C>
void align_frame(Frame<C>& f, const Frame<C>& ref) {
  const int N = int(ref.u.size());
  std::vector<int> perm(N, -1);
  std::vector<bool> used(N, false);
  for (int i = 0; i < N; ++i) {
    int best = -1;
    double bestd = 0;
    for (int j = 0; j < N; ++j) {
      if (used[j]) continue;
      double d = mag(C(f.u[j] - ref.u[i]));
      if (best < 0 || d < bestd) { bestd = d; best = j; }
    }
    if (best < 0 || (N > 1 && bestd > 0.45 * ref.gap))
      throw BranchMismatch("nearest-u pairing ambiguous");
    perm[i] = best;
    used[best] = true;
  }
  Frame<C> out = f;
  for (int i = 0; i < N; ++i) {
    out.u[i] = f.u[perm[i]];
    out.g[i] = f.g[perm[i]];
    out.h[i] = f.h[perm[i]];
    for (int a = 0; a < N; ++a) out.idem(i, a) = f.idem(perm[i], a);
    if (mag(C(out.h[i] - ref.h[i])) > mag(C(out.h[i] + ref.h[i]))) {
      out.h[i] = -out.h[i];
    }
  }
  f = std::move(out);
}

// Richardson-extrapolated central difference of a frame functional along a
// flat-coordinate direction. The functional sees frames aligned to the frame
// at the expansion point.
template <class C, class Fn>
C frame_directional(const FrobeniusSpec& spec, const VecX<C>& pt,
                    const VecX<C>& dir, double step, Fn&& f,
                    const FrameOptions& opt = {}) {
  Frame<C> base = semisimple_frame(spec, pt, opt);
  auto eval = [&](double s) {
    VecX<C> q = pt + dir * C(s);
    Frame<C> fq = semisimple_frame(spec, q, opt);
    align_frame(fq, base);
    return f(fq);
  };
  auto central = [&](double hh) { return (eval(hh) - eval(-hh)) / C(2 * hh); };
  C d1 = central(step), d2 = central(step / 2);
  return (d2 * C(4.0) - d1) / C(3.0);
}

enum class FrameQuantity { U, G, H, R, Theta };

template <class C>
C directional_derivative(const FrobeniusSpec& spec, const VecX<C>& pt,
                         const VecX<C>& dir, FrameQuantity q, int i, int j,
                         double step, const FrameOptions& opt = {});

}  // namespace frob
