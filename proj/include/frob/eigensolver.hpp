#pragma once

// Dense complex nonsymmetric eigensolver for small matrices (N <= 10):
// characteristic polynomial via Faddeev-LeVerrier, simultaneous root
// iteration (Durand-Kerner), inverse iteration for eigenvectors.
// Deterministic: fixed starting configuration, no randomization.

#include <vector>

#include "frob/scalar.hpp"

namespace frob {

struct EigensolverFailure : Error { using Error::Error; };

template <class C>
struct EigenOptions {
  double tol = 1e-13;   // root update tolerance, relative to root radius
  int max_iter = 500;
};

// Monic characteristic polynomial coefficients c[0..N-1] with
// p(z) = z^N + c[N-1] z^{N-1} + ... + c[0].
template <class C>
std::vector<C> char_poly(const MatX<C>& A) {
  const int n = int(A.rows());
  MatX<C> M = MatX<C>::Identity(n, n);
  std::vector<C> c(n);
  for (int k = 1; k <= n; ++k) {
    MatX<C> AM = A * M;
    C ck = -AM.trace() / C(double(k));
    c[n - k] = ck;
    M = AM;
    for (int d = 0; d < n; ++d) M(d, d) += ck;
  }
  return c;
}

template <class C>
C poly_eval(const std::vector<C>& c, const C& z) {
  C p = C(1.0);
  for (int k = int(c.size()) - 1; k >= 0; --k) p = p * z + c[k];
  return p;
}

template <class C>
std::vector<C> durand_kerner(const std::vector<C>& c, const EigenOptions<C>& opt) {
  const int n = int(c.size());
  double radius = 1.0;
  for (const C& ck : c) radius = std::max(radius, 1.0 + mag(ck));
  std::vector<C> z(n);
  const C seed = scalar_traits<C>::make(0.4, 0.9);
  C p = C(1.0);
  for (int i = 0; i < n; ++i) {
    p *= seed;
    z[i] = p * C(radius);
  }
  for (int it = 0; it < opt.max_iter; ++it) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      C denom = C(1.0);
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      C delta = poly_eval(c, z[i]) / denom;
      z[i] -= delta;
      worst = std::max(worst, mag(delta));
    }
    if (worst < opt.tol * radius) return z;
  }
  throw EigensolverFailure("root iteration did not converge");
}

// Eigenvector for a converged eigenvalue by inverse iteration.
template <class C>
VecX<C> eigenvector(const MatX<C>& A, const C& lambda) {
  const int n = int(A.rows());
  using R = real_of<C>;
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, mag(A(i, j)));
  C shift = lambda + scalar_traits<C>::make(scale * 1e-13, 0);
  MatX<C> B = A - MatX<C>::Identity(n, n) * shift;
  Eigen::PartialPivLU<MatX<C>> lu(B);
  VecX<C> x = VecX<C>::Ones(n);
  for (int it = 0; it < 4; ++it) {
    x = lu.solve(x).eval();
    using std::abs;
    using std::sqrt;
    R nrm2{};
    for (int i = 0; i < n; ++i) nrm2 += (x[i] * conj(x[i])).real();
    R nrm = sqrt(nrm2);
    for (int i = 0; i < n; ++i) x[i] = x[i] / C(nrm);
  }
  return x;
}

}  // namespace frob
