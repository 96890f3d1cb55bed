#pragma once

// Deterministic seeded sampling of semisimple points and jets. The mapping
// from raw mt19937_64 output to doubles is spelled out here so reports are
// byte-identical across platforms.

#include <random>

#include "frob/rotation.hpp"

namespace frob {

class SampleRng {
 public:
  explicit SampleRng(uint64_t seed) : eng_(seed) {}

  double unit() {  // [0, 1)
    return double(eng_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  template <class C>
  C box_complex(double radius) {
    double re = uniform(-radius, radius);
    double im = uniform(-radius, radius);
    return scalar_traits<C>::make(re, im);
  }

  // |z| in [lo, hi], uniform phase
  template <class C>
  C annulus(double lo, double hi) {
    double m = uniform(lo, hi);
    double ph = uniform(0.0, 2 * 3.14159265358979323846);
    return scalar_traits<C>::make(m * std::cos(ph), m * std::sin(ph));
  }

  uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

inline uint64_t sample_seed(uint64_t run_seed, uint64_t index) {
  // splitmix64 of (seed, index): decorrelates per-sample streams
  uint64_t z = run_seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

template <class C>
VecX<C> base_point(const FrobeniusSpec& spec) {
  VecX<C> b(spec.nvars());
  for (int a = 0; a < spec.nvars(); ++a)
    b[a] = from_crational<C>(spec.base_point()[a]);
  return b;
}

// Rejection-resampled point in the complex polydisc around the manifold base
// point; at most max_rejects attempts before giving up.
template <class C>
Frame<C> sample_point(const FrobeniusSpec& spec, SampleRng& rng, double box,
                      const FrameOptions& opt = {}, int max_rejects = 100) {
  VecX<C> base = base_point<C>(spec);
  for (int attempt = 0; attempt < max_rejects; ++attempt) {
    VecX<C> pt = base;
    for (int a = 0; a < spec.nvars(); ++a) pt[a] += rng.box_complex<C>(box);
    try {
      return semisimple_frame(spec, pt, opt);
    } catch (const NonSemisimplePoint&) {
      continue;
    } catch (const EigensolverFailure&) {
      continue;  // near-degenerate draw; reject like a gap violation
    }
  }
  throw NonSemisimplePoint("no semisimple point found in " +
                           std::to_string(max_rejects) + " draws");
}

// Jet values u_x, u_xx; |ux_i| in [0.5, 2] avoids the u_{i,x} -> 0 direction.
template <class C>
struct JetSample {
  VecX<C> ux, uxx;
};

template <class C>
JetSample<C> sample_jet(int N, SampleRng& rng) {
  JetSample<C> j;
  j.ux = VecX<C>(N);
  j.uxx = VecX<C>(N);
  for (int i = 0; i < N; ++i) j.ux[i] = rng.annulus<C>(0.5, 2.0);
  for (int i = 0; i < N; ++i) j.uxx[i] = rng.annulus<C>(0.5, 2.0);
  return j;
}

}  // namespace frob
