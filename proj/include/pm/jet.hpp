#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <type_traits>
#include <vector>

#include "pm/geometry.hpp"
#include "pm/omega.hpp"

namespace pm {

// The jet machinery is templated over the coefficient ring R so the same
// composition code serves three purposes:
//   R = GaussianRational      exact point jets,
//   R = std::complex<double>  numeric point jets (and opaque providers),
//   R = OmegaFunction         "symbolic base point" jets, which is how the
//                             definition pathway of the invariant operators
//                             is evaluated without per-point resampling.
template <class R>
struct RingTraits {
  static R from_coeff(const GaussianRational& c);
  static constexpr bool exact = false;
};

template <>
struct RingTraits<GaussianRational> {
  static GaussianRational from_coeff(const GaussianRational& c) { return c; }
  static constexpr bool exact = true;
};

template <>
struct RingTraits<std::complex<double>> {
  static std::complex<double> from_coeff(const GaussianRational& c) { return c.to_complex(); }
  static constexpr bool exact = false;
};

template <>
struct RingTraits<OmegaFunction> {
  static OmegaFunction from_coeff(const GaussianRational& c) { return OmegaFunction::constant(c); }
  static constexpr bool exact = true;
};

template <class R>
R ring_pow(R base, long e) {
  if (e < 0) {
    if constexpr (std::is_same_v<R, GaussianRational>) return base.pow(e);
    else if constexpr (std::is_same_v<R, std::complex<double>>) return 1.0 / ring_pow(base, -e);
    else return base.pow(e);
  }
  R acc = RingTraits<R>::from_coeff(1);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

// Rectangular two-variable jet: at(i, j) is the Taylor coefficient of
// u^i v^j, i.e. the (i, j) partial divided by i! j!.
template <class R>
struct Jet2 {
  int M = 0, N = 0;
  std::vector<R> a;

  Jet2() : a(1) {}
  Jet2(int m, int n) : M(m), N(n), a(static_cast<std::size_t>(m + 1) * (n + 1)) {}

  R& at(int i, int j) { return a[static_cast<std::size_t>(i) * (N + 1) + j]; }
  const R& at(int i, int j) const { return a[static_cast<std::size_t>(i) * (N + 1) + j]; }
};

using CJet = Jet2<std::complex<double>>;
using QJet = Jet2<GaussianRational>;

// --- univariate helpers -----------------------------------------------------

template <class R>
std::vector<R> uni_mul(const std::vector<R>& x, const std::vector<R>& y, std::size_t len) {
  std::vector<R> out(len, RingTraits<R>::from_coeff(0));
  for (std::size_t i = 0; i < x.size() && i < len; ++i)
    for (std::size_t j = 0; j < y.size() && i + j < len; ++j) out[i + j] = out[i + j] + x[i] * y[j];
  return out;
}

// Jet of (p0 + p1 t)/(q0 + q1 t) at t = 0, via the first-order recurrence;
// requires q0 invertible (inv0 = q0^-1 supplied by the caller).
template <class R>
std::vector<R> mobius_unijet(const R& p0, const R& p1, const R& q0, const R& q1, const R& inv0,
                             std::size_t len) {
  (void)q0;
  std::vector<R> r(len, RingTraits<R>::from_coeff(0));
  if (len == 0) return r;
  r[0] = p0 * inv0;
  if (len > 1) r[1] = (p1 - q1 * r[0]) * inv0;
  for (std::size_t n = 2; n < len; ++n) r[n] = (RingTraits<R>::from_coeff(-1) * q1 * r[n - 1]) * inv0;
  return r;
}

// --- point jets of class elements -------------------------------------------

// Jet of (c0 + t)^e truncated at t^M; for e < 0 this is the geometric-type
// expansion and needs c0 != 0.
template <class R>
std::vector<R> power_jet(const R& c0, long e, int M);

// Taylor jet of f at a finite base point, to orders (M, N).
template <class R>
Jet2<R> taylor_jet(const OmegaFunction& f, const R& z0, const R& w0, int M, int N);

// --- composition -------------------------------------------------------------

// Substitutes univariate jets with zero constant term into a Taylor grid:
// result[m][n] = coefficient of u^m v^n in sum_{p,q} F[p][q] d1(u)^p d2(v)^q.
template <class R>
Jet2<R> substitute_univariate(const Jet2<R>& F, const std::vector<R>& d1, const std::vector<R>& d2) {
  int M = static_cast<int>(d1.size()) - 1, N = static_cast<int>(d2.size()) - 1;
  // Truncated powers of the inner jets; d^p starts at degree p.
  std::vector<std::vector<R>> P1(M + 1), P2(N + 1);
  P1[0] = std::vector<R>(1, RingTraits<R>::from_coeff(1));
  for (int p = 1; p <= M; ++p) P1[p] = uni_mul(P1[p - 1], d1, static_cast<std::size_t>(M) + 1);
  P2[0] = std::vector<R>(1, RingTraits<R>::from_coeff(1));
  for (int q = 1; q <= N; ++q) P2[q] = uni_mul(P2[q - 1], d2, static_cast<std::size_t>(N) + 1);

  Jet2<R> G(M, N);
  for (auto& v : G.a) v = RingTraits<R>::from_coeff(0);
  for (int p = 0; p <= std::min(M, F.M); ++p) {
    for (int q = 0; q <= std::min(N, F.N); ++q) {
      const R& fpq = F.at(p, q);
      for (int m = p; m <= M; ++m) {
        if (static_cast<std::size_t>(m) >= P1[p].size()) break;
        R h = fpq * P1[p][m];
        for (int n = q; n <= N; ++n) {
          if (static_cast<std::size_t>(n) >= P2[q].size()) break;
          G.at(m, n) = G.at(m, n) + h * P2[q][n];
        }
      }
    }
  }
  return G;
}

// Inner univariate jets of the two slots of phi_{z,w} (coefficient of u^k is
// (-1)^(k-1) w^(k-1) (1-zw) for k >= 1, and the z <-> w mirror in the second
// slot), with the constant term removed. Exposed for the closed-form test.
template <class R>
std::vector<R> phi_inner_jet(const R& z0, const R& w0, int len_minus_1);

// Jet of f ∘ phi_{z,w} at (0, 0): coefficient (m, n) times m! n! is the
// invariant derivative D^{m,n} f(z, w).
template <class R>
Jet2<R> compose_with_phi(const OmegaFunction& f, const R& z0, const R& w0, int M, int N);

// Wirtinger Taylor grid: at(p, q) = (d/dz)^p (d/dw)^q f / (p! q!), exactly.
Jet2<OmegaFunction> wirtinger_grid(const OmegaFunction& f, int M, int N);

// Symbolic variant of compose_with_phi: the base point stays symbolic, so
// entry (m, n) is a class element of (z, w); this is the definition pathway.
Jet2<OmegaFunction> phi_jet_grid_symbolic(const OmegaFunction& f, int M, int N);

// --- opaque holomorphic functions --------------------------------------------

// A holomorphic function known only through its Taylor jets, tagged with the
// domain it lives on. Grids requested with smaller orders must be
// restrictions of larger ones.
struct JetProvider {
  Domain domain = Domain::Omega;
  std::function<CJet(std::complex<double> z0, std::complex<double> w0, int M, int N)> jets;
};

JetProvider make_provider(const OmegaFunction& f, Domain tag = Domain::Omega);

// Jet of f ∘ T at a finite base point (z0, w0), where T is a Moebius-type
// map; flipped maps cross the variables (first output slot depends on v).
// Throws PoleAtPoint when T sends the base point out of the finite chart.
CJet jets_of_pullback(const JetProvider& f, const MoebiusMap& t, std::complex<double> z0,
                      std::complex<double> w0, int M, int N);

// Provider for f ∘ T built on top of jets_of_pullback.
JetProvider pullback_provider(const JetProvider& f, const MoebiusMap& t);

}  // namespace pm
