#include "pm/jet.hpp"

#include "pm/errors.hpp"

namespace pm {

namespace {

// Generalized binomial coefficient e over t (e any integer, t >= 0).
Rational gen_binomial(long e, long t) {
  Rational num(1), den(1);
  for (long s = 0; s < t; ++s) {
    num *= Rational(e - s);
    den *= Rational(s + 1);
  }
  return num / den;
}

template <class R>
bool ring_is_zero(const R& x) {
  if constexpr (std::is_same_v<R, GaussianRational>) return x.is_zero();
  else return x == R(0.0);
}

}  // namespace

template <class R>
std::vector<R> power_jet(const R& c0, long e, int M) {
  std::vector<R> out(static_cast<std::size_t>(M) + 1, RingTraits<R>::from_coeff(0));
  if (e >= 0) {
    long top = std::min<long>(e, M);
    for (long t = 0; t <= top; ++t)
      out[t] = RingTraits<R>::from_coeff(GaussianRational(gen_binomial(e, t))) * ring_pow(c0, e - t);
    return out;
  }
  if (ring_is_zero(c0)) throw PoleAtPoint("negative power at a zero coordinate");
  for (long t = 0; t <= M; ++t)
    out[t] = RingTraits<R>::from_coeff(GaussianRational(gen_binomial(e, t))) * ring_pow(c0, e - t);
  return out;
}

template <class R>
Jet2<R> taylor_jet(const OmegaFunction& f, const R& z0, const R& w0, int M, int N) {
  Jet2<R> P(M, N);
  for (auto& v : P.a) v = RingTraits<R>::from_coeff(0);
  for (const auto& [mono, coeff] : f.numerator()) {
    auto jz = power_jet(z0, mono.i, M);
    auto jw = power_jet(w0, mono.j, N);
    R c = RingTraits<R>::from_coeff(coeff);
    for (int a = 0; a <= M; ++a) {
      if (ring_is_zero(jz[a])) continue;
      R h = c * jz[a];
      for (int b = 0; b <= N; ++b) P.at(a, b) = P.at(a, b) + h * jw[b];
    }
  }
  long k = f.k();
  if (k == 0) return P;

  // 1 - zw at (z0 + u, w0 + v) factors as A (1 - B) with A = 1 - z0 w0 and
  // B = (w0 u + z0 v + u v)/A, so (1 - zw)^(-k) = A^(-k) sum_t C(k-1+t, t) B^t;
  // terms beyond t = M + N cannot contribute.
  R A = RingTraits<R>::from_coeff(1) - z0 * w0;
  if (ring_is_zero(A)) throw PoleAtPoint("base point lies on the excluded hypersurface");
  R invA = ring_pow(A, -1);
  Jet2<R> B(M, N);
  for (auto& v : B.a) v = RingTraits<R>::from_coeff(0);
  if (M >= 1) B.at(1, 0) = w0 * invA;
  if (N >= 1) B.at(0, 1) = z0 * invA;
  if (M >= 1 && N >= 1) B.at(1, 1) = invA;

  Jet2<R> series(M, N);
  for (auto& v : series.a) v = RingTraits<R>::from_coeff(0);
  Jet2<R> Bt(M, N);  // running power B^t
  for (auto& v : Bt.a) v = RingTraits<R>::from_coeff(0);
  Bt.at(0, 0) = RingTraits<R>::from_coeff(1);
  for (long t = 0; t <= static_cast<long>(M) + N; ++t) {
    R c = RingTraits<R>::from_coeff(GaussianRational(binomial(k - 1 + t, t)));
    for (int a = 0; a <= M; ++a)
      for (int b = 0; b <= N; ++b) series.at(a, b) = series.at(a, b) + c * Bt.at(a, b);
    if (t == static_cast<long>(M) + N) break;
    Jet2<R> next(M, N);
    for (auto& v : next.a) v = RingTraits<R>::from_coeff(0);
    for (int a = 0; a <= M; ++a)
      for (int b = 0; b <= N; ++b) {
        if (ring_is_zero(Bt.at(a, b))) continue;
        if (a + 1 <= M) next.at(a + 1, b) = next.at(a + 1, b) + Bt.at(a, b) * B.at(1, 0);
        if (b + 1 <= N) next.at(a, b + 1) = next.at(a, b + 1) + Bt.at(a, b) * B.at(0, 1);
        if (a + 1 <= M && b + 1 <= N)
          next.at(a + 1, b + 1) = next.at(a + 1, b + 1) + Bt.at(a, b) * B.at(1, 1);
      }
    Bt = next;
  }
  R scale = ring_pow(A, -k);
  Jet2<R> out(M, N);
  for (auto& v : out.a) v = RingTraits<R>::from_coeff(0);
  for (int a = 0; a <= M; ++a)
    for (int b = 0; b <= N; ++b) {
      R h = RingTraits<R>::from_coeff(0);
      for (int p = 0; p <= a; ++p)
        for (int q = 0; q <= b; ++q) h = h + P.at(p, q) * series.at(a - p, b - q);
      out.at(a, b) = scale * h;
    }
  return out;
}

template <class R>
std::vector<R> phi_inner_jet(const R& z0, const R& w0, int len_minus_1) {
  // Slot selected by the caller: pass (z0, w0) for the first slot and
  // (w0, z0) for the second; coefficient of t^k is (-1)^(k-1) s^(k-1) (1-zw)
  // where s is the opposite coordinate.
  std::vector<R> d(static_cast<std::size_t>(len_minus_1) + 1, RingTraits<R>::from_coeff(0));
  R factor = RingTraits<R>::from_coeff(1) - z0 * w0;
  R pw = RingTraits<R>::from_coeff(1);
  for (int k = 1; k <= len_minus_1; ++k) {
    d[k] = (k % 2 == 1 ? factor : RingTraits<R>::from_coeff(-1) * factor) * pw;
    pw = pw * w0;
  }
  return d;
}

template <class R>
Jet2<R> compose_with_phi(const OmegaFunction& f, const R& z0, const R& w0, int M, int N) {
  Jet2<R> F = taylor_jet(f, z0, w0, M, N);
  auto d1 = phi_inner_jet(z0, w0, M);
  auto d2 = phi_inner_jet(w0, z0, N);
  return substitute_univariate(F, d1, d2);
}

Jet2<OmegaFunction> wirtinger_grid(const OmegaFunction& f, int M, int N) {
  Jet2<OmegaFunction> F(M, N);
  F.at(0, 0) = f;
  for (int p = 1; p <= M; ++p)
    F.at(p, 0) = GaussianRational(Rational(1, p)) * F.at(p - 1, 0).dz();
  for (int p = 0; p <= M; ++p)
    for (int q = 1; q <= N; ++q) F.at(p, q) = GaussianRational(Rational(1, q)) * F.at(p, q - 1).dw();
  return F;
}

Jet2<OmegaFunction> phi_jet_grid_symbolic(const OmegaFunction& f, int M, int N) {
  Jet2<OmegaFunction> F = wirtinger_grid(f, M, N);
  OmegaFunction zf = OmegaFunction::z(), wf = OmegaFunction::w();
  auto d1 = phi_inner_jet(zf, wf, M);
  auto d2 = phi_inner_jet(wf, zf, N);
  return substitute_univariate(F, d1, d2);
}

JetProvider make_provider(const OmegaFunction& f, Domain tag) {
  return JetProvider{tag, [f](std::complex<double> z0, std::complex<double> w0, int M, int N) {
                       return taylor_jet<std::complex<double>>(f, z0, w0, M, N);
                     }};
}

CJet jets_of_pullback(const JetProvider& f, const MoebiusMap& t, std::complex<double> z0,
                      std::complex<double> w0, int M, int N) {
  using C = std::complex<double>;
  C a = t.a.to_complex(), b = t.b.to_complex(), c = t.c.to_complex(), d = t.d.to_complex();
  // First slot of the unflipped image: (a(z0+u) + b)/(c(z0+u) + d).
  C n10 = a * z0 + b, n11 = a, q10 = c * z0 + d, q11 = c;
  // Second slot: matrix (d, c; b, a) acting on w0 + v.
  C n20 = d * w0 + c, n21 = d, q20 = b * w0 + a, q21 = b;
  if (!t.flip) {
    if (std::abs(q10) == 0.0 || std::abs(q20) == 0.0)
      throw PoleAtPoint("image of the base point leaves the finite chart");
    auto j1 = mobius_unijet<C>(n10, n11, q10, q11, 1.0 / q10, static_cast<std::size_t>(M) + 1);
    auto j2 = mobius_unijet<C>(n20, n21, q20, q21, 1.0 / q20, static_cast<std::size_t>(N) + 1);
    CJet F = f.jets(j1[0], j2[0], M, N);
    j1[0] = 0.0;
    j2[0] = 0.0;
    return substitute_univariate(F, j1, j2);
  }
  // Flipped: image slots are (1/psi2(v), 1/psi1(u)), so the first slot of f
  // sees the v-jet and the second slot sees the u-jet.
  C m10 = b * w0 + a, m11 = b, r10 = d * w0 + c, r11 = d;  // 1/psi2 as a Moebius jet in v
  C m20 = c * z0 + d, m21 = c, r20 = a * z0 + b, r21 = a;  // 1/psi1 as a Moebius jet in u
  if (std::abs(r10) == 0.0 || std::abs(r20) == 0.0)
    throw PoleAtPoint("image of the base point leaves the finite chart");
  auto jv = mobius_unijet<C>(m10, m11, r10, r11, 1.0 / r10, static_cast<std::size_t>(N) + 1);
  auto ju = mobius_unijet<C>(m20, m21, r20, r21, 1.0 / r20, static_cast<std::size_t>(M) + 1);
  CJet F = f.jets(jv[0], ju[0], N, M);
  jv[0] = 0.0;
  ju[0] = 0.0;
  CJet H = substitute_univariate(F, jv, ju);  // H.at(n, m) = coeff of v^n u^m
  CJet G(M, N);
  for (int m = 0; m <= M; ++m)
    for (int n = 0; n <= N; ++n) G.at(m, n) = H.at(n, m);
  return G;
}

JetProvider pullback_provider(const JetProvider& f, const MoebiusMap& t) {
  return JetProvider{f.domain, [f, t](std::complex<double> z0, std::complex<double> w0, int M, int N) {
                       return jets_of_pullback(f, t, z0, w0, M, N);
                     }};
}

// Explicit instantiations for the scalar rings used at points.
template std::vector<GaussianRational> power_jet(const GaussianRational&, long, int);
template std::vector<std::complex<double>> power_jet(const std::complex<double>&, long, int);
template Jet2<GaussianRational> taylor_jet(const OmegaFunction&, const GaussianRational&,
                                           const GaussianRational&, int, int);
template Jet2<std::complex<double>> taylor_jet(const OmegaFunction&, const std::complex<double>&,
                                               const std::complex<double>&, int, int);
template std::vector<GaussianRational> phi_inner_jet(const GaussianRational&, const GaussianRational&,
                                                     int);
template std::vector<std::complex<double>> phi_inner_jet(const std::complex<double>&,
                                                         const std::complex<double>&, int);
template Jet2<GaussianRational> compose_with_phi(const OmegaFunction&, const GaussianRational&,
                                                 const GaussianRational&, int, int);
template Jet2<std::complex<double>> compose_with_phi(const OmegaFunction&, const std::complex<double>&,
                                                     const std::complex<double>&, int, int);

}  // namespace pm
