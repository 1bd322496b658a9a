#include "pm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>
#include <utility>

#include "pm/errors.hpp"
#include "pm/jet.hpp"
#include "pm/operators.hpp"
#include "pm/star.hpp"

namespace pm {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

PropertyResult prop(std::string name) {
  PropertyResult pr;
  pr.name = std::move(name);
  return pr;
}

void record(PropertyResult& pr, bool ok, double dev = 0.0) {
  ++pr.instances;
  if (dev > pr.max_deviation) pr.max_deviation = dev;
  if (!ok) pr.pass = false;
}

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= static_cast<double>(xs.size());
  ym /= static_cast<double>(xs.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - xm) * (ys[i] - ym);
    den += (xs[i] - xm) * (xs[i] - xm);
  }
  return num / den;
}

GaussianRational rationalize(std::complex<double> v) {
  return GaussianRational(Rational(v.real()), Rational(v.imag()));
}

std::vector<ExtPoint2> sample_points(CorpusGen& gen, int count, bool allow_complex = true) {
  std::vector<ExtPoint2> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pts.push_back(gen.rational_point(allow_complex));
  return pts;
}

// Points whose image under t keeps both slots finite and nonzero, so Laurent
// operands stay pole-free on both sides of the invariance identity.
std::vector<ExtPoint2> regular_points(CorpusGen& gen, const MoebiusMap& t, int count) {
  auto ok = [](const ProjectiveCoord& c) { return !c.is_infinite() && !c.is_zero(); };
  std::vector<ExtPoint2> pts;
  int budget = 256;
  while (static_cast<int>(pts.size()) < count) {
    if (--budget < 0) throw Error("regular_points: sampling budget exhausted");
    ExtPoint2 p = gen.rational_point(true);
    ExtPoint2 q = t.apply(p);
    if (ok(p.z) && ok(p.w) && ok(q.z) && ok(q.w)) pts.push_back(p);
  }
  return pts;
}

SuiteReport suite_identities(unsigned long long seed) {
  SuiteReport rep{"identities", seed, {}};
  CorpusGen gen(seed);

  PropertyResult pathways = prop("pathway_equality");
  for (int c = 0; c < 8; ++c) {
    OmegaFunction f = gen.omega_function();
    Jet2<OmegaFunction> def = pm_derive_grid_definition(f, 6, 6, 6);
    Jet2<OmegaFunction> rec = pm_derive_grid_recursion(f, 6, 6);
    for (int m = 0; m <= 6; ++m)
      for (int n = 0; m + n <= 6; ++n) {
        OmegaFunction a = def.at(m, n);
        OmegaFunction b = rec.at(m, n);
        OmegaFunction ce = pm_derive(f, m, n, DeriveMethod::explicit_sum);
        OmegaFunction dl = pm_derive(f, m, n, DeriveMethod::laplace);
        record(pathways, a == b && b == ce && ce == dl);
      }
  }
  rep.properties.push_back(pathways);

  PropertyResult step_z = prop("recursion_step_z");
  PropertyResult step_w = prop("recursion_step_w");
  for (int c = 0; c < 5; ++c) {
    OmegaFunction f = gen.omega_function(4, 2, 2);
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; m + n <= 4; ++n) {
        OmegaFunction cur = pm_derive(f, m, n);

        OmegaFunction rhs = GaussianRational(static_cast<long>(n - m)) *
                                (OmegaFunction::w() * cur) +
                            OmegaFunction::one_minus_zw() * cur.dz();
        if (n >= 1)
          rhs += GaussianRational(static_cast<long>(n) * (n - 1)) * pm_derive(f, m, n - 1);
        record(step_z, pm_derive(f, m + 1, n) == rhs);

        OmegaFunction rhsw = GaussianRational(static_cast<long>(m - n)) *
                                 (OmegaFunction::z() * cur) +
                             OmegaFunction::one_minus_zw() * cur.dw();
        if (m >= 1)
          rhsw += GaussianRational(static_cast<long>(m) * (m - 1)) * pm_derive(f, m - 1, n);
        record(step_w, pm_derive(f, m, n + 1) == rhsw);
      }
  }
  rep.properties.push_back(step_z);
  rep.properties.push_back(step_w);

  // The gap-marching seed alpha_{n,0} = 0 matches the definition; the
  // alternative weight n!(n-1)! does not, and the suite must exhibit that.
  PropertyResult alpha = prop("alpha_seed_discrepancy");
  {
    OmegaFunction fz = OmegaFunction::z();
    OmegaFunction ref = pm_derive(fz, 2, 1, DeriveMethod::explicit_sum);
    OmegaFunction good = pm_derive(fz, 2, 1, DeriveMethod::laplace);
    OmegaFunction bad = pm_derive(laplace_poly(2, 1, true).apply_in_laplacian(fz), 1, 0,
                                  DeriveMethod::pure_linearised);
    record(alpha, good == ref);
    record(alpha, !(bad == ref));
  }
  rep.properties.push_back(alpha);

  PropertyResult swap = prop("swap_conjugation");
  for (int c = 0; c < 5; ++c) {
    OmegaFunction f = gen.omega_function(4, 2, 2);
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; m + n <= 4; ++n)
        record(swap, pm_derive(f.pullback_swap(), m, n) == pm_derive(f, n, m).pullback_swap());
  }
  rep.properties.push_back(swap);

  PropertyResult hom = prop("dilation_homogeneity");
  for (long p = 0; p <= 2; ++p)
    for (long q = 0; q <= 2; ++q) {
      OmegaFunction f = OmegaFunction::basis_fpq(p, q);
      for (int m = 0; m <= 4; ++m)
        for (int n = 0; m + n <= 4; ++n) {
          OmegaFunction d = pm_derive(f, m, n);
          if (d.is_zero()) {
            record(hom, true);
            continue;
          }
          auto h = d.homogeneity_degree();
          record(hom, h.has_value() && *h == (p - q) + (n - m));
        }
    }
  rep.properties.push_back(hom);

  return rep;
}

SuiteReport suite_invariance(unsigned long long seed) {
  SuiteReport rep{"invariance", seed, {}};
  CorpusGen gen(seed);

  PropertyResult dil = prop("dilation_exact");
  PropertyResult flip = prop("flip_exact");
  for (int c = 0; c < 5; ++c) {
    OmegaFunction f = gen.omega_function(4, 2, 2);
    MoebiusMap rho = MoebiusMap::dilation(gen.dilation_factor());
    std::vector<ExtPoint2> pts = sample_points(gen, 2);
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; m + n <= 4; ++n) {
        InvarianceReport a = check_invariance(f, rho, m, n, pts, 1e-12);
        record(dil, a.exact && a.pass, a.max_rel_dev);
        InvarianceReport b = check_invariance(f, MoebiusMap::flip_map(), m, n, pts, 1e-12);
        record(flip, b.exact && b.pass, b.max_rel_dev);
      }
  }
  rep.properties.push_back(dil);
  rep.properties.push_back(flip);

  PropertyResult phin = prop("phi_numeric");
  for (int c = 0; c < 6; ++c) {
    OmegaFunction f = gen.omega_function(4, 2, 1);
    MoebiusMap t = gen.random_phi();
    std::vector<ExtPoint2> pts = regular_points(gen, t, 3);
    for (int m = 0; m <= 4; ++m)
      for (int n = 0; m + n <= 4; ++n) {
        InvarianceReport r = check_invariance(f, t, m, n, pts, 1e-10);
        record(phin, r.pass, r.max_rel_dev);
      }
  }
  rep.properties.push_back(phin);

  PropertyResult dec = prop("decompose_roundtrip");
  for (int c = 0; c < 10; ++c) {
    MoebiusMap t = compose(MoebiusMap::dilation(gen.dilation_factor()), gen.random_phi());
    if (c % 2 == 1) t = compose(t, MoebiusMap::flip_map());
    Decomposition d = decompose_map(t);
    MoebiusMap back = compose(MoebiusMap::dilation(d.gamma), MoebiusMap::phi(d.z, d.w));
    if (d.flipped) back = compose(back, MoebiusMap::flip_map());
    record(dec, back == t && d.flipped == t.flip);
  }
  rep.properties.push_back(dec);

  return rep;
}

SuiteReport suite_kernels(unsigned long long seed) {
  SuiteReport rep{"kernels", seed, {}};

  PropertyResult ann = prop("generators_annihilated");
  for (int n = 0; n <= 4; ++n)
    for (char slot : {'z', 'w'})
      for (const OmegaFunction& g : kernel_basis(n, slot, 6)) {
        OmegaFunction d = slot == 'z' ? pm_derive(g, n + 1, 0) : pm_derive(g, 0, n + 1);
        record(ann, d.is_zero());
      }
  rep.properties.push_back(ann);

  PropertyResult rank = prop("rank_completeness");
  for (int n = 0; n <= 4; ++n)
    for (char slot : {'z', 'w'}) {
      KernelRankReport r = kernel_rank_check(n, slot, 6);
      record(rank, r.complete);
    }
  rep.properties.push_back(rank);

  return rep;
}

bool family_shape(const IntPolynomial& p, long degree) {
  if (p.degree() != degree) return false;
  if (sgn(p.coeffs.back()) <= 0 || p.coeffs.back() != 1) return false;
  if (degree >= 1 && sgn(p.coeffs[0]) != 0) return false;
  for (std::size_t i = 1; i < p.coeffs.size(); ++i)
    if (sgn(p.coeffs[i]) <= 0) return false;
  return true;
}

SuiteReport suite_positivity(unsigned long long seed) {
  SuiteReport rep{"positivity", seed, {}};

  PropertyResult diag = prop("diagonal_family");
  for (int n = 0; n <= 12; ++n) record(diag, family_shape(laplace_poly(n, n), n));
  rep.properties.push_back(diag);

  PropertyResult off = prop("offdiagonal_family");
  for (int m = 1; m <= 8; ++m)
    for (int n = 1; n <= 8; ++n)
      record(off, family_shape(laplace_poly(m, n), std::min(m, n)));
  rep.properties.push_back(off);

  PropertyResult bk = prop("bk_closed_form");
  for (int p = 1; p <= 7; ++p) record(bk, diagonal_poly_via_bk(p) == laplace_poly(p, p));
  rep.properties.push_back(bk);

  PropertyResult three = prop("three_term_recurrence");
  for (long n = 1; n <= 11; ++n) {
    IntPolynomial pn = laplace_poly(static_cast<int>(n), static_cast<int>(n));
    IntPolynomial pm = laplace_poly(static_cast<int>(n) - 1, static_cast<int>(n) - 1);
    std::vector<Integer> rhs(static_cast<std::size_t>(n) + 2, Integer(0));
    for (std::size_t i = 0; i < pn.coeffs.size(); ++i) {
      rhs[i + 1] += pn.coeffs[i];
      rhs[i] += Integer(2 * n * n) * pn.coeffs[i];
    }
    Integer drop = Integer(n) * n * (n - 1) * (n - 1);
    for (std::size_t i = 0; i < pm.coeffs.size(); ++i) rhs[i] -= drop * pm.coeffs[i];
    record(three, laplace_poly(static_cast<int>(n) + 1, static_cast<int>(n) + 1) ==
                      IntPolynomial{std::move(rhs)});
  }
  rep.properties.push_back(three);

  return rep;
}

SuiteReport suite_star(unsigned long long seed) {
  SuiteReport rep{"star", seed, {}};
  CorpusGen gen(seed);
  const ExtPoint2 base{GaussianRational(Rational(1, 2)), GaussianRational(Rational(1, 3))};

  PropertyResult unit = prop("unit_element");
  {
    OmegaFunction one = OmegaFunction::one();
    StarResult r = star_eval(one, one, base, StarParams{});
    record(unit, r.value_exact == GaussianRational(1) && r.exact);
    for (int c = 0; c < 4; ++c) {
      OmegaFunction g = gen.omega_function(4, 2, 2);
      record(unit, star_partial_sum(one, g, 8, StarParams{}.hbar) == g);
      record(unit, star_partial_sum(g, one, 8, StarParams{}.hbar) == g);
    }
  }
  rep.properties.push_back(unit);

  PropertyResult zmul = prop("coordinate_multipliers");
  for (int c = 0; c < 10; ++c) {
    OmegaFunction g = gen.omega_function(4, 2, 2);
    record(zmul, star_partial_sum(OmegaFunction::z(), g, 10, StarParams{}.hbar) == OmegaFunction::z() * g);
    record(zmul, star_partial_sum(g, OmegaFunction::w(), 10, StarParams{}.hbar) == g * OmegaFunction::w());
  }
  rep.properties.push_back(zmul);

  PropertyResult oracle = prop("closed_form_oracle");
  {
    StarResult r = star_eval(OmegaFunction::w(), OmegaFunction::z(), base, StarParams{});
    GaussianRational zw(Rational(1, 6));
    GaussianRational pref = (GaussianRational(1) - zw) * (GaussianRational(1) - zw);
    GaussianRational x(-10);
    GaussianRational cn(1), sum = zw;
    for (long n = 1; n <= 60; ++n) {
      cn = cn * GaussianRational(-1) / (GaussianRational(n) * (x - GaussianRational(n - 1)));
      GaussianRational fact{Rational(factorial(n))};
      sum += cn * fact * fact * zw.pow(n - 1) * pref;
    }
    double dev = std::abs((r.value_exact - sum).to_complex());
    record(oracle, dev <= 1e-9 && !r.budget_exhausted, dev);
  }
  rep.properties.push_back(oracle);

  PropertyResult dom = prop("tail_domination");
  for (int c = 0; c < 6; ++c) {
    OmegaFunction f = c < 4 ? gen.hol_function() : gen.polynomial(3, 2);
    OmegaFunction g = c < 4 ? gen.hol_function() : gen.polynomial(3, 2);
    ExtPoint2 p = gen.rational_point(false);
    StarParams sp;
    sp.abs_tol = 1e-10;
    StarResult r = star_eval(f, g, p, sp);
    if (r.budget_exhausted) {
      record(dom, false);
      continue;
    }
    std::complex<double> best =
        star_partial_sum(f, g, r.terms_used + 20, sp.hbar).evaluate(p).to_complex();
    double slack = 1e-13 * (1.0 + std::abs(best));
    std::complex<double> run{0.0, 0.0};
    for (std::size_t n = 0; n < r.term_values.size(); ++n) {
      run += r.term_values[n];
      double remainder = std::abs(best - run);
      record(dom, remainder <= r.tail_after[n] + slack, remainder);
    }
  }
  rep.properties.push_back(dom);

  PropertyResult assoc = prop("associativity");
  {
    std::vector<GaussianRational> hbars = {GaussianRational(Rational(1, 10)),
                                           GaussianRational(Rational(0), Rational(1, 10)),
                                           GaussianRational(Rational(1, 20), Rational(1, 20))};
    for (int c = 0; c < 2; ++c) {
      OmegaFunction f = gen.hol_function();
      OmegaFunction g = gen.hol_function();
      OmegaFunction h = gen.hol_function();
      for (int ip = 0; ip < 2; ++ip) {
        ExtPoint2 p = gen.rational_point(false);
        for (const GaussianRational& hb : hbars) {
          StarParams sp;
          sp.hbar = hb;
          AssocReport ar = assoc_check(f, g, h, p, sp);
          record(assoc, ar.pass, ar.deviation);
        }
      }
    }
  }
  rep.properties.push_back(assoc);

  PropertyResult invd = prop("invariance_dilation_exact");
  for (int c = 0; c < 3; ++c) {
    OmegaFunction f = gen.hol_function();
    OmegaFunction g = gen.hol_function();
    MoebiusMap rho = MoebiusMap::dilation(gen.dilation_factor());
    StarInvarianceReport r =
        check_star_invariance(f, g, rho, sample_points(gen, 2, false), StarParams{}, 12);
    record(invd, r.exact && r.pass, r.deviation);
  }
  rep.properties.push_back(invd);

  PropertyResult invn = prop("invariance_numeric");
  {
    std::vector<MoebiusMap> maps = {MoebiusMap::flip_map(), gen.random_phi(), gen.random_phi()};
    for (const MoebiusMap& t : maps) {
      OmegaFunction f = gen.hol_function();
      OmegaFunction g = gen.hol_function();
      StarInvarianceReport r =
          check_star_invariance(f, g, t, sample_points(gen, 2, false), StarParams{}, 10);
      record(invn, r.pass, r.deviation);
    }
  }
  rep.properties.push_back(invn);

  // Discrete mean-value test on a parameter circle: the star value is
  // holomorphic in hbar, so the circle average reproduces the center.
  PropertyResult hol = prop("hbar_holomorphy");
  {
    OmegaFunction f = OmegaFunction::basis_fpq(1, 0);
    OmegaFunction g = OmegaFunction::basis_fpq(0, 1);
    StarParams sp;
    sp.abs_tol = 1e-13;
    StarResult center = star_eval(f, g, base, sp);
    std::complex<double> mean{0.0, 0.0};
    double worst_tail = center.tail_bound;
    const int K = 64;
    for (int k = 0; k < K; ++k) {
      StarParams spk = sp;
      spk.hbar = rationalize(std::complex<double>(0.1, 0.0) +
                             std::polar(0.025, 2.0 * kPi * k / K));
      StarResult rk = star_eval(f, g, base, spk);
      mean += rk.value;
      worst_tail = std::max(worst_tail, rk.tail_bound);
    }
    mean /= static_cast<double>(K);
    double dev = std::abs(mean - center.value);
    record(hol, dev <= 10.0 * worst_tail, dev);
  }
  rep.properties.push_back(hol);

  PropertyResult jets = prop("jets_cross_pathway");
  for (int c = 0; c < 3; ++c) {
    OmegaFunction f = gen.hol_function();
    OmegaFunction g = gen.hol_function();
    ExtPoint2 p = gen.rational_point(false);
    StarResult a = star_eval(f, g, p, StarParams{});
    StarResult b = star_eval_jets(make_provider(f), make_provider(g), p, StarParams{});
    double dev = std::abs(a.value - b.value);
    record(jets, dev <= 1e-10, dev);
  }
  rep.properties.push_back(jets);

  PropertyResult bim = prop("bimodule_pairings");
  {
    JetProvider expp;
    expp.domain = Domain::BiDisk;
    expp.jets = [](std::complex<double> z0, std::complex<double> w0, int M, int N) {
      CJet j(M, N);
      std::complex<double> e = std::exp(z0 + w0);
      double fi = 1.0;
      for (int i = 0; i <= M; ++i) {
        if (i > 0) fi *= i;
        double fj = 1.0;
        for (int n = 0; n <= N; ++n) {
          if (n > 0) fj *= n;
          j.at(i, n) = e / (fi * fj);
        }
      }
      return j;
    };
    JetProvider gp = make_provider(OmegaFunction::basis_fpq(0, 1), Domain::OmegaPlus);
    ExtPoint2 p{GaussianRational(Rational(1, 4)), GaussianRational(Rational(1, 4))};
    StarParams sp;
    StarResult r = star_eval_jets(expp, gp, p, sp);
    record(bim, !r.budget_exhausted && r.tail_bound <= 2.01 * sp.abs_tol &&
                    std::isfinite(std::abs(r.value)));

    bool rejected = false;
    try {
      ExtPoint2 onh{GaussianRational(Rational(1, 2)), GaussianRational(Rational(2))};
      star_eval_jets(expp, gp, onh, sp);
    } catch (const DomainPairingViolation&) {
      rejected = true;
    }
    record(bim, rejected);
  }
  rep.properties.push_back(bim);

  return rep;
}

SuiteReport suite_asymptotics(unsigned long long seed) {
  SuiteReport rep{"asymptotics", seed, {}};
  CorpusGen gen(seed);

  PropertyResult coeffs = prop("coefficients_exact");
  {
    std::vector<OmegaFunction> a = asym_coeffs(OmegaFunction::w(), OmegaFunction::z(), 2);
    OmegaFunction zw = OmegaFunction::monomial(1, 1);
    record(coeffs, a[0] == zw);
    record(coeffs, a[1] == OmegaFunction::one_minus_zw(2));
    record(coeffs, a[2] == GaussianRational(2) * (zw * OmegaFunction::one_minus_zw(2)));
  }
  rep.properties.push_back(coeffs);

  PropertyResult brk = prop("semiclassical_bracket");
  for (int c = 0; c < 6; ++c) {
    OmegaFunction f = gen.omega_function(4, 2, 1);
    OmegaFunction g = gen.omega_function(4, 2, 1);
    record(brk, asym_coeffs(f, g, 1)[1] - asym_coeffs(g, f, 1)[1] == poisson_bracket(g, f));
  }
  rep.properties.push_back(brk);

  PropertyResult pois = prop("poisson_structure");
  for (int c = 0; c < 4; ++c) {
    OmegaFunction f = gen.omega_function(3, 2, 1);
    OmegaFunction g = gen.omega_function(3, 2, 1);
    OmegaFunction h = gen.omega_function(3, 2, 1);
    record(pois, poisson_bracket(f, f).is_zero());
    record(pois, poisson_bracket(f, g) == -poisson_bracket(g, f));
    record(pois, poisson_bracket(f, g * h) ==
                     poisson_bracket(f, g) * h + g * poisson_bracket(f, h));
  }
  rep.properties.push_back(pois);

  PropertyResult slopes = prop("remainder_slopes");
  PropertyResult engine = prop("sweep_engine_consistency");
  {
    struct SweepPair {
      OmegaFunction f, g;
      ExtPoint2 p;
    };
    std::vector<SweepPair> pairs;
    pairs.push_back({OmegaFunction::w(), OmegaFunction::z(),
                     ExtPoint2{GaussianRational(Rational(1, 2)), GaussianRational(Rational(1, 3))}});
    {
      ExtPoint2 p = gen.rational_point(false);
      OmegaFunction f, g;
      for (int tries = 0; tries < 300; ++tries) {
        f = gen.polynomial_mixed(3, 2);
        g = gen.polynomial_mixed(3, 2);
        std::vector<OmegaFunction> a = asym_coeffs(f, g, 4);
        bool regular = true;
        double prev = 0.0;
        for (int k = 1; k <= 4; ++k) {
          double mag = std::abs(a[static_cast<std::size_t>(k)].evaluate(p).to_complex());
          if (mag < 1e-3 || (k > 1 && mag > 3.0 * prev)) {
            regular = false;
            break;
          }
          prev = mag;
        }
        if (regular) break;
      }
      pairs.push_back({f, g, p});
    }

    const std::vector<GaussianRational> rays = {
        GaussianRational(1), GaussianRational(Rational(0), Rational(1)),
        GaussianRational(Rational(0), Rational(-1)),
        GaussianRational(Rational(-20, 29), Rational(21, 29))};
    const std::vector<Rational> mags = {Rational(1, 10), Rational(1, 30), Rational(1, 100),
                                        Rational(1, 300), Rational(1, 1000)};
    const int ladder_cap = 140;

    for (const SweepPair& pr : pairs) {
      Jet2<OmegaFunction> dz = pm_derive_grid_recursion(pr.g, ladder_cap, 0);
      Jet2<OmegaFunction> dw = pm_derive_grid_recursion(pr.f, 0, ladder_cap);
      std::vector<GaussianRational> bvals;
      bvals.reserve(ladder_cap + 1);
      for (int n = 0; n <= ladder_cap; ++n)
        bvals.push_back(dz.at(n, 0).evaluate(pr.p) * dw.at(0, n).evaluate(pr.p));

      std::vector<OmegaFunction> acoef = asym_coeffs(pr.f, pr.g, 2);
      std::vector<GaussianRational> avals;
      for (const OmegaFunction& a : acoef) avals.push_back(a.evaluate(pr.p));
      double scale = 1.0 + std::abs(avals[0].to_complex());

      for (const GaussianRational& ray : rays) {
        // One exact series value per magnitude, shared across orders.
        std::vector<GaussianRational> values(mags.size());
        bool converged = true;
        for (std::size_t im = 0; im < mags.size(); ++im) {
          GaussianRational hb = GaussianRational(mags[im]) * ray;
          GaussianRational x = -hb.inverse();
          GaussianRational cn(1), sum = bvals[0];
          int quiet = 0;
          bool done = false;
          for (long n = 1; n <= ladder_cap; ++n) {
            cn = cn * GaussianRational(-1) /
                 (GaussianRational(n) * (x - GaussianRational(n - 1)));
            GaussianRational term = cn * bvals[static_cast<std::size_t>(n)];
            sum += term;
            quiet = std::abs(term.to_complex()) <= 1e-16 * scale ? quiet + 1 : 0;
            if (quiet >= 2) {
              done = true;
              break;
            }
          }
          if (!done) converged = false;
          values[im] = sum;
        }
        if (!converged) {
          record(slopes, false, 0.0);
          continue;
        }

        for (int N = 0; N <= 2; ++N) {
          std::vector<double> xs, ys;
          for (std::size_t im = 0; im < mags.size(); ++im) {
            GaussianRational hb = GaussianRational(mags[im]) * ray;
            GaussianRational partial(0), hpow(1);
            for (int k = 0; k <= N; ++k) {
              partial += avals[static_cast<std::size_t>(k)] * hpow;
              hpow = hpow * hb;
            }
            double remainder = std::abs((values[im] - partial).to_complex());
            if (remainder > 1e-14 * scale) {
              xs.push_back(std::log(mpq_class(mags[im]).get_d()));
              ys.push_back(std::log(remainder));
            }
          }
          if (xs.size() < 3) {
            record(slopes, true, 0.0);  // remainder at truncation noise: order exceeded
            continue;
          }
          double slope = lsq_slope(xs, ys);
          record(slopes, slope >= N + 0.9, std::max(0.0, N + 0.9 - slope));
        }
      }

      StarParams sp;
      sp.abs_tol = 1e-14;
      StarResult r = star_eval(pr.f, pr.g, pr.p, sp);
      GaussianRational x = -sp.hbar.inverse();
      GaussianRational cn(1), sum = bvals[0];
      for (long n = 1; n < r.terms_used; ++n) {
        cn = cn * GaussianRational(-1) / (GaussianRational(n) * (x - GaussianRational(n - 1)));
        sum += cn * bvals[static_cast<std::size_t>(n)];
      }
      double dev = std::abs((sum - r.value_exact).to_complex());
      record(engine, dev == 0.0, dev);
    }
  }
  rep.properties.push_back(slopes);
  rep.properties.push_back(engine);

  return rep;
}

SuiteReport suite_restriction(unsigned long long seed) {
  SuiteReport rep{"restriction", seed, {}};
  CorpusGen gen(seed);
  const Target targets[2] = {Target::disk, Target::sphere};

  // classical_derive cross-checks the one-variable factored sum against the
  // lift/derive/restrict route internally and throws on any mismatch.
  PropertyResult routes = prop("one_two_variable_exact");
  for (long i = 0; i <= 4; ++i)
    for (long j = 0; i + j <= 4; ++j)
      for (Target t : targets)
        for (int n = 0; n <= 4; ++n)
          for (bool conj : {false, true}) {
            bool ok = true;
            try {
              classical_derive(SmoothPolyFunction::monomial(i, j), n, conj, t);
            } catch (const Error&) {
              ok = false;
            }
            record(routes, ok);
          }
  for (int c = 0; c < 2; ++c) {
    SmoothPolyFunction f = gen.smooth_poly();
    for (Target t : targets)
      for (int n = 0; n <= 4; ++n)
        for (bool conj : {false, true}) {
          bool ok = true;
          try {
            classical_derive(f, n, conj, t);
          } catch (const Error&) {
            ok = false;
          }
          record(routes, ok);
        }
  }
  rep.properties.push_back(routes);

  PropertyResult km = prop("km_recursion");
  for (int c = 0; c < 3; ++c) {
    SmoothPolyFunction f = gen.smooth_poly(3, 2);
    for (Target t : targets)
      for (int n = 0; n <= 6; ++n) {
        SmoothPolyFunction dn = classical_derive(f, n, false, t);
        SmoothPolyFunction rhs = SmoothPolyFunction::one_minus_sq(t) * dn.d();
        GaussianRational cf = t == Target::disk ? GaussianRational(-static_cast<long>(n))
                                                : GaussianRational(static_cast<long>(n));
        rhs += SmoothPolyFunction::monomial(0, 1, cf) * dn;
        record(km, classical_derive(f, n + 1, false, t) == rhs);
      }
  }
  rep.properties.push_back(km);

  PropertyResult euc = prop("euclidean_closed_form");
  for (int c = 0; c < 3; ++c) {
    SmoothPolyFunction f = gen.smooth_poly(3, 2);
    for (Target t : targets)
      for (int n = 1; n <= 5; ++n) {
        SmoothPolyFunction inner = SmoothPolyFunction::one_minus_sq(t, n - 1) * f;
        for (int k = 0; k < n; ++k) inner = inner.d();
        record(euc, classical_derive(f, n, false, t) ==
                        SmoothPolyFunction::one_minus_sq(t) * inner);
      }
  }
  rep.properties.push_back(euc);

  PropertyResult lin = prop("linearisation");
  for (int c = 0; c < 3; ++c) {
    SmoothPolyFunction f = gen.smooth_poly(3, 2);
    for (int n = 0; n <= 5; ++n)
      record(lin, SmoothPolyFunction::one_minus_sq(Target::disk, n) *
                          classical_derive(f, n, false, Target::disk) ==
                      hat_d_iterate(f, n));
  }
  rep.properties.push_back(lin);

  PropertyResult square = prop("commuting_square");
  for (int c = 0; c < 4; ++c) {
    OmegaFunction F = gen.polynomial(4, 2);
    for (Target t : targets) {
      SmoothPolyFunction fr = diagonal_restrict(F, t);
      for (int n = 1; n <= 4; ++n) {
        record(square, diagonal_restrict(pm_derive(F, n, 0), t) ==
                           classical_derive(fr, n, false, t));
        SmoothPolyFunction cd = classical_derive(fr, n, true, t);
        if (t == Target::sphere && n % 2 == 1) cd = -cd;
        record(square, diagonal_restrict(pm_derive(F, 0, n), t) == cd);
      }
    }
  }
  rep.properties.push_back(square);

  PropertyResult dstar = prop("diagonal_star_consistency");
  for (int c = 0; c < 4; ++c) {
    OmegaFunction phi = c < 2 ? gen.hol_function(2, 2) : gen.polynomial(3, 2);
    OmegaFunction eta = c < 2 ? gen.hol_function(2, 2) : gen.polynomial(3, 2);
    GaussianRational zc = gen.rational_point(true).z.value();
    StarParams sp;
    for (Target t : targets) {
      DiagonalPoint dp{zc, t};
      StarResult a = t == Target::disk ? star_disk(phi, eta, dp, sp)
                                       : star_sphere(phi, eta, dp, sp);
      StarResult b = star_eval(phi, eta, dp.embed(), sp);
      record(dstar, a.value_exact == b.value_exact && a.terms_used == b.terms_used);
    }
  }
  rep.properties.push_back(dstar);

  PropertyResult dinv = prop("diagonal_invariance");
  for (int c = 0; c < 2; ++c) {
    OmegaFunction F = gen.polynomial(3, 2);
    GaussianRational al(Rational(1, 3));
    MoebiusMap t = MoebiusMap::phi(al, al);
    std::vector<ExtPoint2> pts;
    for (int i = 0; i < 2; ++i) {
      Rational re(gen.uniform(0, 1) == 0 ? -1 : 1, gen.uniform(4, 5));
      re.canonicalize();
      GaussianRational zr{re};
      pts.push_back(ExtPoint2{zr, zr});
    }
    for (int n = 1; n <= 3; ++n) {
      InvarianceReport r = check_invariance(F, t, n, 0, pts, 1e-10);
      record(dinv, r.pass, r.max_rel_dev);
    }
  }
  rep.properties.push_back(dinv);

  return rep;
}

}  // namespace

long CorpusGen::uniform(long lo, long hi) {
  return lo + static_cast<long>(rng_() % static_cast<unsigned long long>(hi - lo + 1));
}

Rational CorpusGen::small_rational(bool nonzero) {
  long num = uniform(-4, 4);
  while (nonzero && num == 0) num = uniform(-4, 4);
  Rational r(num, uniform(1, 4));
  r.canonicalize();
  return r;
}

GaussianRational CorpusGen::coefficient() {
  Rational re = small_rational(false);
  Rational im = uniform(0, 9) < 3 ? small_rational(false) : Rational(0);
  if (sgn(re) == 0 && sgn(im) == 0) return GaussianRational(1);
  return GaussianRational(re, im);
}

OmegaFunction CorpusGen::omega_function(int max_terms, long max_exp, long max_k) {
  long kk = uniform(0, max_k);
  long terms = uniform(1, max_terms);
  OmegaFunction::TermMap num;
  for (long t = 0; t < terms; ++t) {
    Monomial m{uniform(-max_exp, max_exp), uniform(-max_exp, max_exp)};
    GaussianRational c = coefficient();
    auto [it, fresh] = num.emplace(m, c);
    if (!fresh) it->second += c;
  }
  for (auto it = num.begin(); it != num.end();)
    it = it->second.is_zero() ? num.erase(it) : std::next(it);
  if (num.empty()) return OmegaFunction::z();
  return OmegaFunction(std::move(num), kk);
}

OmegaFunction CorpusGen::polynomial(int max_terms, long max_exp) {
  long terms = uniform(1, max_terms);
  OmegaFunction f;
  for (long t = 0; t < terms; ++t)
    f += OmegaFunction::monomial(uniform(0, max_exp), uniform(0, max_exp), coefficient());
  if (f.is_zero()) f = OmegaFunction::z();
  return f;
}

OmegaFunction CorpusGen::polynomial_mixed(int max_terms, long max_exp) {
  for (int tries = 0; tries < 64; ++tries) {
    OmegaFunction f = polynomial(max_terms, max_exp);
    if (!f.dz().is_zero() && !f.dw().is_zero()) return f;
  }
  return OmegaFunction::monomial(1, 1) + OmegaFunction::z();
}

OmegaFunction CorpusGen::hol_function(int max_terms, long max_pq) {
  long terms = uniform(1, max_terms);
  OmegaFunction f;
  for (long t = 0; t < terms; ++t)
    f += coefficient() * OmegaFunction::basis_fpq(uniform(0, max_pq), uniform(0, max_pq));
  if (f.is_zero()) f = OmegaFunction::basis_fpq(1, 1);
  return f;
}

SmoothPolyFunction CorpusGen::smooth_poly(int max_terms, long max_exp) {
  long terms = uniform(1, max_terms);
  SmoothPolyFunction f;
  for (long t = 0; t < terms; ++t)
    f += SmoothPolyFunction::monomial(uniform(0, max_exp), uniform(0, max_exp), coefficient());
  if (f.is_zero()) f = SmoothPolyFunction::zvar();
  return f;
}

ExtPoint2 CorpusGen::rational_point(bool allow_complex) {
  auto slot = [&]() {
    static const long nums[4] = {-2, -1, 1, 2};
    Rational re(nums[uniform(0, 3)], uniform(3, 5));
    re.canonicalize();
    Rational im(0);
    if (allow_complex && uniform(0, 3) == 0) {
      im = Rational(uniform(0, 1) == 0 ? -1 : 1, uniform(4, 5));
      im.canonicalize();
    }
    return GaussianRational(re, im);
  };
  GaussianRational z = slot();
  GaussianRational w = slot();
  return ExtPoint2{z, w};
}

GaussianRational CorpusGen::dilation_factor() {
  Rational re = small_rational(true);
  if (uniform(0, 3) == 0) return GaussianRational(re, small_rational(true));
  return GaussianRational(re);
}

MoebiusMap CorpusGen::random_phi() {
  ExtPoint2 p = rational_point(true);
  return MoebiusMap::phi(p.z.value(), p.w.value());
}

bool SuiteReport::pass() const {
  for (const PropertyResult& p : properties)
    if (!p.pass) return false;
  return true;
}

std::string SuiteReport::text() const {
  std::ostringstream os;
  os << "suite: " << suite << "  seed: " << seed << "\n";
  for (const PropertyResult& p : properties) {
    char dev[32];
    std::snprintf(dev, sizeof dev, "%.3g", p.max_deviation);
    os << (p.pass ? "[PASS] " : "[FAIL] ") << p.name << "  instances=" << p.instances
       << "  max_dev=" << dev;
    if (!p.note.empty()) os << "  (" << p.note << ")";
    os << "\n";
  }
  os << "result: " << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

nlohmann::ordered_json SuiteReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["properties"] = nlohmann::ordered_json::array();
  for (const PropertyResult& p : properties) {
    nlohmann::ordered_json pj;
    pj["name"] = p.name;
    pj["instances"] = p.instances;
    pj["max_deviation"] = p.max_deviation;
    pj["pass"] = p.pass;
    if (!p.note.empty()) pj["note"] = p.note;
    j["properties"].push_back(pj);
  }
  j["pass"] = pass();
  return j;
}

SuiteReport run_suite(const std::string& name, unsigned long long seed) {
  if (name == "identities") return suite_identities(seed);
  if (name == "invariance") return suite_invariance(seed);
  if (name == "kernels") return suite_kernels(seed);
  if (name == "positivity") return suite_positivity(seed);
  if (name == "star") return suite_star(seed);
  if (name == "asymptotics") return suite_asymptotics(seed);
  if (name == "restriction") return suite_restriction(seed);
  throw UnknownSuite("unknown verification suite: " + name);
}

std::vector<std::string> suite_names() {
  return {"identities", "invariance", "kernels",     "positivity",
          "star",       "asymptotics", "restriction"};
}

}  // namespace pm
