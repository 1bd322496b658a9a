#include "pm/star.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pm/errors.hpp"

namespace pm {

namespace {

constexpr double kPi = 3.14159265358979323846;

// hbar must avoid 0 and the poles -1/n of the series coefficients.
void ensure_deformation(const GaussianRational& hbar) {
  if (hbar.is_zero()) throw OutsideDeformationDomain("hbar = 0");
  GaussianRational inv = hbar.inverse();
  if (inv.is_real() && inv.re.get_den() == 1 && sgn(inv.re) < 0) {
    throw OutsideDeformationDomain("hbar = " + hbar.str() + " is a pole of the series coefficients");
  }
}

// One rung of the pure ladders: given D_z^n g returns D_z^{n+1} g, and the
// mirrored statement in the second slot.
OmegaFunction pure_step_z(const OmegaFunction& g, int n) {
  return OmegaFunction::one_minus_zw() * g.dz() - GaussianRational(n) * (OmegaFunction::w() * g);
}

OmegaFunction pure_step_w(const OmegaFunction& f, int n) {
  return OmegaFunction::one_minus_zw() * f.dw() - GaussianRational(n) * (OmegaFunction::z() * f);
}

GaussianRational coeff_step(const GaussianRational& coeff, const GaussianRational& x, int n) {
  return coeff * GaussianRational(-1) / (GaussianRational(n) * (x - GaussianRational(n - 1)));
}

// Holomorphy flags of one slot: exponents above the denominator power give a
// pole at the slot's point at infinity, negative exponents one at zero.
struct SlotGrowth {
  bool super = false;
  bool sub = false;
};

SlotGrowth growth_z(const OmegaFunction& f) {
  SlotGrowth g;
  for (const auto& [m, c] : f.numerator()) {
    g.super |= m.i > f.k();
    g.sub |= m.i < 0;
  }
  return g;
}

SlotGrowth growth_w(const OmegaFunction& f) {
  SlotGrowth g;
  for (const auto& [m, c] : f.numerator()) {
    g.super |= m.j > f.k();
    g.sub |= m.j < 0;
  }
  return g;
}

// Largest circle radius (exclusive) keeping the moved slot's chart image
// inside the operand's holomorphy domain: the chart sends |u| = 1/|other| to
// the slot's infinity and u = -own to the slot's zero.
double safe_upper(const SlotGrowth& g, std::complex<double> own, std::complex<double> other) {
  double upper = std::numeric_limits<double>::infinity();
  if (g.super && std::abs(other) > 0.0) upper = std::min(upper, 1.0 / std::abs(other));
  if (g.sub) upper = std::min(upper, std::abs(own));
  return upper;
}

const char* domain_name(Domain d) {
  switch (d) {
    case Domain::Omega: return "Omega";
    case Domain::OmegaPlus: return "Omega+";
    case Domain::OmegaMinus: return "Omega-";
    case Domain::FiniteChart: return "C^2";
    case Domain::BiDisk: return "D^2";
  }
  return "?";
}

bool pairing_allowed(Domain fdom, Domain gdom) {
  using D = Domain;
  return (fdom == D::Omega && gdom == D::Omega) || (fdom == D::BiDisk && gdom == D::OmegaPlus) ||
         (fdom == D::OmegaMinus && gdom == D::BiDisk) || (fdom == D::Omega && gdom == D::OmegaPlus) ||
         (fdom == D::OmegaMinus && gdom == D::Omega);
}

}  // namespace

Integer stirling2(long n, long k) {
  if (n == -1 && k == -1) return 1;
  if (n < 0 || k < 0 || k > n) return 0;
  // row DP on S(m, j) = j S(m-1, j) + S(m-1, j-1)
  std::vector<Integer> row(static_cast<std::size_t>(k) + 1, Integer(0));
  row[0] = 1;
  for (long m = 1; m <= n; ++m) {
    long top = std::min(m, k);
    for (long j = top; j >= 1; --j) row[j] = Integer(j) * row[j] + row[j - 1];
    row[0] = 0;
  }
  return row[static_cast<std::size_t>(k)];
}

double alpha_for(std::complex<double> hbar) {
  if (hbar == std::complex<double>(0.0, 0.0)) {
    throw OutsideDeformationDomain("hbar = 0");
  }
  std::complex<double> s = 1.0 / hbar;
  double x = s.real(), y = s.imag();
  if (x >= 1.0) return 1.0;  // |s+j|/(j+1) >= (x+j)/(j+1) >= 1, with limit 1
  // Minimize ((x-1+t)^2 + y^2)/t^2 over integer t = j+1 >= 1; the continuous
  // minimizer is t* = ((x-1)^2 + y^2)/(1-x) and the ratio is unimodal in t.
  double tstar = ((x - 1.0) * (x - 1.0) + y * y) / (1.0 - x);
  double best = std::numeric_limits<double>::infinity();
  for (double t : {std::floor(tstar), std::ceil(tstar), 1.0}) {
    t = std::max(t, 1.0);
    double num = (x - 1.0 + t) * (x - 1.0 + t) + y * y;
    best = std::min(best, std::sqrt(num) / t);
  }
  if (!(best > 0.0)) {
    throw OutsideDeformationDomain("hbar is a pole of the series coefficients");
  }
  return 1.0 / best;
}

OmegaFunction bidiff(const OmegaFunction& f, const OmegaFunction& g, int n) {
  OmegaFunction df = f, dg = g;
  for (int k = 0; k < n; ++k) {
    df = pure_step_z(df, k);
    dg = pure_step_w(dg, k);
  }
  return df * dg;
}

GaussianRational star_coefficient(const GaussianRational& hbar, int n) {
  ensure_deformation(hbar);
  GaussianRational x = -hbar.inverse();
  GaussianRational c(1);
  for (int j = 1; j <= n; ++j) c = coeff_step(c, x, j);
  return c;
}

OmegaFunction star_term_function(const OmegaFunction& f, const OmegaFunction& g, int n,
                                 const GaussianRational& hbar) {
  return star_coefficient(hbar, n) * bidiff(g, f, n);
}

OmegaFunction star_partial_sum(const OmegaFunction& f, const OmegaFunction& g, int N,
                               const GaussianRational& hbar) {
  ensure_deformation(hbar);
  GaussianRational x = -hbar.inverse();
  GaussianRational c(1);
  OmegaFunction dg = g, df = f;
  OmegaFunction acc = dg * df;
  for (int n = 1; n <= N; ++n) {
    dg = pure_step_z(dg, n - 1);
    df = pure_step_w(df, n - 1);
    c = coeff_step(c, x, n);
    acc += c * (dg * df);
  }
  return acc;
}

double supnorm_circle(const OmegaFunction& f, std::complex<double> z0, std::complex<double> w0,
                      char slot, double R, int samples) {
  auto eval_at = [&](double theta) {
    std::complex<double> u = std::polar(R, theta);
    std::complex<double> z = z0, w = w0;
    if (slot == 'z') {
      z = (z0 + u) / (1.0 + u * w0);
    } else {
      w = (w0 + u) / (1.0 + u * z0);
    }
    return std::abs(f.evaluate(z, w));
  };
  double best = 0.0, best_theta = 0.0;
  for (int i = 0; i < samples; ++i) {
    double th = 2.0 * kPi * i / samples;
    double v = eval_at(th);
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    if (v > best) {
      best = v;
      best_theta = th;
    }
  }
  double step = 2.0 * kPi / samples;
  for (int i = 0; i < 64; ++i) {
    double th = best_theta - step + 2.0 * step * i / 63.0;
    double v = eval_at(th);
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    best = std::max(best, v);
  }
  return best;
}

StarResult star_eval(const OmegaFunction& f, const OmegaFunction& g, const ExtPoint2& p,
                     const StarParams& params) {
  ensure_deformation(params.hbar);
  if (!in_domain(p, Domain::Omega)) throw PoleAtPoint("star evaluation point must lie in Omega");

  StarResult res;
  res.mode = params.mode;
  double q = 0.0, norms = 0.0;
  if (params.mode == TailMode::certified_geometric) {
    if (!p.finite()) throw MethodNotApplicable("certified tail bounds need a finite base point");
    double alpha = alpha_for(params.hbar.to_complex());
    double R = params.radius > 0.0 ? params.radius : std::max(std::sqrt(2.0 * alpha), 1.0);
    std::complex<double> z0 = p.z.value().to_complex();
    std::complex<double> w0 = p.w.value().to_complex();
    // Shrink each circle below the nearest singularity the chart drags into
    // the disk, so the Cauchy estimates stay valid for the given operands.
    double rp = std::min(R, 0.95 * safe_upper(growth_z(g), z0, w0));
    double rm = std::min(R, 0.95 * safe_upper(growth_w(f), w0, z0));
    if (!(rp > 0.0) || !(rm > 0.0)) {
      throw MethodNotApplicable("operand growth leaves no valid Cauchy circle at this point");
    }
    q = alpha / (rp * rm);
    if (!(q < 1.0)) {
      throw MethodNotApplicable("alpha/(R+*R-) >= 1: no geometric tail at admissible radii");
    }
    res.norm_left = supnorm_circle(g, z0, w0, 'z', rp);
    res.norm_right = supnorm_circle(f, z0, w0, 'w', rm);
    norms = res.norm_left * res.norm_right;
  }

  GaussianRational x = -params.hbar.inverse();
  GaussianRational coeff(1);
  OmegaFunction dg = g, df = f;
  GaussianRational sum(0);
  for (int n = 0;; ++n) {
    if (n > 0) {
      dg = pure_step_z(dg, n - 1);
      df = pure_step_w(df, n - 1);
      coeff = coeff_step(coeff, x, n);
    }
    GaussianRational term = coeff * dg.evaluate(p) * df.evaluate(p);
    sum += term;
    res.term_values.push_back(term.to_complex());
    res.terms_used = n + 1;

    if (params.mode == TailMode::certified_geometric) {
      double tail = norms * std::pow(q, n + 1) / (1.0 - q);
      res.tail_after.push_back(tail);
      res.tail_bound = tail;
      if (tail <= params.abs_tol) break;
    } else {
      std::size_t m = res.term_values.size();
      if (m >= 2 && std::abs(res.term_values[m - 1]) <= params.abs_tol &&
          std::abs(res.term_values[m - 2]) <= params.abs_tol) {
        res.tail_bound = std::abs(res.term_values[m - 1]) + std::abs(res.term_values[m - 2]);
        break;
      }
    }
    if (n + 1 >= params.max_terms) {
      res.budget_exhausted = true;
      if (params.mode == TailMode::successive_term) {
        std::size_t m = res.term_values.size();
        res.tail_bound = std::abs(res.term_values[m - 1]);
        if (m >= 2) res.tail_bound += std::abs(res.term_values[m - 2]);
      }
      break;
    }
  }
  res.value_exact = sum;
  res.exact = true;
  res.value = sum.to_complex();
  return res;
}

StarResult star_eval_jets(const JetProvider& fp, const JetProvider& gp, const ExtPoint2& p,
                          const StarParams& params) {
  ensure_deformation(params.hbar);
  if (!pairing_allowed(fp.domain, gp.domain)) {
    throw DomainPairingViolation(std::string("no convergent pairing for (") +
                                 domain_name(fp.domain) + ", " + domain_name(gp.domain) + ")");
  }
  if (!in_domain(p, fp.domain) || !in_domain(p, gp.domain)) {
    throw DomainPairingViolation("evaluation point is outside an operand domain");
  }
  if (!p.finite()) throw MethodNotApplicable("jet-based evaluation needs a finite point");

  MoebiusMap phip = MoebiusMap::phi(p.z.value(), p.w.value());
  int cap = 8;
  CJet jg = jets_of_pullback(gp, phip, 0.0, 0.0, cap, 0);
  CJet jf = jets_of_pullback(fp, phip, 0.0, 0.0, 0, cap);

  StarResult res;
  res.mode = TailMode::successive_term;
  std::complex<double> x = -1.0 / params.hbar.to_complex();
  std::complex<double> d = 1.0;  // coeff_n * (n!)^2, stable ratio recurrence
  std::complex<double> sum = 0.0;
  for (int n = 0;; ++n) {
    if (n > cap) {
      cap *= 2;
      jg = jets_of_pullback(gp, phip, 0.0, 0.0, cap, 0);
      jf = jets_of_pullback(fp, phip, 0.0, 0.0, 0, cap);
    }
    if (n > 0) d *= std::complex<double>(-double(n)) / (x - std::complex<double>(n - 1));
    std::complex<double> term = d * jg.at(n, 0) * jf.at(0, n);
    sum += term;
    res.term_values.push_back(term);
    res.terms_used = n + 1;

    std::size_t m = res.term_values.size();
    if (m >= 2 && std::abs(res.term_values[m - 1]) <= params.abs_tol &&
        std::abs(res.term_values[m - 2]) <= params.abs_tol) {
      res.tail_bound = std::abs(res.term_values[m - 1]) + std::abs(res.term_values[m - 2]);
      break;
    }
    if (n + 1 >= params.max_terms) {
      res.budget_exhausted = true;
      res.tail_bound = std::abs(res.term_values[m - 1]);
      if (m >= 2) res.tail_bound += std::abs(res.term_values[m - 2]);
      break;
    }
  }
  res.exact = false;
  res.value = sum;
  return res;
}

std::vector<OmegaFunction> asym_coeffs(const OmegaFunction& f, const OmegaFunction& g, int N) {
  std::vector<OmegaFunction> out;
  out.reserve(static_cast<std::size_t>(N) + 1);
  out.push_back(f * g);
  std::vector<OmegaFunction> bk;  // bk[k-1] = B_k(g, f)
  OmegaFunction dg = g, df = f;
  for (int k = 1; k <= N; ++k) {
    dg = pure_step_z(dg, k - 1);
    df = pure_step_w(df, k - 1);
    bk.push_back(dg * df);
  }
  for (int n = 1; n <= N; ++n) {
    OmegaFunction a;
    for (int k = 1; k <= n; ++k) {
      Integer s = stirling2(n - 1, k - 1);
      if (sgn(s) == 0) continue;
      Rational r(s, factorial(k));
      r.canonicalize();
      if ((n + k) % 2 != 0) r = -r;
      a += GaussianRational(r) * bk[static_cast<std::size_t>(k) - 1];
    }
    out.push_back(a);
  }
  return out;
}

OmegaFunction poisson_bracket(const OmegaFunction& f, const OmegaFunction& g) {
  return bidiff(f, g, 1) - bidiff(g, f, 1);
}

StarInvarianceReport check_star_invariance(const OmegaFunction& f, const OmegaFunction& g,
                                           const MoebiusMap& t,
                                           const std::vector<ExtPoint2>& points,
                                           const StarParams& params, int exact_terms) {
  StarInvarianceReport rep;
  bool ok = true;
  bool classlike = (t.b.is_zero() && t.c.is_zero()) || (t.a.is_zero() && t.d.is_zero());

  if (classlike) {
    rep.exact = true;
    OmegaFunction ft = f.pullback_moebius(t);
    OmegaFunction gt = g.pullback_moebius(t);
    // Term-by-term: B_n(g∘T, f∘T) against the pullback of B_n with the
    // operand order reversed when T carries the flip.
    OmegaFunction dl = t.flip ? f : g;
    OmegaFunction dr = t.flip ? g : f;
    OmegaFunction dgt = gt, dft = ft;
    for (int n = 0; n <= exact_terms; ++n) {
      if (n > 0) {
        dgt = pure_step_z(dgt, n - 1);
        dft = pure_step_w(dft, n - 1);
        dl = pure_step_z(dl, n - 1);
        dr = pure_step_w(dr, n - 1);
      }
      rep.terms_checked = n + 1;
      if (dgt * dft != (dl * dr).pullback_moebius(t)) {
        rep.pass = false;
        return rep;
      }
    }
    for (const auto& p : points) {
      StarResult l = star_eval(ft, gt, p, params);
      ExtPoint2 qp = t.apply(p);
      StarResult r = t.flip ? star_eval(g, f, qp, params) : star_eval(f, g, qp, params);
      double dev = std::abs(l.value - r.value);
      double allow = 2.0 * (l.tail_bound + r.tail_bound);
      rep.deviation = std::max(rep.deviation, dev);
      rep.allowed = std::max(rep.allowed, allow);
      if (!(dev <= allow)) ok = false;
    }
  } else {
    rep.exact = false;
    JetProvider pf = pullback_provider(make_provider(f), t);
    JetProvider pg = pullback_provider(make_provider(g), t);
    StarParams left = params;
    left.mode = TailMode::successive_term;
    for (const auto& p : points) {
      StarResult l = star_eval_jets(pf, pg, p, left);
      ExtPoint2 qp = t.apply(p);
      StarResult r = t.flip ? star_eval(g, f, qp, params) : star_eval(f, g, qp, params);
      double dev = std::abs(l.value - r.value);
      double allow = 2.0 * (l.tail_bound + r.tail_bound);
      rep.deviation = std::max(rep.deviation, dev);
      rep.allowed = std::max(rep.allowed, allow);
      if (!(dev <= allow)) ok = false;
    }
  }
  rep.pass = ok;
  return rep;
}

AssocReport assoc_check(const OmegaFunction& f, const OmegaFunction& g, const OmegaFunction& h,
                        const ExtPoint2& p, const StarParams& params, int N1, int N2) {
  ensure_deformation(params.hbar);
  if (!p.finite() || !in_domain(p, Domain::Omega)) {
    throw MethodNotApplicable("associativity certificate needs a finite point in Omega");
  }
  double alpha = alpha_for(params.hbar.to_complex());
  double R = params.radius > 0.0 ? params.radius : std::max(std::sqrt(2.0 * alpha), 1.0);

  OmegaFunction sfg = star_partial_sum(f, g, N1, params.hbar);
  OmegaFunction sgh = star_partial_sum(g, h, N1, params.hbar);

  std::complex<double> z0 = p.z.value().to_complex();
  std::complex<double> w0 = p.w.value().to_complex();

  // Admissible circle radii for one pairing (z-slot operand, w-slot operand)
  // anchored at (zc, wc); throws when no valid geometric tail exists there.
  auto radii = [&](const OmegaFunction& zop, const OmegaFunction& wop, std::complex<double> zc,
                   std::complex<double> wc) {
    double rp = std::min(R, 0.95 * safe_upper(growth_z(zop), zc, wc));
    double rm = std::min(R, 0.95 * safe_upper(growth_w(wop), wc, zc));
    if (!(rp > 0.0) || !(rm > 0.0) || !(alpha / (rp * rm) < 1.0)) {
      throw MethodNotApplicable("no admissible Cauchy radii for the associativity certificate");
    }
    return std::pair<double, double>(rp, rm);
  };
  auto [rpl, rml] = radii(h, sfg, z0, w0);
  auto [rpr, rmr] = radii(sgh, f, z0, w0);
  double ql = alpha / (rpl * rml);
  double qr = alpha / (rpr * rmr);

  // Exact outer truncations at p.
  GaussianRational x = -params.hbar.inverse();
  GaussianRational c(1);
  OmegaFunction dzh = h, dws = sfg, dzs = sgh, dwf = f;
  GaussianRational vl(0), vr(0);
  for (int n = 0; n <= N2; ++n) {
    if (n > 0) {
      dzh = pure_step_z(dzh, n - 1);
      dws = pure_step_w(dws, n - 1);
      dzs = pure_step_z(dzs, n - 1);
      dwf = pure_step_w(dwf, n - 1);
      c = coeff_step(c, x, n);
    }
    vl += c * dzh.evaluate(p) * dws.evaluate(p);
    vr += c * dzs.evaluate(p) * dwf.evaluate(p);
  }

  double nh_plus = supnorm_circle(h, z0, w0, 'z', rpl);
  double nsfg_minus = supnorm_circle(sfg, z0, w0, 'w', rml);
  double nsgh_plus = supnorm_circle(sgh, z0, w0, 'z', rpr);
  double nf_minus = supnorm_circle(f, z0, w0, 'w', rmr);

  // Inner truncation error, propagated through the outer series: bound the
  // inner tail at sampled points of the compactum the outer bound sees.
  double max_tail_fg = 0.0, max_tail_gh = 0.0;
  const int outer_samples = 64;
  for (int i = 0; i < outer_samples; ++i) {
    double th = 2.0 * kPi * i / outer_samples;
    std::complex<double> w1 = (w0 + std::polar(rml, th)) / (1.0 + std::polar(rml, th) * z0);
    std::complex<double> z1 = (z0 + std::polar(rpr, th)) / (1.0 + std::polar(rpr, th) * w0);
    auto [rpi, rmi] = radii(g, f, z0, w1);
    double qi = alpha / (rpi * rmi);
    double tfg = supnorm_circle(g, z0, w1, 'z', rpi, 64) * supnorm_circle(f, z0, w1, 'w', rmi, 64) *
                 std::pow(qi, N1 + 1) / (1.0 - qi);
    auto [rpj, rmj] = radii(h, g, z1, w0);
    double qj = alpha / (rpj * rmj);
    double tgh = supnorm_circle(h, z1, w0, 'z', rpj, 64) * supnorm_circle(g, z1, w0, 'w', rmj, 64) *
                 std::pow(qj, N1 + 1) / (1.0 - qj);
    max_tail_fg = std::max(max_tail_fg, tfg);
    max_tail_gh = std::max(max_tail_gh, tgh);
  }

  double el = nh_plus * nsfg_minus * std::pow(ql, N2 + 1) / (1.0 - ql) +
              nh_plus * max_tail_fg / (1.0 - ql);
  double er = nsgh_plus * nf_minus * std::pow(qr, N2 + 1) / (1.0 - qr) +
              max_tail_gh * nf_minus / (1.0 - qr);

  AssocReport rep;
  rep.lhs = vl.to_complex();
  rep.rhs = vr.to_complex();
  rep.deviation = std::abs((vl - vr).to_complex());
  rep.allowed = el + er;
  rep.pass = rep.deviation <= rep.allowed;
  return rep;
}

nlohmann::ordered_json StarResult::to_json() const {
  nlohmann::ordered_json j;
  j["value"] = {value.real(), value.imag()};
  j["tail_bound"] = tail_bound;
  j["terms"] = terms_used;
  j["mode"] = mode == TailMode::certified_geometric ? "certified_geometric" : "successive_term";
  return j;
}

}  // namespace pm
