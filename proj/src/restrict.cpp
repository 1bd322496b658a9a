#include "pm/restrict.hpp"

#include <algorithm>
#include <optional>

#include "pm/errors.hpp"
#include "pm/operators.hpp"

namespace pm {

namespace {

GaussianRational lookup(const SmoothPolyFunction::TermMap& m, long i, long j) {
  auto it = m.find(Monomial{i, j});
  return it == m.end() ? GaussianRational(0) : it->second;
}

// Exact division by (1 - s |z|^2) with s = +1 (disk) / -1 (sphere);
// nullopt when the division leaves a remainder.
std::optional<SmoothPolyFunction::TermMap> divide_once(const SmoothPolyFunction::TermMap& p,
                                                       int s) {
  if (p.empty()) return std::nullopt;
  long bi = 0, bj = 0;
  for (const auto& [m, c] : p) {
    bi = std::max(bi, m.i);
    bj = std::max(bj, m.j);
  }
  SmoothPolyFunction::TermMap q;
  for (long i = 0; i <= bi; ++i) {
    for (long j = 0; j <= bj; ++j) {
      GaussianRational v = lookup(p, i, j);
      if (i > 0 && j > 0) v += GaussianRational(s) * lookup(q, i - 1, j - 1);
      if (!v.is_zero()) q[Monomial{i, j}] = v;
    }
  }
  // verify q (1 - s z zb) == p
  SmoothPolyFunction::TermMap back;
  for (const auto& [m, c] : q) {
    back[m] += c;
    back[Monomial{m.i + 1, m.j + 1}] -= GaussianRational(s) * c;
  }
  for (auto it = back.begin(); it != back.end();) {
    it = it->second.is_zero() ? back.erase(it) : std::next(it);
  }
  if (back != p) return std::nullopt;
  return q;
}

}  // namespace

const char* target_name(Target t) { return t == Target::disk ? "disk" : "sphere"; }

ExtPoint2 DiagonalPoint::embed() const {
  GaussianRational zb = z.conj();
  if (target == Target::disk) {
    GaussianRational sq = z * zb;
    if (!(sq.re < 1)) throw DomainPairingViolation("disk diagonal point needs |z| < 1");
    return ExtPoint2(z, zb);
  }
  return ExtPoint2(z, -zb);
}

SmoothPolyFunction::SmoothPolyFunction(TermMap terms) : terms_(std::move(terms)) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->first.i < 0 || it->first.j < 0) {
      throw NonPolynomialRestriction("SmoothPolyFunction exponents must be nonnegative");
    }
    it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
  }
}

SmoothPolyFunction SmoothPolyFunction::constant(GaussianRational c) {
  return monomial(0, 0, std::move(c));
}

SmoothPolyFunction SmoothPolyFunction::monomial(long i, long j, GaussianRational c) {
  TermMap m;
  m[Monomial{i, j}] = std::move(c);
  return SmoothPolyFunction(std::move(m));
}

SmoothPolyFunction SmoothPolyFunction::one_minus_sq(Target t, long e) {
  SmoothPolyFunction base =
      constant(1) + monomial(1, 1, GaussianRational(t == Target::disk ? -1 : 1));
  SmoothPolyFunction acc = constant(1);
  for (long i = 0; i < e; ++i) acc = acc * base;
  return acc;
}

SmoothPolyFunction& SmoothPolyFunction::operator+=(const SmoothPolyFunction& o) {
  for (const auto& [m, c] : o.terms_) {
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  return *this;
}

SmoothPolyFunction& SmoothPolyFunction::operator-=(const SmoothPolyFunction& o) {
  return *this += -o;
}

SmoothPolyFunction operator-(const SmoothPolyFunction& a) {
  SmoothPolyFunction r;
  for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, -c);
  return r;
}

SmoothPolyFunction operator*(const SmoothPolyFunction& a, const SmoothPolyFunction& b) {
  SmoothPolyFunction r;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m{ma.i + mb.i, ma.j + mb.j};
      auto it = r.terms_.find(m);
      if (it == r.terms_.end()) {
        r.terms_.emplace(m, ca * cb);
      } else {
        it->second += ca * cb;
        if (it->second.is_zero()) r.terms_.erase(it);
      }
    }
  }
  return r;
}

SmoothPolyFunction operator*(const GaussianRational& s, const SmoothPolyFunction& a) {
  if (s.is_zero()) return {};
  SmoothPolyFunction r;
  for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, s * c);
  return r;
}

SmoothPolyFunction SmoothPolyFunction::conj() const {
  SmoothPolyFunction r;
  for (const auto& [m, c] : terms_) r.terms_[Monomial{m.j, m.i}] = c.conj();
  return r;
}

SmoothPolyFunction SmoothPolyFunction::d() const {
  SmoothPolyFunction r;
  for (const auto& [m, c] : terms_) {
    if (m.i > 0) r.terms_[Monomial{m.i - 1, m.j}] = GaussianRational(m.i) * c;
  }
  return r;
}

SmoothPolyFunction SmoothPolyFunction::dbar() const {
  SmoothPolyFunction r;
  for (const auto& [m, c] : terms_) {
    if (m.j > 0) r.terms_[Monomial{m.i, m.j - 1}] = GaussianRational(m.j) * c;
  }
  return r;
}

GaussianRational SmoothPolyFunction::evaluate(const GaussianRational& z) const {
  GaussianRational zb = z.conj();
  GaussianRational acc(0);
  for (const auto& [m, c] : terms_) acc += c * z.pow(m.i) * zb.pow(m.j);
  return acc;
}

std::complex<double> SmoothPolyFunction::evaluate(std::complex<double> z) const {
  std::complex<double> zb = std::conj(z), acc = 0.0;
  for (const auto& [m, c] : terms_) {
    acc += c.to_complex() * std::pow(z, static_cast<int>(m.i)) *
           std::pow(zb, static_cast<int>(m.j));
  }
  return acc;
}

OmegaFunction SmoothPolyFunction::lift(Target t) const {
  OmegaFunction r;
  for (const auto& [m, c] : terms_) {
    GaussianRational s = (t == Target::sphere && m.j % 2 != 0) ? -c : c;
    r += OmegaFunction::monomial(m.i, m.j, s);
  }
  return r;
}

long SmoothPolyFunction::factor_power(Target t) const {
  int s = t == Target::disk ? 1 : -1;
  long e = 0;
  TermMap cur = terms_;
  while (true) {
    auto q = divide_once(cur, s);
    if (!q) break;
    cur = *q;
    ++e;
  }
  return e;
}

std::string SmoothPolyFunction::str() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Monomial, GaussianRational>> terms(terms_.begin(), terms_.end());
  std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
    long dx = x.first.i + x.first.j, dy = y.first.i + y.first.j;
    if (dx != dy) return dx < dy;
    if (x.first.j != y.first.j) return x.first.j < y.first.j;
    return x.first.i < y.first.i;
  });
  std::string body;
  bool leading = true;
  for (const auto& [m, c] : terms) {
    std::string coeff;
    bool unit = false;
    if (c.is_one() && (m.i != 0 || m.j != 0)) {
      coeff = leading ? "" : "+";
      unit = true;
    } else if ((-c).is_one() && (m.i != 0 || m.j != 0)) {
      coeff = "-";
      unit = true;
    } else {
      coeff = c.str();
      if (!leading && coeff[0] != '-') coeff = "+" + coeff;
    }
    std::string vars;
    if (m.i != 0) vars += m.i == 1 ? "z" : "z^" + std::to_string(m.i);
    if (m.j != 0) {
      if (!vars.empty()) vars += "*";
      vars += m.j == 1 ? "zb" : "zb^" + std::to_string(m.j);
    }
    if (vars.empty()) {
      body += coeff + (unit ? "1" : "");
    } else if (coeff.empty() || coeff == "+" || coeff == "-") {
      body += coeff + vars;
    } else {
      body += coeff + "*" + vars;
    }
    leading = false;
  }
  return body;
}

std::string SmoothPolyFunction::factored_str(Target t) const {
  long e = factor_power(t);
  if (e == 0) return str();
  int s = t == Target::disk ? 1 : -1;
  TermMap cur = terms_;
  for (long i = 0; i < e; ++i) cur = *divide_once(cur, s);
  std::string head = t == Target::disk ? "(1-|z|^2)" : "(1+|z|^2)";
  if (e > 1) head += "^" + std::to_string(e);
  SmoothPolyFunction rest{cur};
  if (rest == constant(1)) return head;
  std::string body = rest.str();
  if (rest.term_count() == 1 && body[0] != '-') return head + "*" + body;
  return head + "*(" + body + ")";
}

SmoothPolyFunction diagonal_restrict(const OmegaFunction& f, Target t) {
  if (!f.is_polynomial()) {
    throw NonPolynomialRestriction("diagonal restriction needs a polynomial representative");
  }
  SmoothPolyFunction::TermMap out;
  for (const auto& [m, c] : f.numerator()) {
    if (m.i < 0 || m.j < 0) {
      throw NonPolynomialRestriction("diagonal restriction needs nonnegative exponents");
    }
    GaussianRational s = (t == Target::sphere && m.j % 2 != 0) ? -c : c;
    out[Monomial{m.i, m.j}] += s;
  }
  return SmoothPolyFunction(std::move(out));
}

namespace {

// One-variable factored sum for the n-th derivative: sum over k of
// n!/k! binom(n-1, k-1) tau^{n-k} (1 -+ |z|^2)^k  d^k f, with tau = -conj z
// on the disk and +conj z on the sphere.
SmoothPolyFunction factored_sum(const SmoothPolyFunction& f, int n, Target t) {
  if (n == 0) return f;
  SmoothPolyFunction acc;
  SmoothPolyFunction dk = f;
  for (int k = 1; k <= n; ++k) {
    dk = dk.d();
    if (dk.is_zero()) break;
    Rational c(factorial(n), factorial(k));
    c.canonicalize();
    c *= Rational(binomial(n - 1, k - 1));
    GaussianRational tau_pow((t == Target::disk && (n - k) % 2 != 0) ? -c : c);
    acc += SmoothPolyFunction::monomial(0, n - k, tau_pow) *
           (SmoothPolyFunction::one_minus_sq(t, k) * dk);
  }
  return acc;
}

SmoothPolyFunction via_two_variable(const SmoothPolyFunction& f, int n, bool conjugated,
                                    Target t) {
  OmegaFunction lifted = f.lift(t);
  OmegaFunction derived = conjugated ? pm_derive(lifted, 0, n) : pm_derive(lifted, n, 0);
  SmoothPolyFunction r = diagonal_restrict(derived, t);
  if (conjugated && t == Target::sphere && n % 2 != 0) r = -r;
  return r;
}

}  // namespace

SmoothPolyFunction classical_derive(const SmoothPolyFunction& f, int n, bool conjugated,
                                    Target t) {
  if (n < 0) throw MethodNotApplicable("classical_derive needs n >= 0");
  SmoothPolyFunction one_var =
      conjugated ? factored_sum(f.conj(), n, t).conj() : factored_sum(f, n, t);
  SmoothPolyFunction two_var = via_two_variable(f, n, conjugated, t);
  if (one_var != two_var) {
    throw Error("classical_derive: one- and two-variable routes disagree");
  }
  return one_var;
}

SmoothPolyFunction hat_d_iterate(const SmoothPolyFunction& f, int n) {
  SmoothPolyFunction g = f;
  SmoothPolyFunction s2 = SmoothPolyFunction::one_minus_sq(Target::disk, 2);
  for (int i = 0; i < n; ++i) g = s2 * g.d();
  return g;
}

namespace {

StarResult star_diagonal(const OmegaFunction& phi, const OmegaFunction& eta,
                         const DiagonalPoint& zp, const StarParams& params, Target t) {
  if (zp.target != t) {
    throw MethodNotApplicable("diagonal point targets the other model");
  }
  ExtPoint2 p = zp.embed();
  StarResult res = star_eval(phi, eta, p, params);

  // Independent reassembly with the same term budget through the
  // one-variable derivatives (falling back to the closed-form two-variable
  // sums when the operands do not restrict polynomially).
  bool symbolic = true;
  SmoothPolyFunction rphi, reta;
  try {
    rphi = diagonal_restrict(phi, t);
    reta = diagonal_restrict(eta, t);
  } catch (const NonPolynomialRestriction&) {
    symbolic = false;
  }
  GaussianRational check(0);
  for (int n = 0; n < res.terms_used; ++n) {
    GaussianRational c = star_coefficient(params.hbar, n);
    if (symbolic) {
      if (t == Target::sphere && n % 2 != 0) c = -c;
      check += c * classical_derive(rphi, n, true, t).evaluate(zp.z) *
               classical_derive(reta, n, false, t).evaluate(zp.z);
    } else {
      check += c * pm_derive(eta, n, 0, DeriveMethod::explicit_sum).evaluate(p) *
               pm_derive(phi, 0, n, DeriveMethod::explicit_sum).evaluate(p);
    }
  }
  if (check != res.value_exact) {
    throw Error("diagonal star product: one-variable reassembly disagrees");
  }
  return res;
}

}  // namespace

StarResult star_disk(const OmegaFunction& phi, const OmegaFunction& eta, const DiagonalPoint& z,
                     const StarParams& params) {
  return star_diagonal(phi, eta, z, params, Target::disk);
}

StarResult star_sphere(const OmegaFunction& phi, const OmegaFunction& eta, const DiagonalPoint& z,
                       const StarParams& params) {
  return star_diagonal(phi, eta, z, params, Target::sphere);
}

}  // namespace pm
