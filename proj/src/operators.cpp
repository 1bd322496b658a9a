#include "pm/operators.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "pm/errors.hpp"

namespace pm {

namespace {

GaussianRational q_int(const Integer& v) { return GaussianRational(Rational(v)); }

// (1-zw) d_z^p [(1-zw)^(p-1) f], the linearised closed form of D_z^p.
OmegaFunction pure_z(const OmegaFunction& f, int p) {
  if (p == 0) return f;
  OmegaFunction g = OmegaFunction::one_minus_zw(p - 1) * f;
  for (int i = 0; i < p; ++i) g = g.dz();
  return OmegaFunction::one_minus_zw(1) * g;
}

OmegaFunction pure_w(const OmegaFunction& f, int p) {
  if (p == 0) return f;
  OmegaFunction g = OmegaFunction::one_minus_zw(p - 1) * f;
  for (int i = 0; i < p; ++i) g = g.dw();
  return OmegaFunction::one_minus_zw(1) * g;
}

// The closed double-sum formula (single sums on pure orders).
OmegaFunction derive_explicit(const OmegaFunction& f, int m, int n) {
  if (m == 0 && n == 0) return f;
  OmegaFunction acc;
  if (n == 0) {
    OmegaFunction dzj = f;
    for (int j = 1; j <= m; ++j) {
      dzj = dzj.dz();
      GaussianRational c = q_int(factorial(m) / factorial(j) * binomial(m - 1, j - 1));
      OmegaFunction t = c * (OmegaFunction::one_minus_zw(j) * dzj);
      if ((m - j) % 2 == 1) t = GaussianRational(-1) * t;
      acc += OmegaFunction::monomial(0, m - j) * t;
    }
    return acc;
  }
  if (m == 0) {
    OmegaFunction dwk = f;
    for (int k = 1; k <= n; ++k) {
      dwk = dwk.dw();
      GaussianRational c = q_int(factorial(n) / factorial(k) * binomial(n - 1, k - 1));
      OmegaFunction t = c * (OmegaFunction::one_minus_zw(k) * dwk);
      if ((n - k) % 2 == 1) t = GaussianRational(-1) * t;
      acc += OmegaFunction::monomial(n - k, 0) * t;
    }
    return acc;
  }
  OmegaFunction dzj = f;
  for (int j = 1; j <= m; ++j) {
    dzj = dzj.dz();
    OmegaFunction djk = dzj;
    for (int k = 1; k <= n; ++k) {
      djk = djk.dw();
      GaussianRational c = q_int(factorial(m) * factorial(n) / (factorial(j) * factorial(k)) *
                                 binomial(m - 1, j - 1) * binomial(n - 1, k - 1));
      if ((m - j + n - k) % 2 == 1) c = GaussianRational(-1) * c;
      acc += c * (OmegaFunction::monomial(n - k, m - j) * (OmegaFunction::one_minus_zw(j + k) * djk));
    }
  }
  return acc;
}

// --- integer polynomial helpers ----------------------------------------------

using ZPoly = std::vector<Integer>;

ZPoly zp_add(const ZPoly& a, const ZPoly& b) {
  ZPoly out(std::max(a.size(), b.size()), Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

ZPoly zp_scale(const ZPoly& a, const Integer& s) {
  ZPoly out = a;
  for (auto& c : out) c *= s;
  return out;
}

ZPoly zp_shift_x(const ZPoly& a) {  // multiply by x
  ZPoly out(a.size() + 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i + 1] = a[i];
  return out;
}

std::vector<ZPoly> diagonal_family(int top) {
  std::vector<ZPoly> P(top + 1);
  P[0] = {Integer(1)};
  if (top >= 1) P[1] = {Integer(0), Integer(1)};
  for (int n = 1; n < top; ++n) {
    Integer n2 = Integer(n) * n;
    ZPoly next = zp_add(zp_shift_x(P[n]), zp_scale(P[n], 2 * n2));
    next = zp_add(next, zp_scale(P[n - 1], -n2 * Integer(n - 1) * Integer(n - 1)));
    P[n + 1] = next;
  }
  return P;
}

}  // namespace

DeriveMethod derive_method_from_string(const std::string& name) {
  if (name == "definition") return DeriveMethod::definition;
  if (name == "explicit") return DeriveMethod::explicit_sum;
  if (name == "recursion") return DeriveMethod::recursion;
  if (name == "laplace") return DeriveMethod::laplace;
  if (name == "pure" || name == "pure_linearised") return DeriveMethod::pure_linearised;
  throw MethodNotApplicable("unknown derivation method: " + name);
}

std::string derive_method_name(DeriveMethod m) {
  switch (m) {
    case DeriveMethod::definition: return "definition";
    case DeriveMethod::explicit_sum: return "explicit";
    case DeriveMethod::recursion: return "recursion";
    case DeriveMethod::laplace: return "laplace";
    case DeriveMethod::pure_linearised: return "pure_linearised";
  }
  return "?";
}

std::string IntPolynomial::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) os << ", ";
    os << coeffs[i].get_str();
  }
  os << "]";
  return os.str();
}

OmegaFunction IntPolynomial::apply_in_laplacian(const OmegaFunction& f) const {
  // Horner in the operator: ((c_d L + c_{d-1}) L + ...) applied to f, where
  // L g = (1-zw)^2 g_zw. Evaluated as sum_j c_j L^j f.
  OmegaFunction acc;
  OmegaFunction power = f;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (j > 0) power = OmegaFunction::one_minus_zw(2) * power.dz().dw();
    if (coeffs[j] != 0) acc += q_int(coeffs[j]) * power;
  }
  return acc;
}

IntPolynomial laplace_poly(int m, int n, bool alt_alpha) {
  if (m < n) std::swap(m, n);
  auto diag = diagonal_family(std::max(n, 1));
  if (m == n) return IntPolynomial{diag[n]};
  // March the gap upward: T[g][j] = P_{j+g, j}, with
  // P_{j+g, j} = sum_k alpha_{j,k} P_{k+g-1, k}.
  int gap = m - n;
  std::vector<ZPoly> T(n + 1);
  for (int j = 0; j <= n; ++j) T[j] = diag[j];
  for (int g = 1; g <= gap; ++g) {
    std::vector<ZPoly> next(n + 1);
    for (int j = 0; j <= n; ++j) {
      ZPoly acc{Integer(0)};
      for (int k = 0; k <= j; ++k) {
        Integer alpha;
        if (k >= 1)
          alpha = factorial(j) * factorial(j - 1) / (factorial(k) * factorial(k - 1));
        else if (j == 0)
          alpha = 1;
        else
          alpha = alt_alpha ? factorial(j) * factorial(j - 1) : Integer(0);
        if (alpha != 0) acc = zp_add(acc, zp_scale(T[k], alpha));
      }
      next[j] = acc;
    }
    T = next;
  }
  return IntPolynomial{T[n]};
}

IntPolynomial diagonal_poly_via_bk(int n) {
  // b[p][k] = coefficient of x^k in P_p, built from the closed form
  //   b_k(p) = ((p-k)(2k^2+1)+3k)/(3k) * ((p-1)!/(k-1)!)^2
  //            + sum_{j=k+1}^{p-1} b_{k-1}(j) ((p-1)!/j!)^2 (p-j).
  std::vector<std::vector<Rational>> b(n + 1);
  b[0] = {Rational(1)};
  for (int p = 1; p <= n; ++p) {
    b[p].assign(p + 1, Rational(0));
    for (int k = 1; k <= p; ++k) {
      Rational fk(factorial(p - 1) / factorial(k - 1));
      Rational term = Rational(Integer(p - k) * (2 * Integer(k) * k + 1) + 3 * k) /
                      Rational(3 * k) * fk * fk;
      for (int j = k + 1; j <= p - 1; ++j) {
        Rational fj(factorial(p - 1) / factorial(j));
        term += b[j][k - 1] * fj * fj * Rational(p - j);
      }
      b[p][k] = term;
    }
  }
  IntPolynomial out;
  for (const auto& c : b[n]) {
    Rational r = c;
    r.canonicalize();
    if (r.get_den() != 1) throw Error("b_k closed form produced a non-integer coefficient");
    out.coeffs.push_back(r.get_num());
  }
  while (out.coeffs.size() > 1 && out.coeffs.back() == 0) out.coeffs.pop_back();
  return out;
}

OmegaFunction pm_derive(const OmegaFunction& f, int m, int n, DeriveMethod method) {
  if (m < 0 || n < 0) return OmegaFunction();
  switch (method) {
    case DeriveMethod::explicit_sum:
      return derive_explicit(f, m, n);
    case DeriveMethod::definition: {
      Jet2<OmegaFunction> g = phi_jet_grid_symbolic(f, m, n);
      return q_int(factorial(m) * factorial(n)) * g.at(m, n);
    }
    case DeriveMethod::recursion: {
      Jet2<OmegaFunction> g = pm_derive_grid_recursion(f, m, n);
      return g.at(m, n);
    }
    case DeriveMethod::laplace: {
      OmegaFunction h = laplace_poly(m, n).apply_in_laplacian(f);
      return m >= n ? pure_z(h, m - n) : pure_w(h, n - m);
    }
    case DeriveMethod::pure_linearised:
      if (m != 0 && n != 0)
        throw MethodNotApplicable("pure_linearised requires a pure order (m = 0 or n = 0)");
      return n == 0 ? pure_z(f, m) : pure_w(f, n);
  }
  throw MethodNotApplicable("unreachable");
}

Jet2<OmegaFunction> pm_derive_grid_definition(const OmegaFunction& f, int M, int N, int max_total) {
  Jet2<OmegaFunction> g = phi_jet_grid_symbolic(f, M, N);
  for (int m = 0; m <= M; ++m)
    for (int n = 0; n <= N; ++n) {
      if (max_total >= 0 && m + n > max_total) {
        g.at(m, n) = OmegaFunction();
        continue;
      }
      g.at(m, n) = q_int(factorial(m) * factorial(n)) * g.at(m, n);
    }
  return g;
}

Jet2<OmegaFunction> pm_derive_grid_recursion(const OmegaFunction& f, int M, int N) {
  Jet2<OmegaFunction> g(M, N);
  g.at(0, 0) = f;
  for (int n = 0; n < N; ++n)
    g.at(0, n + 1) = GaussianRational(-n) * (OmegaFunction::z() * g.at(0, n)) +
                     OmegaFunction::one_minus_zw(1) * g.at(0, n).dw();
  for (int m = 0; m < M; ++m)
    for (int n = 0; n <= N; ++n) {
      OmegaFunction step = GaussianRational(n - m) * (OmegaFunction::w() * g.at(m, n)) +
                           OmegaFunction::one_minus_zw(1) * g.at(m, n).dz();
      if (n >= 1) step += GaussianRational(static_cast<long>(n) * (n - 1)) * g.at(m, n - 1);
      g.at(m + 1, n) = step;
    }
  return g;
}

OmegaFunction pm_tilde(const OmegaFunction& f, int m, int n) {
  return OmegaFunction::monomial(n - m, m - n) * pm_derive(f, n, m);
}

std::vector<OmegaFunction> kernel_basis(int n, char slot, int cutoff) {
  std::vector<OmegaFunction> out;
  for (long j = 0; j <= n; ++j)
    for (long k = 0; k <= cutoff; ++k) {
      long zi = slot == 'z' ? j : k;
      long wj = slot == 'z' ? k : j;
      out.push_back(OmegaFunction({{Monomial{zi, wj}, GaussianRational(1)}}, n));
    }
  return out;
}

long exact_rank(std::vector<std::vector<GaussianRational>> rows) {
  if (rows.empty()) return 0;
  std::size_t cols = rows[0].size();
  long rank = 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t pivot = r;
    while (pivot < rows.size() && rows[pivot][c].is_zero()) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[r]);
    GaussianRational inv = rows[r][c].inverse();
    for (std::size_t j = c; j < cols; ++j) rows[r][j] = rows[r][j] * inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      GaussianRational s = rows[i][c];
      for (std::size_t j = c; j < cols; ++j) rows[i][j] = rows[i][j] - s * rows[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

KernelRankReport kernel_rank_check(int n, char slot, int cutoff) {
  KernelRankReport rep;
  std::vector<OmegaFunction> images;
  for (long i = 0; i <= cutoff; ++i)
    for (long j = 0; j <= cutoff; ++j) {
      OmegaFunction f({{Monomial{i, j}, GaussianRational(1)}}, n);
      images.push_back(slot == 'z' ? pm_derive(f, n + 1, 0) : pm_derive(f, 0, n + 1));
    }
  rep.space_dim = static_cast<long>(images.size());

  long K = 0;
  for (const auto& g : images) K = std::max(K, g.k());
  std::map<Monomial, std::size_t> columns;
  std::vector<OmegaFunction> cleared;
  for (const auto& g : images) {
    OmegaFunction h = OmegaFunction::one_minus_zw(K - g.k()) * g;
    cleared.push_back(h);
    for (const auto& [mono, c] : h.numerator()) {
      (void)c;
      columns.emplace(mono, 0);
    }
  }
  std::size_t idx = 0;
  for (auto& [mono, at] : columns) {
    (void)mono;
    at = idx++;
  }
  std::vector<std::vector<GaussianRational>> rows;
  for (const auto& h : cleared) {
    std::vector<GaussianRational> row(columns.size(), GaussianRational(0));
    for (const auto& [mono, c] : h.numerator()) row[columns.at(mono)] = c;
    rows.push_back(std::move(row));
  }
  rep.rank = exact_rank(std::move(rows));
  rep.kernel_dim = rep.space_dim - rep.rank;
  rep.expected_dim = static_cast<long>(n + 1) * (cutoff + 1);
  rep.complete = rep.kernel_dim == rep.expected_dim;
  return rep;
}

namespace {

bool symbolically_class_preserving(const MoebiusMap& t) {
  bool diag = t.b.is_zero() && t.c.is_zero();
  bool anti = t.a.is_zero() && t.d.is_zero();
  return diag || anti;
}

// Symbolic prefactor as a class element (only for class-preserving maps,
// where numerator and denominator are monomials).
OmegaFunction symbolic_prefactor(const MoebiusMap& t, int m, int n) {
  OmegaFunction num, den;
  long e;
  if (!t.flip) {
    num = OmegaFunction::constant(t.a) + OmegaFunction::monomial(0, 1, t.b);
    den = OmegaFunction::monomial(1, 0, t.c) + OmegaFunction::constant(t.d);
    e = m - n;
  } else {
    num = OmegaFunction::monomial(1, 0, t.a) + OmegaFunction::constant(t.b);
    den = OmegaFunction::monomial(0, 1, t.d) + OmegaFunction::constant(t.c);
    e = n - m;
  }
  if (e == 0) return OmegaFunction::one();
  return (num * den.reciprocal()).pow(e);
}

}  // namespace

InvarianceReport check_invariance(const OmegaFunction& f, const MoebiusMap& t, int m, int n,
                                  const std::vector<ExtPoint2>& points, double tol) {
  InvarianceReport rep;
  int m2 = t.flip ? n : m, n2 = t.flip ? m : n;
  if (symbolically_class_preserving(t)) {
    OmegaFunction lhs = pm_derive(f.pullback_moebius(t), m, n);
    OmegaFunction rhs = symbolic_prefactor(t, m, n) * pm_derive(f, m2, n2).pullback_moebius(t);
    rep.exact = true;
    rep.pass = lhs == rhs;
    return rep;
  }
  OmegaFunction df = pm_derive(f, m2, n2);
  JetProvider fp = make_provider(f);
  GaussianRational mn_fact = q_int(factorial(m) * factorial(n));
  double max_dev = 0.0;
  for (const auto& p : points) {
    MoebiusMap s = compose(t, MoebiusMap::phi(p.z.value(), p.w.value()));
    CJet g = jets_of_pullback(fp, s, 0.0, 0.0, m, n);
    std::complex<double> lhs = mn_fact.to_complex() * g.at(m, n);
    ExtPoint2 q = t.apply(p);
    std::complex<double> rhs =
        invariance_prefactor(t, m, n, p).to_complex() * df.evaluate(q).to_complex();
    double dev = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    max_dev = std::max(max_dev, dev);
  }
  rep.exact = false;
  rep.max_rel_dev = max_dev;
  rep.pass = max_dev <= tol;
  return rep;
}

}  // namespace pm
