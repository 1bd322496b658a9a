#include "pm/omega.hpp"

#include <algorithm>
#include <vector>

namespace pm {

namespace {

using TermMap = OmegaFunction::TermMap;

void add_term(TermMap& m, Monomial mono, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = m.emplace(mono, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) m.erase(it);
  }
}

TermMap mul_terms(const TermMap& a, const TermMap& b) {
  TermMap out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) add_term(out, {ma.i + mb.i, ma.j + mb.j}, ca * cb);
  return out;
}

TermMap one_minus_zw_pow_terms(long e) {
  TermMap out;
  for (long t = 0; t <= e; ++t) {
    GaussianRational c{Rational(binomial(e, t))};
    if (t % 2 == 1) c = -c;
    out[{t, t}] = c;
  }
  return out;
}

// Tries to divide the Laurent polynomial by (1 - zw) in place; returns false
// (leaving the input untouched) when not divisible. Grouping the exponents
// by d = i - j turns the problem into univariate division of g_d(x) by
// (1 - x) with x = zw, which succeeds iff g_d(1) = 0 and has prefix sums as
// the quotient.
bool try_divide_one_minus_zw(TermMap& terms) {
  if (terms.empty()) return true;
  std::map<long, std::map<long, GaussianRational>> classes;  // d -> (j -> coeff)
  for (const auto& [m, c] : terms) classes[m.i - m.j][m.j] = c;
  for (const auto& [d, cl] : classes) {
    GaussianRational total = 0;
    for (const auto& [j, c] : cl) total += c;
    if (!total.is_zero()) return false;
  }
  TermMap out;
  for (const auto& [d, cl] : classes) {
    GaussianRational acc = 0;
    for (auto it = cl.begin(); it != cl.end(); ++it) {
      auto next = std::next(it);
      if (next == cl.end()) break;  // prefix sum hit zero; nothing beyond the last index
      acc += it->second;
      if (acc.is_zero()) continue;
      for (long j = it->first; j < next->first; ++j) add_term(out, {d + j, j}, acc);
    }
  }
  terms = std::move(out);
  return true;
}

}  // namespace

OmegaFunction::OmegaFunction(TermMap numerator, long k) : num_(std::move(numerator)), k_(k) {
  if (k_ < 0) throw Error("denominator exponent k must be nonnegative");
  normalize();
}

void OmegaFunction::normalize() {
  for (auto it = num_.begin(); it != num_.end();) {
    if (it->second.is_zero()) {
      it = num_.erase(it);
    } else {
      ++it;
    }
  }
  if (num_.empty()) {
    k_ = 0;
    return;
  }
  while (k_ > 0 && try_divide_one_minus_zw(num_)) --k_;
}

OmegaFunction OmegaFunction::constant(GaussianRational c) { return monomial(0, 0, std::move(c)); }

OmegaFunction OmegaFunction::monomial(long i, long j, GaussianRational c) {
  OmegaFunction f;
  add_term(f.num_, {i, j}, c);
  return f;
}

OmegaFunction OmegaFunction::one_minus_zw(long e) {
  OmegaFunction f;
  if (e >= 0) {
    f.num_ = one_minus_zw_pow_terms(e);
  } else {
    f.num_[{0, 0}] = 1;
    f.k_ = -e;
  }
  return f;
}

OmegaFunction OmegaFunction::basis_fpq(long p, long q) {
  if (p < 0 || q < 0) throw Error("basis exponents must be nonnegative");
  OmegaFunction f;
  f.num_[{p, q}] = 1;
  f.k_ = std::max(p, q);
  f.normalize();
  return f;
}

OmegaFunction& OmegaFunction::operator+=(const OmegaFunction& o) {
  long k = std::max(k_, o.k_);
  TermMap left = k > k_ ? mul_terms(num_, one_minus_zw_pow_terms(k - k_)) : num_;
  const TermMap& right_src = o.num_;
  TermMap right = k > o.k_ ? mul_terms(right_src, one_minus_zw_pow_terms(k - o.k_)) : right_src;
  for (const auto& [m, c] : right) add_term(left, m, c);
  num_ = std::move(left);
  k_ = k;
  normalize();
  return *this;
}

OmegaFunction& OmegaFunction::operator-=(const OmegaFunction& o) { return *this += -o; }

OmegaFunction operator-(const OmegaFunction& a) {
  OmegaFunction f = a;
  for (auto& [m, c] : f.num_) c = -c;
  return f;
}

OmegaFunction operator*(const OmegaFunction& a, const OmegaFunction& b) {
  OmegaFunction f;
  f.num_ = mul_terms(a.num_, b.num_);
  f.k_ = a.k_ + b.k_;
  f.normalize();
  return f;
}

OmegaFunction operator*(const GaussianRational& s, const OmegaFunction& a) {
  if (s.is_zero()) return {};
  OmegaFunction f = a;
  for (auto& [m, c] : f.num_) c *= s;
  return f;
}

OmegaFunction OmegaFunction::reciprocal() const {
  if (is_zero()) throw UnrepresentableDenominator("division by the zero function");
  auto [q, s] = factor_numerator();
  if (q.size() != 1) {
    throw UnrepresentableDenominator("divisor is not a unit of the class: " + str());
  }
  const auto& [mono, coeff] = *q.begin();
  long e = k_ - s;  // 1/f = coeff^-1 z^-i w^-j (1-zw)^e
  OmegaFunction out;
  if (e >= 0) {
    out.num_ = one_minus_zw_pow_terms(e);
    out.k_ = 0;
  } else {
    out.num_[{0, 0}] = 1;
    out.k_ = -e;
  }
  TermMap shift;
  shift[{-mono.i, -mono.j}] = coeff.inverse();
  out.num_ = mul_terms(out.num_, shift);
  out.normalize();
  return out;
}

OmegaFunction OmegaFunction::pow(long e) const {
  if (e < 0) return reciprocal().pow(-e);
  OmegaFunction acc = one(), base = *this;
  while (e > 0) {
    if (e & 1) acc *= base;
    if (e >>= 1) base *= base;
  }
  return acc;
}

OmegaFunction OmegaFunction::dz() const {
  TermMap dp;
  for (const auto& [m, c] : num_) {
    if (m.i != 0) add_term(dp, {m.i - 1, m.j}, GaussianRational(m.i) * c);
  }
  if (k_ == 0) {
    OmegaFunction f;
    f.num_ = std::move(dp);
    return f;
  }
  // d/dz [p / (1-zw)^k] = [p_z (1-zw) + k w p] / (1-zw)^(k+1)
  TermMap out = mul_terms(dp, one_minus_zw_pow_terms(1));
  for (const auto& [m, c] : num_) add_term(out, {m.i, m.j + 1}, GaussianRational(k_) * c);
  return {std::move(out), k_ + 1};
}

OmegaFunction OmegaFunction::dw() const {
  TermMap dp;
  for (const auto& [m, c] : num_) {
    if (m.j != 0) add_term(dp, {m.i, m.j - 1}, GaussianRational(m.j) * c);
  }
  if (k_ == 0) {
    OmegaFunction f;
    f.num_ = std::move(dp);
    return f;
  }
  TermMap out = mul_terms(dp, one_minus_zw_pow_terms(1));
  for (const auto& [m, c] : num_) add_term(out, {m.i + 1, m.j}, GaussianRational(k_) * c);
  return {std::move(out), k_ + 1};
}

OmegaFunction OmegaFunction::pullback_flip() const {
  // (1 - 1/(zw))^(-k) = (-1)^k (zw)^k (1 - zw)^(-k), so each numerator term
  // c z^i w^j maps to (-1)^k c z^(k-j) w^(k-i) over the same k.
  OmegaFunction f;
  f.k_ = k_;
  for (const auto& [m, c] : num_) {
    GaussianRational cc = (k_ % 2 == 1) ? -c : c;
    f.num_[{k_ - m.j, k_ - m.i}] = cc;
  }
  f.normalize();
  return f;
}

OmegaFunction OmegaFunction::pullback_swap() const {
  OmegaFunction f;
  f.k_ = k_;
  for (const auto& [m, c] : num_) f.num_[{m.j, m.i}] = c;
  f.normalize();
  return f;
}

OmegaFunction OmegaFunction::pullback_dilation(const GaussianRational& gamma) const {
  if (gamma.is_zero()) throw Error("dilation parameter must be nonzero");
  OmegaFunction f;
  f.k_ = k_;
  for (const auto& [m, c] : num_) f.num_[m] = c * gamma.pow(m.i - m.j);
  f.normalize();
  return f;
}

OmegaFunction OmegaFunction::pullback_moebius(const MoebiusMap& t) const {
  OmegaFunction g = t.flip ? pullback_flip() : *this;
  if (t.b.is_zero() && t.c.is_zero()) {
    return g.pullback_dilation(t.a / t.d);
  }
  if (t.a.is_zero() && t.d.is_zero()) {
    // (z, w) -> (gamma/z, 1/(gamma w)) with gamma = b/c; same (zw)-trick as
    // the flip for the denominator.
    GaussianRational gamma = t.b / t.c;
    OmegaFunction f;
    f.k_ = g.k_;
    for (const auto& [m, c] : g.num_) {
      GaussianRational cc = c * gamma.pow(m.i - m.j);
      if (g.k_ % 2 == 1) cc = -cc;
      f.num_[{g.k_ - m.i, g.k_ - m.j}] = cc;
    }
    f.normalize();
    return f;
  }
  throw NotClassPreserving("pullback under " + t.str() + " leaves the symbolic class");
}

GaussianRational OmegaFunction::evaluate(const ExtPoint2& p) const {
  if (!p.finite()) {
    if (!in_domain(p, Domain::Omega)) {
      throw PoleAtPoint("evaluation point " + p.str() + " lies outside Omega");
    }
    ExtPoint2 q(p.w.reciprocal().canonical(), p.z.reciprocal().canonical());
    try {
      return pullback_flip().evaluate(q);
    } catch (const PoleAtPoint& e) {
      throw NoFiniteLimit("no finite limit at " + p.str());
    }
  }
  GaussianRational z = p.z.value(), w = p.w.value();
  GaussianRational den_base = GaussianRational(1) - z * w;
  if (k_ > 0 && den_base.is_zero()) throw PoleAtPoint("pole on zw = 1 at " + p.str());
  GaussianRational acc = 0;
  for (const auto& [m, c] : num_) {
    if ((m.i < 0 && z.is_zero()) || (m.j < 0 && w.is_zero())) {
      throw PoleAtPoint("Laurent pole at " + p.str());
    }
    acc += c * z.pow(m.i) * w.pow(m.j);
  }
  if (k_ > 0) acc = acc * den_base.pow(-k_);
  return acc;
}

std::complex<double> OmegaFunction::evaluate(std::complex<double> z, std::complex<double> w) const {
  std::complex<double> acc = 0;
  for (const auto& [m, c] : num_) {
    std::complex<double> t = c.to_complex();
    t *= std::pow(z, static_cast<double>(m.i));
    t *= std::pow(w, static_cast<double>(m.j));
    acc += t;
  }
  if (k_ > 0) acc /= std::pow(1.0 - z * w, static_cast<double>(k_));
  return acc;
}

std::optional<long> OmegaFunction::homogeneity_degree() const {
  if (is_zero()) throw ZeroFunction("homogeneity degree of the zero function is undefined");
  long d = num_.begin()->first.i - num_.begin()->first.j;
  for (const auto& [m, c] : num_) {
    if (m.i - m.j != d) return std::nullopt;
  }
  return d;
}

std::pair<TermMap, long> OmegaFunction::factor_numerator() const {
  TermMap q = num_;
  long s = 0;
  if (q.empty()) return {q, 0};
  while (true) {
    TermMap trial = q;
    if (!try_divide_one_minus_zw(trial) || trial.empty()) break;
    q = std::move(trial);
    ++s;
  }
  return {q, s};
}

std::string OmegaFunction::str() const {
  if (is_zero()) return "0";
  auto [q, s] = factor_numerator();
  long e = s - k_;

  // Terms ordered by total degree, then by w-exponent.
  std::vector<std::pair<Monomial, GaussianRational>> terms(q.begin(), q.end());
  std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
    long dx = x.first.i + x.first.j, dy = y.first.i + y.first.j;
    if (dx != dy) return dx < dy;
    if (x.first.j != y.first.j) return x.first.j < y.first.j;
    return x.first.i < y.first.i;
  });

  auto monomial_str = [](const Monomial& m, const GaussianRational& c, bool leading) {
    std::string coeff;
    bool unit_coeff = false;
    if (c.is_one() && (m.i != 0 || m.j != 0)) {
      coeff = leading ? "" : "+";
      unit_coeff = true;
    } else if ((-c).is_one() && (m.i != 0 || m.j != 0)) {
      coeff = "-";
      unit_coeff = true;
    } else {
      std::string cs = c.str();
      if (!leading && cs[0] != '-') cs = "+" + cs;
      coeff = cs;
    }
    std::string vars;
    if (m.i != 0) vars += m.i == 1 ? "z" : "z^" + std::to_string(m.i);
    if (m.j != 0) {
      if (!vars.empty()) vars += "*";
      vars += m.j == 1 ? "w" : "w^" + std::to_string(m.j);
    }
    if (vars.empty()) return coeff + (unit_coeff ? "1" : "");
    if (coeff.empty() || coeff == "+" || coeff == "-") return coeff + vars;
    return coeff + "*" + vars;
  };

  std::string body;
  bool leading = true;
  for (const auto& [m, c] : terms) {
    body += monomial_str(m, c, leading);
    leading = false;
  }
  if (e == 0) return body;

  long abs_e = e < 0 ? -e : e;
  std::string base = "(1-z*w)";
  std::string powstr = base + (abs_e == 1 ? "" : "^" + std::to_string(abs_e));
  bool body_is_unit_monomial = terms.size() == 1;
  if (body == "1") return e > 0 ? powstr : "1/" + powstr;
  if (!body_is_unit_monomial) body = "(" + body + ")";
  return e > 0 ? body + "*" + powstr : body + "/" + powstr;
}

nlohmann::ordered_json OmegaFunction::to_json() const {
  nlohmann::ordered_json numerator = nlohmann::ordered_json::array();
  for (const auto& [m, c] : num_) {
    numerator.push_back({m.i, m.j, rational_to_string(c.re), rational_to_string(c.im)});
  }
  return nlohmann::ordered_json{{"numerator", numerator}, {"k", k_}};
}

OmegaFunction OmegaFunction::from_json(const nlohmann::ordered_json& j) {
  TermMap terms;
  for (const auto& entry : j.at("numerator")) {
    Monomial m{entry.at(0).get<long>(), entry.at(1).get<long>()};
    GaussianRational c{rational_from_string(entry.at(2).get<std::string>()),
                       rational_from_string(entry.at(3).get<std::string>())};
    add_term(terms, m, c);
  }
  return {std::move(terms), j.at("k").get<long>()};
}

}  // namespace pm
