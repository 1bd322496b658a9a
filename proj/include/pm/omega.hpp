#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "json.hpp"
#include "pm/geometry.hpp"
#include "pm/rational.hpp"

namespace pm {

// Exponent pair of a Laurent monomial z^i w^j.
struct Monomial {
  long i = 0, j = 0;
  friend bool operator<(const Monomial& a, const Monomial& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.i == b.i && a.j == b.j; }
};

// Exact member of the working function class on Omega:
//
//     f(z, w) = p(z, w) / (1 - zw)^k,
//
// with p a Laurent polynomial over Q(i) and k >= 0. The representation is
// kept normalized: p is not divisible by (1 - zw) unless k = 0, and zero
// coefficients are dropped. The class is closed under the ring operations,
// Wirtinger derivatives, the flip/swap/dilation pullbacks and all the
// invariant operators built on top of them; equality of normalized
// representations is structural equality.
class OmegaFunction {
 public:
  using TermMap = std::map<Monomial, GaussianRational>;

  OmegaFunction() = default;  // zero
  OmegaFunction(TermMap numerator, long k);

  static OmegaFunction constant(GaussianRational c);
  static OmegaFunction monomial(long i, long j, GaussianRational c = 1);
  static OmegaFunction z() { return monomial(1, 0); }
  static OmegaFunction w() { return monomial(0, 1); }
  static OmegaFunction one() { return constant(1); }
  // (1 - zw)^e as a class element; e may be negative.
  static OmegaFunction one_minus_zw(long e = 1);
  // Spanning family f_{p,q} = z^p w^q / (1 - zw)^max(p,q), p, q >= 0.
  static OmegaFunction basis_fpq(long p, long q);

  const TermMap& numerator() const { return num_; }
  long k() const { return k_; }
  bool is_zero() const { return num_.empty(); }
  bool is_polynomial() const { return k_ == 0; }
  std::size_t term_count() const { return num_.size(); }

  OmegaFunction& operator+=(const OmegaFunction& o);
  OmegaFunction& operator-=(const OmegaFunction& o);
  friend OmegaFunction operator+(OmegaFunction a, const OmegaFunction& b) { return a += b; }
  friend OmegaFunction operator-(OmegaFunction a, const OmegaFunction& b) { return a -= b; }
  friend OmegaFunction operator-(const OmegaFunction& a);
  friend OmegaFunction operator*(const OmegaFunction& a, const OmegaFunction& b);
  friend OmegaFunction operator*(const GaussianRational& s, const OmegaFunction& a);
  OmegaFunction& operator*=(const OmegaFunction& o) { return *this = *this * o; }

  friend bool operator==(const OmegaFunction& a, const OmegaFunction& b) {
    return a.k_ == b.k_ && a.num_ == b.num_;
  }
  friend bool operator!=(const OmegaFunction& a, const OmegaFunction& b) { return !(a == b); }

  // Multiplicative inverse; exists iff the function is a unit of the class,
  // i.e. a monomial times a power of (1 - zw). Otherwise throws
  // UnrepresentableDenominator.
  OmegaFunction reciprocal() const;
  OmegaFunction pow(long e) const;

  // Wirtinger derivatives d/dz, d/dw.
  OmegaFunction dz() const;
  OmegaFunction dw() const;

  // Pullbacks under the class-preserving symmetries.
  OmegaFunction pullback_flip() const;      // f(1/w, 1/z)
  OmegaFunction pullback_swap() const;      // f(w, z)
  OmegaFunction pullback_dilation(const GaussianRational& gamma) const;  // f(gamma z, w/gamma)
  // General Moebius-type pullback f ∘ T; defined exactly when T's matrix is
  // diagonal or antidiagonal (optionally flipped), else NotClassPreserving.
  OmegaFunction pullback_moebius(const MoebiusMap& t) const;

  // Exact evaluation; infinite slots are routed through the flip chart.
  // Throws PoleAtPoint / NoFiniteLimit.
  GaussianRational evaluate(const ExtPoint2& p) const;
  // Numeric evaluation on the finite chart (IEEE semantics at poles).
  std::complex<double> evaluate(std::complex<double> z, std::complex<double> w) const;

  // Degree d with f ∘ rho_gamma = gamma^d f, when f is rho-homogeneous;
  // nullopt for mixed functions. Throws ZeroFunction on the zero function.
  std::optional<long> homogeneity_degree() const;

  // Factors the numerator as q * (1 - zw)^s with s maximal.
  std::pair<TermMap, long> factor_numerator() const;

  // Canonical display, e.g. "2*z*(1-z*w)", "w/(1-z*w)", "1-z*w+w^2".
  std::string str() const;

  nlohmann::ordered_json to_json() const;
  static OmegaFunction from_json(const nlohmann::ordered_json& j);

 private:
  void normalize();

  TermMap num_;
  long k_ = 0;
};

}  // namespace pm
