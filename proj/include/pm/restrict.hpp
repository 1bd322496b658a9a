#pragma once

#include <complex>
#include <map>
#include <string>

#include "pm/omega.hpp"
#include "pm/star.hpp"

namespace pm {

// The two diagonal models: the unit disk embeds as (z, conj z), the sphere
// as (z, -conj z).
enum class Target { disk, sphere };

const char* target_name(Target t);

struct DiagonalPoint {
  GaussianRational z;
  Target target = Target::disk;

  // Embedded base point; validates |z| < 1 for the disk.
  ExtPoint2 embed() const;
};

// Polynomials in z and conj(z) over Q(i): the smooth (not necessarily
// holomorphic) one-variable test class. Monomial (i, j) stands for
// z^i conj(z)^j; representations are normalized (zero coefficients dropped).
class SmoothPolyFunction {
 public:
  using TermMap = std::map<Monomial, GaussianRational>;

  SmoothPolyFunction() = default;  // zero
  explicit SmoothPolyFunction(TermMap terms);

  static SmoothPolyFunction constant(GaussianRational c);
  static SmoothPolyFunction monomial(long i, long j, GaussianRational c = 1);
  static SmoothPolyFunction zvar() { return monomial(1, 0); }
  static SmoothPolyFunction zbar() { return monomial(0, 1); }
  // (1 - |z|^2)^e on the disk, (1 + |z|^2)^e on the sphere; e >= 0.
  static SmoothPolyFunction one_minus_sq(Target t, long e = 1);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  SmoothPolyFunction& operator+=(const SmoothPolyFunction& o);
  SmoothPolyFunction& operator-=(const SmoothPolyFunction& o);
  friend SmoothPolyFunction operator+(SmoothPolyFunction a, const SmoothPolyFunction& b) {
    return a += b;
  }
  friend SmoothPolyFunction operator-(SmoothPolyFunction a, const SmoothPolyFunction& b) {
    return a -= b;
  }
  friend SmoothPolyFunction operator-(const SmoothPolyFunction& a);
  friend SmoothPolyFunction operator*(const SmoothPolyFunction& a, const SmoothPolyFunction& b);
  friend SmoothPolyFunction operator*(const GaussianRational& s, const SmoothPolyFunction& a);
  friend bool operator==(const SmoothPolyFunction& a, const SmoothPolyFunction& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const SmoothPolyFunction& a, const SmoothPolyFunction& b) {
    return !(a == b);
  }

  // Coefficient conjugation plus index swap; never numeric conjugation of
  // evaluated values.
  SmoothPolyFunction conj() const;
  SmoothPolyFunction d() const;     // Wirtinger derivative in z
  SmoothPolyFunction dbar() const;  // Wirtinger derivative in conj z

  GaussianRational evaluate(const GaussianRational& z) const;
  std::complex<double> evaluate(std::complex<double> z) const;

  // Two-variable extension: conj(z) -> w on the disk, conj(z) -> -w on the
  // sphere, so that the diagonal restriction of the lift is the identity.
  OmegaFunction lift(Target t) const;

  // Largest e with (1 -+ |z|^2)^e dividing the polynomial (0 for the zero
  // polynomial).
  long factor_power(Target t) const;

  std::string str() const;                  // expanded, conj(z) printed as zb
  std::string factored_str(Target t) const;  // explicit (1 -+ |z|^2)^e factor

 private:
  TermMap terms_;
};

// Representation-level substitution w := conj(z) (disk) or w := -conj(z)
// (sphere); requires a polynomial operand, otherwise
// NonPolynomialRestriction.
SmoothPolyFunction diagonal_restrict(const OmegaFunction& f, Target t);

// n-th invariant derivative D^n f (conjugated: the bar variant, defined by
// conj . D^n . conj). Computed both by the one-variable factored sum and by
// the two-variable route (pure derivative of the lift, then restriction);
// the two results are compared exactly on every call.
SmoothPolyFunction classical_derive(const SmoothPolyFunction& f, int n, bool conjugated, Target t);

// n-fold application of the disk operator f |-> (1 - |z|^2)^2 d f.
SmoothPolyFunction hat_d_iterate(const SmoothPolyFunction& f, int n);

// Induced star products on the diagonal models. phi and eta are the
// two-variable extensions of the diagonal operands; the value equals
// star_eval(phi, eta, embed(z), params) and is recomputed through the
// one-variable derivatives with the same term budget; the two assemblies
// must agree exactly.
StarResult star_disk(const OmegaFunction& phi, const OmegaFunction& eta, const DiagonalPoint& z,
                     const StarParams& params);
StarResult star_sphere(const OmegaFunction& phi, const OmegaFunction& eta, const DiagonalPoint& z,
                       const StarParams& params);

}  // namespace pm
