#pragma once

#include <vector>

#include "pm/rational.hpp"

namespace pm {

// One slot of a point on the Riemann sphere, stored projectively as
// num:den over Q(i) so that infinity is first-class. Invariant: not both
// coordinates zero.
struct ProjectiveCoord {
  GaussianRational num, den;

  ProjectiveCoord() : num(0), den(1) {}
  ProjectiveCoord(GaussianRational n, GaussianRational d);

  static ProjectiveCoord finite(GaussianRational v) { return {std::move(v), 1}; }
  static ProjectiveCoord infinity() { return {1, 0}; }

  bool is_infinite() const { return den.is_zero(); }
  bool is_zero() const { return num.is_zero() && !den.is_zero(); }

  // Finite value; throws Error when infinite.
  GaussianRational value() const;
  ProjectiveCoord reciprocal() const { return {den, num}; }

  // Canonical representative: (v, 1) when finite, (1, 0) at infinity.
  ProjectiveCoord canonical() const;

  friend bool operator==(const ProjectiveCoord& a, const ProjectiveCoord& b) {
    return a.num * b.den == b.num * a.den;
  }
  friend bool operator!=(const ProjectiveCoord& a, const ProjectiveCoord& b) { return !(a == b); }

  std::string str() const;
};

// A point of the extended bidisc model: (z, w) with either slot possibly
// infinite.
struct ExtPoint2 {
  ProjectiveCoord z, w;

  ExtPoint2() = default;
  ExtPoint2(ProjectiveCoord zz, ProjectiveCoord ww) : z(std::move(zz)), w(std::move(ww)) {}
  ExtPoint2(GaussianRational zz, GaussianRational ww)
      : z(ProjectiveCoord::finite(std::move(zz))), w(ProjectiveCoord::finite(std::move(ww))) {}

  bool finite() const { return !z.is_infinite() && !w.is_infinite(); }
  std::string str() const { return "(" + z.str() + ";" + w.str() + ")"; }

  friend bool operator==(const ExtPoint2& a, const ExtPoint2& b) {
    return a.z == b.z && a.w == b.w;
  }
};

enum class Domain { Omega, OmegaPlus, OmegaMinus, FiniteChart, BiDisk };

// Membership with the extended-arithmetic rule 0 * inf = 1 on the excluded
// hypersurface zw = 1.
bool in_domain(const ExtPoint2& p, Domain d);

// Element of the Moebius-type group acting on Omega:
//   T(z, w) = (psi(z), 1/psi(1/w)),   psi = (a. + b)/(c. + d),
// optionally followed by the central flip F(z, w) = (1/w, 1/z).
// The second slot's projective action is the matrix (d, c; b, a).
struct MoebiusMap {
  GaussianRational a, b, c, d;
  bool flip = false;

  MoebiusMap() : a(1), b(0), c(0), d(1) {}
  MoebiusMap(GaussianRational a_, GaussianRational b_, GaussianRational c_, GaussianRational d_,
             bool flip_ = false);

  static MoebiusMap identity() { return {}; }
  static MoebiusMap flip_map();
  static MoebiusMap dilation(const GaussianRational& gamma);  // rho_gamma: (gamma z, w/gamma)
  // phi_{z,w}(u, v) = ((z+u)/(1+wu), (w+v)/(1+zv)); requires zw != 1.
  static MoebiusMap phi(const GaussianRational& z, const GaussianRational& w);

  GaussianRational det() const { return a * d - b * c; }
  MoebiusMap inverse() const { return {d, -b, -c, a, flip}; }

  // Scales so the first nonzero matrix entry (row-major) equals 1; the flip
  // flag is untouched. Used for equality.
  MoebiusMap normalized() const;

  ExtPoint2 apply(const ExtPoint2& p) const;

  friend bool operator==(const MoebiusMap& s, const MoebiusMap& t);

  std::string str() const;
};

// Composition s ∘ t (apply t first). The flip is central, so flags xor and
// matrices multiply.
MoebiusMap compose(const MoebiusMap& s, const MoebiusMap& t);

// T = rho_gamma ∘ phi_{z,w} (∘ F when flipped). Defined whenever the base
// point T(0,0) (respectively (T∘F)(0,0)) is finite; otherwise throws
// DecompositionOutOfChart.
struct Decomposition {
  GaussianRational gamma, z, w;
  bool flipped = false;
};
Decomposition decompose_map(const MoebiusMap& t);

// Cocycle multiplier in the invariance law for D^{m,n}:
//   flip-free T:  ((a + b w)/(c z + d))^(m-n), compared against D^{m,n} at T(p);
//   flipped T:    ((a z + b)/(d w + c))^(n-m), compared against D^{n,m} at T(p).
// Requires p finite; throws SingularPrefactor when a factor vanishes and the
// exponent is nonzero.
GaussianRational invariance_prefactor(const MoebiusMap& t, long m, long n, const ExtPoint2& p);

}  // namespace pm
