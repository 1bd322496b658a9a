#include "pm/geometry.hpp"

namespace pm {

ProjectiveCoord::ProjectiveCoord(GaussianRational n, GaussianRational d)
    : num(std::move(n)), den(std::move(d)) {
  if (num.is_zero() && den.is_zero()) throw Error("invalid projective coordinate 0:0");
}

GaussianRational ProjectiveCoord::value() const {
  if (is_infinite()) throw Error("projective coordinate is infinite");
  return num / den;
}

ProjectiveCoord ProjectiveCoord::canonical() const {
  if (is_infinite()) return infinity();
  return finite(value());
}

std::string ProjectiveCoord::str() const {
  if (is_infinite()) return "inf";
  return value().str();
}

bool in_domain(const ExtPoint2& p, Domain d) {
  // zw = 1 (with 0 * inf = 1) holds exactly when num_z num_w == den_z den_w.
  bool on_hypersurface = p.z.num * p.w.num == p.z.den * p.w.den;
  if (on_hypersurface) return false;
  switch (d) {
    case Domain::Omega:
      return true;
    case Domain::OmegaPlus:
      return !p.w.is_infinite();
    case Domain::OmegaMinus:
      return !p.z.is_infinite();
    case Domain::FiniteChart:
      return p.finite();
    case Domain::BiDisk:
      return p.finite() && p.z.value().norm() < 1 && p.w.value().norm() < 1;
  }
  return false;
}

MoebiusMap::MoebiusMap(GaussianRational a_, GaussianRational b_, GaussianRational c_,
                       GaussianRational d_, bool flip_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)), flip(flip_) {
  if (det().is_zero()) throw Error("degenerate Moebius map (ad - bc = 0)");
}

MoebiusMap MoebiusMap::flip_map() {
  MoebiusMap t;
  t.flip = true;
  return t;
}

MoebiusMap MoebiusMap::dilation(const GaussianRational& gamma) {
  if (gamma.is_zero()) throw Error("dilation parameter must be nonzero");
  return {gamma, 0, 0, 1};
}

MoebiusMap MoebiusMap::phi(const GaussianRational& z, const GaussianRational& w) {
  if (z * w == GaussianRational(1)) throw Error("phi base point must satisfy zw != 1");
  return {1, z, w, 1};
}

MoebiusMap MoebiusMap::normalized() const {
  for (const GaussianRational* e : {&a, &b, &c, &d}) {
    if (!e->is_zero()) {
      GaussianRational s = e->inverse();
      MoebiusMap t = *this;
      t.a *= s;
      t.b *= s;
      t.c *= s;
      t.d *= s;
      return t;
    }
  }
  throw Error("zero Moebius matrix");
}

ExtPoint2 MoebiusMap::apply(const ExtPoint2& p) const {
  // First slot: psi acts projectively with (a, b; c, d).
  ProjectiveCoord z1(a * p.z.num + b * p.z.den, c * p.z.num + d * p.z.den);
  // Second slot: 1/psi(1/w) acts with (d, c; b, a).
  ProjectiveCoord w1(d * p.w.num + c * p.w.den, b * p.w.num + a * p.w.den);
  if (flip) return {w1.reciprocal(), z1.reciprocal()};
  return {z1, w1};
}

bool operator==(const MoebiusMap& s, const MoebiusMap& t) {
  if (s.flip != t.flip) return false;
  MoebiusMap ns = s.normalized(), nt = t.normalized();
  return ns.a == nt.a && ns.b == nt.b && ns.c == nt.c && ns.d == nt.d;
}

std::string MoebiusMap::str() const {
  std::string s = "[" + a.str() + ", " + b.str() + "; " + c.str() + ", " + d.str() + "]";
  if (flip) s += " * F";
  return s;
}

MoebiusMap compose(const MoebiusMap& s, const MoebiusMap& t) {
  MoebiusMap r(s.a * t.a + s.b * t.c, s.a * t.b + s.b * t.d, s.c * t.a + s.d * t.c,
               s.c * t.b + s.d * t.d, s.flip != t.flip);
  return r;
}

Decomposition decompose_map(const MoebiusMap& t) {
  // rho_gamma ∘ phi_{z,w} has matrix (gamma, gamma z; w, 1), so the matrix
  // part of t must have a != 0 and d != 0; equivalently the base point
  // t(0,0) (or (t∘F)(0,0)) is finite.
  if (t.a.is_zero() || t.d.is_zero()) {
    throw DecompositionOutOfChart("map does not decompose: base point leaves the finite chart");
  }
  Decomposition dec;
  dec.gamma = t.a / t.d;
  dec.z = t.b / t.a;
  dec.w = t.c / t.d;
  dec.flipped = t.flip;
  return dec;
}

GaussianRational invariance_prefactor(const MoebiusMap& t, long m, long n, const ExtPoint2& p) {
  if (!p.finite()) throw SingularPrefactor("prefactor requires a finite base point");
  GaussianRational z = p.z.value(), w = p.w.value();
  GaussianRational top, bottom;
  long e;
  if (!t.flip) {
    top = t.a + t.b * w;
    bottom = t.c * z + t.d;
    e = m - n;
  } else {
    top = t.a * z + t.b;
    bottom = t.d * w + t.c;
    e = n - m;
  }
  if (e == 0) return 1;
  if (top.is_zero() || bottom.is_zero()) {
    throw SingularPrefactor("invariance prefactor singular at " + p.str());
  }
  return (top / bottom).pow(e);
}

}  // namespace pm
