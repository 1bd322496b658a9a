#include "doctest.h"
#include "pm/errors.hpp"
#include "pm/geometry.hpp"

using namespace pm;

namespace {
ExtPoint2 pt(Rational z, Rational w) { return {GaussianRational(z), GaussianRational(w)}; }
}  // namespace

TEST_CASE("projective coordinates") {
  CHECK(ProjectiveCoord(GaussianRational(1), GaussianRational(2)) ==
        ProjectiveCoord(GaussianRational(2), GaussianRational(4)));
  CHECK(ProjectiveCoord::infinity().is_infinite());
  CHECK(ProjectiveCoord::finite(GaussianRational(Rational(1, 2))).value() ==
        GaussianRational(Rational(1, 2)));
  CHECK_THROWS_AS(ProjectiveCoord::infinity().value(), Error);
  CHECK(ProjectiveCoord::finite(GaussianRational(2)).reciprocal() ==
        ProjectiveCoord::finite(GaussianRational(Rational(1, 2))));
  CHECK(ProjectiveCoord::infinity().reciprocal().is_zero());
}

TEST_CASE("domain membership with the extended 0*inf = 1 rule") {
  CHECK(in_domain(pt(Rational(1, 2), Rational(1, 3)), Domain::Omega));
  CHECK_FALSE(in_domain(pt(Rational(1, 2), Rational(2)), Domain::Omega));  // zw = 1
  // 0 * inf counts as 1: excluded.
  ExtPoint2 zero_inf{ProjectiveCoord::finite(GaussianRational(0)), ProjectiveCoord::infinity()};
  CHECK_FALSE(in_domain(zero_inf, Domain::Omega));
  // inf * inf is inf, not 1: inside.
  ExtPoint2 both_inf{ProjectiveCoord::infinity(), ProjectiveCoord::infinity()};
  CHECK(in_domain(both_inf, Domain::Omega));
  CHECK_FALSE(in_domain(both_inf, Domain::OmegaPlus));
  CHECK_FALSE(in_domain(both_inf, Domain::FiniteChart));

  ExtPoint2 inf_w{ProjectiveCoord::infinity(), ProjectiveCoord::finite(GaussianRational(2))};
  CHECK(in_domain(inf_w, Domain::OmegaPlus));
  CHECK_FALSE(in_domain(inf_w, Domain::OmegaMinus));

  CHECK(in_domain(pt(Rational(1, 3), Rational(1, 2)), Domain::BiDisk));
  CHECK_FALSE(in_domain(pt(Rational(1, 3), Rational(2)), Domain::BiDisk));
}

TEST_CASE("moebius maps: apply, compose, normalize") {
  MoebiusMap flip = MoebiusMap::flip_map();
  ExtPoint2 p = pt(Rational(1, 2), Rational(1, 3));
  ExtPoint2 fp = flip.apply(p);
  CHECK(fp.z == ProjectiveCoord::finite(GaussianRational(3)));
  CHECK(fp.w == ProjectiveCoord::finite(GaussianRational(2)));
  CHECK(flip.apply(fp) == p);  // involution

  MoebiusMap rho = MoebiusMap::dilation(GaussianRational(2));
  ExtPoint2 dp = rho.apply(p);
  CHECK(dp.z == ProjectiveCoord::finite(GaussianRational(1)));
  CHECK(dp.w == ProjectiveCoord::finite(GaussianRational(Rational(1, 6))));

  // Equality ignores projective scale.
  MoebiusMap rho3(GaussianRational(6), GaussianRational(0), GaussianRational(0),
                  GaussianRational(3), false);
  CHECK(rho3 == MoebiusMap::dilation(GaussianRational(2)));
  CHECK(compose(flip, flip) == MoebiusMap::identity());
  CHECK_THROWS_AS(MoebiusMap(GaussianRational(1), GaussianRational(1), GaussianRational(1),
                             GaussianRational(1), false),
                  Error);
}

TEST_CASE("decomposition round trip") {
  MoebiusMap t = compose(MoebiusMap::dilation(GaussianRational(2)),
                         MoebiusMap::phi(GaussianRational(Rational(1, 2)),
                                         GaussianRational(Rational(1, 3))));
  Decomposition d = decompose_map(t);
  CHECK(d.gamma == GaussianRational(2));
  CHECK(d.z == GaussianRational(Rational(1, 2)));
  CHECK(d.w == GaussianRational(Rational(1, 3)));
  CHECK_FALSE(d.flipped);

  MoebiusMap tf = compose(t, MoebiusMap::flip_map());
  Decomposition df = decompose_map(tf);
  CHECK(df.flipped);
  MoebiusMap back = compose(compose(MoebiusMap::dilation(df.gamma), MoebiusMap::phi(df.z, df.w)),
                            MoebiusMap::flip_map());
  CHECK(back == tf);
}
