#include <complex>

#include "doctest.h"
#include "pm/errors.hpp"
#include "pm/operators.hpp"
#include "pm/parse.hpp"
#include "pm/restrict.hpp"

using namespace pm;

namespace {
const SmoothPolyFunction kZ = SmoothPolyFunction::zvar();
const SmoothPolyFunction kZb = SmoothPolyFunction::zbar();
SmoothPolyFunction c(long v) { return SmoothPolyFunction::constant(GaussianRational(v)); }
}  // namespace

TEST_CASE("smooth polynomial algebra") {
  SmoothPolyFunction f = kZ * kZ + c(2) * kZb;
  CHECK(f.term_count() == 2);
  CHECK(f.conj() == kZb * kZb + c(2) * kZ);
  CHECK(f.d() == c(2) * kZ);
  CHECK(f.dbar() == c(2));
  CHECK(f.evaluate(GaussianRational(Rational(1, 2))) == GaussianRational(Rational(5, 4)));
  CHECK(SmoothPolyFunction::one_minus_sq(Target::disk) == c(1) - kZ * kZb);
  CHECK(SmoothPolyFunction::one_minus_sq(Target::sphere) == c(1) + kZ * kZb);
  CHECK(SmoothPolyFunction::one_minus_sq(Target::disk, 2).factor_power(Target::disk) == 2);
}

TEST_CASE("diagonal restriction and lift") {
  OmegaFunction F = parse_expression("z^2*w");
  CHECK(diagonal_restrict(F, Target::disk) == kZ * kZ * kZb);
  CHECK(diagonal_restrict(F, Target::sphere) == GaussianRational(-1) * (kZ * kZ * kZb));
  SmoothPolyFunction g = kZ * kZb + kZ;
  CHECK(diagonal_restrict(g.lift(Target::disk), Target::disk) == g);
  CHECK(diagonal_restrict(g.lift(Target::sphere), Target::sphere) == g);
  CHECK_THROWS_AS(diagonal_restrict(parse_expression("1/(1-z*w)"), Target::disk),
                  NonPolynomialRestriction);
}

TEST_CASE("classical derivatives: closed forms") {
  SmoothPolyFunction z2 = kZ * kZ;
  // Second derivative of z^2: 2(1-|z|^2)(1-3|z|^2) on the disk and
  // 2(1+|z|^2)(1+3|z|^2) on the sphere.
  CHECK(classical_derive(z2, 2, false, Target::disk) ==
        c(2) * SmoothPolyFunction::one_minus_sq(Target::disk) * (c(1) - c(3) * kZ * kZb));
  CHECK(classical_derive(z2, 2, false, Target::sphere) ==
        c(2) * SmoothPolyFunction::one_minus_sq(Target::sphere) * (c(1) + c(3) * kZ * kZb));
  // Conjugated first derivative of conj z.
  CHECK(classical_derive(kZb, 1, true, Target::disk) ==
        SmoothPolyFunction::one_minus_sq(Target::disk));
  // Linearised disk operator iterate.
  CHECK(hat_d_iterate(kZ, 2) ==
        GaussianRational(-2) * (kZb * SmoothPolyFunction::one_minus_sq(Target::disk, 3)));
}

TEST_CASE("commuting square with the two-variable operators") {
  OmegaFunction F = parse_expression("z^3 + z*w^2");
  for (Target t : {Target::disk, Target::sphere}) {
    SmoothPolyFunction fr = diagonal_restrict(F, t);
    for (int n = 1; n <= 3; ++n) {
      CHECK(diagonal_restrict(pm_derive(F, n, 0), t) == classical_derive(fr, n, false, t));
      GaussianRational sign = (t == Target::sphere && n % 2 == 1) ? GaussianRational(-1)
                                                                  : GaussianRational(1);
      CHECK(diagonal_restrict(pm_derive(F, 0, n), t) ==
            sign * classical_derive(fr, n, true, t));
    }
  }
}

TEST_CASE("diagonal star products") {
  OmegaFunction phi = parse_expression("z*w");
  OmegaFunction eta = parse_expression("z+w");
  DiagonalPoint half{GaussianRational(Rational(1, 2)), Target::disk};
  StarResult disk = star_disk(phi, eta, half, StarParams{});
  StarResult direct = star_eval(phi, eta, half.embed(), StarParams{});
  CHECK(disk.exact);
  CHECK(disk.value_exact == direct.value_exact);
  CHECK(disk.terms_used == direct.terms_used);
  CHECK(std::abs(disk.value - std::complex<double>(0.27949006631107243)) < 1e-12);

  DiagonalPoint quarter{GaussianRational(Rational(1, 4)), Target::disk};
  DiagonalPoint quarter_s{GaussianRational(Rational(1, 4)), Target::sphere};
  StarResult d4 = star_disk(phi, eta, quarter, StarParams{});
  StarResult s4 = star_sphere(phi, eta, quarter_s, StarParams{});
  CHECK(std::abs(d4.value - std::complex<double>(0.05347632366507768)) < 1e-12);
  CHECK(std::abs(s4.value - std::complex<double>(0.027906861103132737)) < 1e-12);
  CHECK(d4.value_exact != s4.value_exact);

  DiagonalPoint outside{GaussianRational(2), Target::disk};
  CHECK_THROWS_AS(outside.embed(), DomainPairingViolation);
  // The sphere model has no modulus restriction.
  DiagonalPoint big{GaussianRational(2), Target::sphere};
  CHECK(big.embed() == ExtPoint2(GaussianRational(2), GaussianRational(-2)));
}
