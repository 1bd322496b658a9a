#include <complex>
#include <vector>

#include "doctest.h"
#include "pm/errors.hpp"
#include "pm/parse.hpp"
#include "pm/star.hpp"

using namespace pm;

namespace {
ExtPoint2 pt(Rational z, Rational w) { return {GaussianRational(z), GaussianRational(w)}; }
const GaussianRational kTenth{Rational(1, 10)};
}  // namespace

TEST_CASE("combinatorial helpers") {
  CHECK(stirling2(3, 2) == 3);
  CHECK(stirling2(4, 2) == 7);
  CHECK(stirling2(0, 0) == 1);
  CHECK(stirling2(3, 0) == 0);
  CHECK(falling_factorial(GaussianRational(5), 3) == GaussianRational(60));
  CHECK(falling_factorial(GaussianRational(-10), 2) == GaussianRational(110));
}

TEST_CASE("deformation domain and growth constant") {
  CHECK(alpha_for({1.0, 0.0}) == doctest::Approx(1.0));
  CHECK(alpha_for({0.0, 1.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(alpha_for({-0.4, 0.0}) == doctest::Approx(8.0));
  StarParams bad;
  bad.hbar = GaussianRational(Rational(-1, 2));
  CHECK_THROWS_AS(star_eval(parse_expression("w"), parse_expression("z"),
                            pt(Rational(1, 2), Rational(1, 3)), bad),
                  OutsideDeformationDomain);
}

TEST_CASE("series coefficients") {
  CHECK(star_coefficient(kTenth, 0) == GaussianRational(1));
  CHECK(star_coefficient(kTenth, 1) == GaussianRational(Rational(1, 10)));
  CHECK(star_coefficient(kTenth, 2) == GaussianRational(Rational(1, 220)));
  CHECK(star_coefficient(kTenth, 3) == GaussianRational(Rational(1, 7920)));
}

TEST_CASE("bidifferential operators") {
  CHECK(bidiff(parse_expression("z"), parse_expression("w"), 1) ==
        OmegaFunction::one_minus_zw(2));
  CHECK(bidiff(parse_expression("w"), parse_expression("z"), 1).is_zero());
  CHECK(bidiff(parse_expression("z"), parse_expression("w"), 2) ==
        parse_expression("4*z*w*(1-z*w)^2"));
}

TEST_CASE("unit and multiplier identities") {
  OmegaFunction g = parse_expression("z^2*w + w/(1-z*w)");
  CHECK(star_partial_sum(OmegaFunction::one(), g, 4, kTenth) == g);
  CHECK(star_partial_sum(g, OmegaFunction::one(), 4, kTenth) == g);
  CHECK(star_partial_sum(OmegaFunction::z(), g, 6, kTenth) == OmegaFunction::z() * g);
  CHECK(star_partial_sum(g, OmegaFunction::w(), 6, kTenth) == g * OmegaFunction::w());
}

TEST_CASE("reference value at the base point") {
  StarResult r = star_eval(parse_expression("w"), parse_expression("z"),
                           pt(Rational(1, 2), Rational(1, 3)), StarParams{});
  CHECK(r.exact);
  CHECK_FALSE(r.budget_exhausted);
  CHECK(std::abs(r.value - std::complex<double>(0.23830795403367497)) < 1e-9);
  CHECK(r.tail_bound < 1e-10);
  CHECK(std::abs(r.value_exact.to_complex() - r.value) < 1e-15);
}

TEST_CASE("semiclassical data") {
  std::vector<OmegaFunction> a = asym_coeffs(parse_expression("w"), parse_expression("z"), 2);
  REQUIRE(a.size() == 3);
  CHECK(a[0] == parse_expression("z*w"));
  CHECK(a[1] == OmegaFunction::one_minus_zw(2));
  CHECK(a[2] == parse_expression("2*z*w*(1-z*w)^2"));

  CHECK(poisson_bracket(parse_expression("z"), parse_expression("w")) ==
        OmegaFunction::one_minus_zw(2));
  CHECK(poisson_bracket(parse_expression("w"), parse_expression("z")) ==
        GaussianRational(-1) * OmegaFunction::one_minus_zw(2));
  CHECK(poisson_bracket(parse_expression("z*w"), parse_expression("z*w")).is_zero());
}

TEST_CASE("certified bounds demand admissible circles") {
  // w^2 grows superlinearly in the w slot, so at |z| = 2 every usable Cauchy
  // circle would cross the pulled-back pole and no geometric tail exists.
  StarParams certified;
  CHECK_THROWS_AS(star_eval(parse_expression("w^2"), parse_expression("z"),
                            pt(Rational(2), Rational(1, 4)), certified),
                  MethodNotApplicable);
  StarParams successive;
  successive.mode = TailMode::successive_term;
  StarResult r = star_eval(parse_expression("w^2"), parse_expression("z"),
                           pt(Rational(2), Rational(1, 4)), successive);
  CHECK(r.mode == TailMode::successive_term);
  CHECK_FALSE(r.budget_exhausted);
}

TEST_CASE("supnorm samples the chart circle") {
  double s = supnorm_circle(parse_expression("z"), {0.5, 0.0}, {1.0 / 3.0, 0.0}, 'z', 0.5);
  CHECK(s == doctest::Approx(6.0 / 7.0).epsilon(2e-3));
}

TEST_CASE("jets pathway matches the symbolic engine") {
  OmegaFunction f = OmegaFunction::basis_fpq(1, 1);
  OmegaFunction g = OmegaFunction::basis_fpq(1, 0) + OmegaFunction::basis_fpq(0, 2);
  ExtPoint2 p = pt(Rational(1, 2), Rational(1, 3));
  StarResult sym = star_eval(f, g, p, StarParams{});
  StarResult jet = star_eval_jets(make_provider(f), make_provider(g), p, StarParams{});
  CHECK(std::abs(sym.value - jet.value) < 1e-10);
}

TEST_CASE("domain pairings are enforced") {
  OmegaFunction f = OmegaFunction::basis_fpq(0, 1);
  CHECK_THROWS_AS(star_eval_jets(make_provider(f, Domain::OmegaPlus),
                                 make_provider(f, Domain::OmegaPlus),
                                 pt(Rational(1, 4), Rational(1, 4)), StarParams{}),
                  DomainPairingViolation);
  // A valid pairing still refuses points outside the declared domains.
  CHECK_THROWS_AS(star_eval_jets(make_provider(parse_expression("z*w"), Domain::BiDisk),
                                 make_provider(f, Domain::OmegaPlus),
                                 pt(Rational(1, 2), Rational(2)), StarParams{}),
                  DomainPairingViolation);
}

TEST_CASE("associativity certificate on the holomorphic class") {
  OmegaFunction f = OmegaFunction::basis_fpq(1, 0);
  OmegaFunction g = OmegaFunction::basis_fpq(0, 1);
  OmegaFunction h = OmegaFunction::basis_fpq(1, 1);
  AssocReport rep = assoc_check(f, g, h, pt(Rational(1, 2), Rational(1, 3)), StarParams{});
  CHECK(rep.pass);
  CHECK(rep.deviation <= rep.allowed);
  // Polynomially growing triples admit no nested Cauchy certificate.
  CHECK_THROWS_AS(assoc_check(parse_expression("z+w"), parse_expression("z*w"),
                              parse_expression("w^2"), pt(Rational(1, 2), Rational(1, 3)),
                              StarParams{}),
                  MethodNotApplicable);
}

TEST_CASE("star invariance reports") {
  OmegaFunction f = OmegaFunction::basis_fpq(1, 0);
  OmegaFunction g = OmegaFunction::basis_fpq(1, 1);
  std::vector<ExtPoint2> pts = {pt(Rational(1, 2), Rational(1, 3))};
  StarInvarianceReport dil = check_star_invariance(
      f, g, MoebiusMap::dilation(GaussianRational(Rational(3, 2))), pts, StarParams{}, 12);
  CHECK(dil.exact);
  CHECK(dil.pass);
  CHECK(dil.terms_checked == 13);
  StarInvarianceReport flip =
      check_star_invariance(f, g, MoebiusMap::flip_map(), pts, StarParams{}, 8);
  CHECK(flip.exact);
  CHECK(flip.pass);
}
