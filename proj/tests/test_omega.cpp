#include "doctest.h"
#include "pm/errors.hpp"
#include "pm/omega.hpp"
#include "pm/parse.hpp"

using namespace pm;

namespace {
ExtPoint2 pt(Rational z, Rational w) { return {GaussianRational(z), GaussianRational(w)}; }
}  // namespace

TEST_CASE("parser grammar") {
  CHECK(parse_expression("z^2") == OmegaFunction::z() * OmegaFunction::z());
  CHECK(parse_expression("1/(1-z*w)") == OmegaFunction::one_minus_zw(-1));
  CHECK(parse_expression("1/(1-z*w)").k() == 1);
  CHECK(parse_expression("z + i*w") ==
        OmegaFunction::z() + OmegaFunction::monomial(0, 1, GaussianRational::i()));
  CHECK(parse_expression("(z+w)^2") ==
        parse_expression("z^2") + parse_expression("2*z*w") + parse_expression("w^2"));
  CHECK(parse_expression("z^-2") == OmegaFunction::monomial(-2, 0));
  CHECK(parse_expression("-z*w") == OmegaFunction::monomial(1, 1, GaussianRational(-1)));
  CHECK(parse_expression("3/4") == OmegaFunction::constant(GaussianRational(Rational(3, 4))));
  CHECK(parse_expression("0.5*z") == OmegaFunction::monomial(1, 0, GaussianRational(Rational(1, 2))));
  CHECK_THROWS_AS(parse_expression("z^^2"), SyntaxError);
  CHECK_THROWS_AS(parse_expression("(z"), SyntaxError);
  CHECK_THROWS_AS(parse_expression("z/(1+z)"), UnrepresentableDenominator);
}

TEST_CASE("string forms re-parse") {
  for (const char* s : {"z^2", "1/(1-z*w)", "2*z*(1-z*w)", "z*w^-1*(1-z*w)", "(1-z*w)^2",
                        "z^-2*w^3", "z + i*w"}) {
    OmegaFunction f = parse_expression(s);
    CHECK(parse_expression(f.str()) == f);
  }
}

TEST_CASE("pullbacks") {
  OmegaFunction k1 = parse_expression("1/(1-z*w)");
  CHECK(k1.pullback_flip() == parse_expression("-z*w/(1-z*w)"));
  CHECK(k1.pullback_flip().pullback_flip() == k1);
  CHECK(parse_expression("z^2*w").pullback_swap() == parse_expression("z*w^2"));
  CHECK(parse_expression("z").pullback_dilation(GaussianRational(3)) == parse_expression("3*z"));
  CHECK(parse_expression("w").pullback_dilation(GaussianRational(3)) ==
        parse_expression("1/3*w"));
  // Dilations fix the hypersurface factor.
  CHECK(k1.pullback_dilation(GaussianRational(5)) == k1);
}

TEST_CASE("evaluation, poles, and infinity") {
  OmegaFunction k1 = parse_expression("1/(1-z*w)");
  CHECK(k1.evaluate(pt(Rational(1, 2), Rational(1, 3))) == GaussianRational(Rational(6, 5)));

  // f_{1,0} = z/(1-zw) has the finite limit -1/w at z = inf.
  ExtPoint2 inf_2{ProjectiveCoord::infinity(), ProjectiveCoord::finite(GaussianRational(2))};
  CHECK(OmegaFunction::basis_fpq(1, 0).evaluate(inf_2) ==
        GaussianRational(Rational(-1, 2)));

  CHECK_THROWS_AS(parse_expression("z^-1").evaluate(pt(Rational(0), Rational(1, 2))),
                  PoleAtPoint);
  CHECK_THROWS_AS(parse_expression("z*w^-1").evaluate(inf_2), NoFiniteLimit);

  std::complex<double> v = parse_expression("z^2+w").evaluate({0.5, 0.0}, {0.25, 0.0});
  CHECK(std::abs(v - std::complex<double>(0.5)) < 1e-15);
}

TEST_CASE("algebra in the class") {
  OmegaFunction f = OmegaFunction::basis_fpq(2, 1);
  CHECK(f == parse_expression("z^2*w/(1-z*w)^2"));
  CHECK(f.homogeneity_degree().has_value());
  CHECK(f.homogeneity_degree().value() == 1);
  CHECK_FALSE(parse_expression("z+w").homogeneity_degree().has_value());
  CHECK(parse_expression("z*w").is_polynomial());
  CHECK_FALSE(f.is_polynomial());
  CHECK(OmegaFunction::one_minus_zw(2) * OmegaFunction::one_minus_zw(-2) ==
        OmegaFunction::one());
  CHECK(parse_expression("z^2").reciprocal() == parse_expression("z^-2"));
  CHECK_THROWS_AS(parse_expression("z+w").reciprocal(), UnrepresentableDenominator);
  CHECK(parse_expression("z").dz() == OmegaFunction::one());
  CHECK(parse_expression("1/(1-z*w)").dw() == parse_expression("z/(1-z*w)^2"));
}

TEST_CASE("json round trip and schema") {
  OmegaFunction f = parse_expression("(1/2)*z^2*w^-1/(1-z*w) + i*z");
  nlohmann::ordered_json j = f.to_json();
  REQUIRE(j.contains("numerator"));
  REQUIRE(j.contains("k"));
  for (const auto& term : j["numerator"]) {
    REQUIRE(term.is_array());
    REQUIRE(term.size() == 4);
    CHECK(term[0].is_number_integer());
    CHECK(term[1].is_number_integer());
    CHECK(term[2].is_string());
    CHECK(term[3].is_string());
  }
  CHECK(OmegaFunction::from_json(j) == f);
}
