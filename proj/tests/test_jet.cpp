#include <complex>

#include "doctest.h"
#include "pm/jet.hpp"
#include "pm/parse.hpp"

using namespace pm;

TEST_CASE("providers return Wirtinger Taylor coefficients") {
  // Providers expose plain Taylor grids: entry (p,q) is the (p,q) partial
  // over p! q!. For 1/(1-zw) at (1/2, 1/4) the value is 8/7 and the (1,1)
  // entry is (1+zw)/(1-zw)^3 = 576/343.
  JetProvider p = make_provider(parse_expression("1/(1-z*w)"));
  CJet j = p.jets({0.5, 0.0}, {0.25, 0.0}, 2, 2);
  CHECK(std::abs(j.at(0, 0) - std::complex<double>(8.0 / 7.0)) < 1e-14);
  CHECK(std::abs(j.at(1, 1) - std::complex<double>(576.0 / 343.0)) < 1e-14);

  JetProvider q = make_provider(parse_expression("z^2"));
  CJet jq = q.jets({0.5, 0.0}, {0.25, 0.0}, 2, 0);
  CHECK(std::abs(jq.at(2, 0) - std::complex<double>(1.0)) < 1e-14);
}

TEST_CASE("chart composition jets carry the invariant derivatives") {
  // Entry (m,n) of the chart jet times m! n! is the invariant derivative;
  // for 1/(1-zw) at (1/2, 1/4) the (1,1) entry is (1+zw)/(1-zw) = 9/7.
  GaussianRational z0(Rational(1, 2)), w0(Rational(1, 4));
  QJet j = compose_with_phi(parse_expression("1/(1-z*w)"), z0, w0, 2, 2);
  CHECK(j.at(0, 0) == GaussianRational(Rational(8, 7)));
  CHECK(j.at(1, 1) == GaussianRational(Rational(9, 7)));

  // D^{2,0}(z^2) = 2(1-zw)(1-3zw) gives (7/8)(5/4)/2! = 35/64 at the same
  // point.
  QJet jq = compose_with_phi(parse_expression("z^2"), z0, w0, 2, 0);
  CHECK(jq.at(2, 0) == GaussianRational(Rational(35, 64)));
}

TEST_CASE("pullback providers match symbolic pullbacks") {
  OmegaFunction f = parse_expression("z^2 + w/(1-z*w)");
  MoebiusMap t = MoebiusMap::dilation(GaussianRational(Rational(3, 2)));
  JetProvider direct = make_provider(f.pullback_dilation(GaussianRational(Rational(3, 2))));
  JetProvider routed = pullback_provider(make_provider(f), t);
  CJet a = direct.jets({0.5, 0.0}, {0.25, 0.0}, 3, 3);
  CJet b = routed.jets({0.5, 0.0}, {0.25, 0.0}, 3, 3);
  for (int i = 0; i <= 3; ++i)
    for (int j = 0; j <= 3; ++j) CHECK(std::abs(a.at(i, j) - b.at(i, j)) < 1e-12);
}

TEST_CASE("jet grids are rectangular") {
  Jet2<std::complex<double>> g(2, 3);
  g.at(2, 3) = {1.0, 0.0};
  CHECK(g.at(2, 3) == std::complex<double>(1.0, 0.0));
  CHECK(g.at(0, 0) == std::complex<double>(0.0, 0.0));
}
