#pragma once

#include <random>
#include <string>
#include <vector>

#include "pm/geometry.hpp"
#include "pm/omega.hpp"
#include "pm/restrict.hpp"

#include "json.hpp"

namespace pm {

// Deterministic corpus generator: identical seeds produce identical corpora
// on every platform (all draws go through the 64-bit engine with modulo
// reduction; no distribution objects).
class CorpusGen {
 public:
  explicit CorpusGen(unsigned long long seed) : rng_(seed) {}

  long uniform(long lo, long hi);  // inclusive bounds
  Rational small_rational(bool nonzero = false);
  GaussianRational coefficient();

  // Random class element: up to max_terms monomials with |exponents| <=
  // max_exp and denominator power <= max_k. Never the zero function.
  OmegaFunction omega_function(int max_terms = 6, long max_exp = 3, long max_k = 2);
  // Polynomial variant (k = 0, exponents >= 0).
  OmegaFunction polynomial(int max_terms = 4, long max_exp = 3);
  // Polynomial depending on both variables (nonzero mixed derivatives).
  OmegaFunction polynomial_mixed(int max_terms = 4, long max_exp = 3);
  // Random combination of the spanning family f_{p,q}: holomorphic on all
  // of Omega including the points at infinity, so certified Cauchy bounds
  // hold at every admissible radius.
  OmegaFunction hol_function(int max_terms = 3, long max_pq = 2);
  // Random z/zbar polynomial for the one-variable checks.
  SmoothPolyFunction smooth_poly(int max_terms = 4, long max_exp = 3);

  // Finite rational point with nonzero slots, |z|,|w| <= 2/3, zw != 1.
  ExtPoint2 rational_point(bool allow_complex = true);
  // Random nonzero dilation parameter.
  GaussianRational dilation_factor();
  // Random base-point map phi_{alpha,beta}.
  MoebiusMap random_phi();

 private:
  std::mt19937_64 rng_;
};

struct PropertyResult {
  std::string name;
  long instances = 0;
  double max_deviation = 0.0;
  bool pass = true;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  unsigned long long seed = 0;
  std::vector<PropertyResult> properties;

  bool pass() const;
  std::string text() const;
  nlohmann::ordered_json to_json() const;
};

// Named property suites behind `verify`; throws UnknownSuite for other
// names. Suites: identities, invariance, kernels, positivity, star,
// asymptotics, restriction.
SuiteReport run_suite(const std::string& name, unsigned long long seed);

std::vector<std::string> suite_names();

}  // namespace pm
