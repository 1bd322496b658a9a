#pragma once

#include <complex>
#include <vector>

#include "pm/geometry.hpp"
#include "pm/jet.hpp"
#include "pm/omega.hpp"

#include "json.hpp"

namespace pm {

// Stirling numbers of the second kind. Boundary conventions chosen so the
// asymptotic-expansion inner sum can be written from k = 0 if desired:
// {-1,-1} = 1 and {m,-1} = 0 for m >= 0.
Integer stirling2(long n, long k);

// x (x-1) ... (x-n+1); exact for exact scalars.
template <class R>
R falling_factorial(R x, long n) {
  R acc = RingTraits<R>::from_coeff(1);
  R one = RingTraits<R>::from_coeff(1);
  for (long i = 0; i < n; ++i) {
    acc = acc * x;
    x = x - one;
  }
  return acc;
}

// Growth constant of the factorial-series denominators:
// alpha = 1/c with c = inf_{j>=0} |1/hbar + j|/(j+1), which guarantees
// |(-1/hbar)_{n, falling}| >= n!/alpha^n for every n.
double alpha_for(std::complex<double> hbar);

// B_n(f, g) = D_z^n f * D_w^n g, exactly.
OmegaFunction bidiff(const OmegaFunction& f, const OmegaFunction& g, int n);

enum class TailMode { certified_geometric, successive_term };

struct StarParams {
  // Exact deformation parameter (doubles convert exactly; rationals stay
  // rational, so series terms at rational points are exact class values).
  GaussianRational hbar{Rational(1, 10), Rational(0)};
  int max_terms = 200;
  double abs_tol = 1e-12;
  double radius = 0.0;  // Cauchy circle radius; 0 selects max(sqrt(2 alpha), 1)
  TailMode mode = TailMode::certified_geometric;
};

struct StarResult {
  GaussianRational value_exact;
  bool exact = false;
  std::complex<double> value{0.0, 0.0};
  double tail_bound = 0.0;
  int terms_used = 0;
  bool budget_exhausted = false;
  TailMode mode = TailMode::certified_geometric;
  // Trace of the summed terms and (certified mode) the tail bound in force
  // after each term; used by the remainder-domination checks.
  std::vector<std::complex<double>> term_values;
  std::vector<double> tail_after;
  double norm_left = 0.0;   // sampled sup of the D_z-operand over its circle
  double norm_right = 0.0;  // sampled sup of the D_w-operand over its circle

  nlohmann::ordered_json to_json() const;
};

// n-th series coefficient (-1)^n / (n! (-1/hbar)_{n, falling}), exactly.
GaussianRational star_coefficient(const GaussianRational& hbar, int n);

// Exact n-th term of f * g as a class element: coefficient times B_n(g, f).
OmegaFunction star_term_function(const OmegaFunction& f, const OmegaFunction& g, int n,
                                 const GaussianRational& hbar);

// Exact partial sum of f * g through term N.
OmegaFunction star_partial_sum(const OmegaFunction& f, const OmegaFunction& g, int N,
                               const GaussianRational& hbar);

// f * g at p: partial sums of sum_n coeff_n B_n(g, f)(p) with the stopping
// rule of params.mode. Values are exact Gaussian rationals (points and hbar
// are exact); tail bounds are floating point.
StarResult star_eval(const OmegaFunction& f, const OmegaFunction& g, const ExtPoint2& p,
                     const StarParams& params);

// Sampled sup of |f| over the Cauchy compactum through p: slot 'z' moves the
// first coordinate along {(z+u)/(1+uw) : |u| = R}, slot 'w' mirrors. Dense
// circle sampling (256 points) plus one local refinement pass (64 points).
double supnorm_circle(const OmegaFunction& f, std::complex<double> z0, std::complex<double> w0,
                      char slot, double R, int samples = 256);

// Series evaluation for opaque jet providers; enforces the domain pairings
// (Omega,Omega), (BiDisk,OmegaPlus), (OmegaMinus,BiDisk), (Omega,OmegaPlus),
// (OmegaMinus,Omega) and always runs in successive_term mode (no certified
// bound is available for opaque operands).
StarResult star_eval_jets(const JetProvider& fp, const JetProvider& gp, const ExtPoint2& p,
                          const StarParams& params);

// Asymptotic expansion coefficients a_0 .. a_N of f * g in powers of hbar.
std::vector<OmegaFunction> asym_coeffs(const OmegaFunction& f, const OmegaFunction& g, int N);

// {f, g} = B_1(f, g) - B_1(g, f) = (1-zw)^2 (f_z g_w - f_w g_z).
OmegaFunction poisson_bracket(const OmegaFunction& f, const OmegaFunction& g);

// Invariance of the star product under T. Flip-free maps satisfy
// (f∘T) * (g∘T) = (f*g)∘T; flipped maps reverse the operand order,
// (f∘T) * (g∘T) = (g*f)∘T, which the change-of-coordinates formula for the
// pure operators forces (the same reversal shows up in B_n under flip).
struct StarInvarianceReport {
  bool exact = false;
  bool pass = false;
  int terms_checked = 0;
  double deviation = 0.0;
  double allowed = 0.0;
};
StarInvarianceReport check_star_invariance(const OmegaFunction& f, const OmegaFunction& g,
                                           const MoebiusMap& t,
                                           const std::vector<ExtPoint2>& points,
                                           const StarParams& params, int exact_terms = 12);

// Associativity certificate: exact truncations of (f*g)*h and f*(g*h) at p
// (inner partial sums through N1 as class elements, outer through N2) with a
// rigorously propagated bound on the difference from the two true values.
struct AssocReport {
  std::complex<double> lhs{0.0, 0.0}, rhs{0.0, 0.0};
  double deviation = 0.0;
  double allowed = 0.0;
  bool pass = false;
};
AssocReport assoc_check(const OmegaFunction& f, const OmegaFunction& g, const OmegaFunction& h,
                        const ExtPoint2& p, const StarParams& params, int N1 = 24, int N2 = 24);

}  // namespace pm
