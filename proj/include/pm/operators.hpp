#pragma once

#include <string>
#include <vector>

#include "pm/geometry.hpp"
#include "pm/jet.hpp"
#include "pm/omega.hpp"

namespace pm {

// Independent computation pathways for the invariant derivatives D^{m,n}.
//   definition       jet of f ∘ phi_{z,w} with the base point kept symbolic
//   explicit_sum     the closed double-sum formula in the Wirtinger derivatives
//   recursion        the two-step ladder built from first-order operators
//   laplace          pure operator applied to P_{m,n}(invariant Laplacian)
//   pure_linearised  (1-zw) d_z^{n+1} [(1-zw)^n f] (pure orders only)
enum class DeriveMethod { definition, explicit_sum, recursion, laplace, pure_linearised };

DeriveMethod derive_method_from_string(const std::string& name);
std::string derive_method_name(DeriveMethod m);

// D^{m,n} f as an exact class element; D^{0,0} is the identity.
OmegaFunction pm_derive(const OmegaFunction& f, int m, int n,
                        DeriveMethod method = DeriveMethod::explicit_sum);

// Whole-grid variants (entry (m,n) = D^{m,n} f). When max_total >= 0, entries
// with m+n > max_total are left as zero functions (corpus-suite economy).
Jet2<OmegaFunction> pm_derive_grid_definition(const OmegaFunction& f, int M, int N,
                                              int max_total = -1);
Jet2<OmegaFunction> pm_derive_grid_recursion(const OmegaFunction& f, int M, int N);

// D-tilde: (z/w)^(n-m) D^{n,m} f, a Laurent-monomial multiple.
OmegaFunction pm_tilde(const OmegaFunction& f, int m, int n);

// Ascending-coefficient integer polynomial (the P_{m,n} family).
struct IntPolynomial {
  std::vector<Integer> coeffs;

  long degree() const { return static_cast<long>(coeffs.size()) - 1; }
  bool operator==(const IntPolynomial& o) const { return coeffs == o.coeffs; }
  std::string str() const;

  // Evaluates the polynomial in the operator D^{1,1} applied to f.
  OmegaFunction apply_in_laplacian(const OmegaFunction& f) const;
};

// P_{m,n}; alt_alpha switches the off-diagonal k=0 weight to the alternative
// n!(n-1)! normalization (kept only to demonstrate that it breaks the oracle).
IntPolynomial laplace_poly(int m, int n, bool alt_alpha = false);

// Diagonal P_n rebuilt from the closed-form coefficient b_k (independent of
// the three-term recursion).
IntPolynomial diagonal_poly_via_bk(int n);

// Spanning functions z^j w^k / (1-zw)^n (j <= n, k <= cutoff) of the kernel
// of D_z^{n+1}; slot 'w' mirrors the roles of the exponents.
std::vector<OmegaFunction> kernel_basis(int n, char slot, int cutoff);

// Exact rank computation showing the kernel of D_z^{n+1} (or D_w^{n+1})
// restricted to {z^i w^j/(1-zw)^n : i,j <= cutoff} is no larger than the
// span of the kernel_basis generators inside that grid.
struct KernelRankReport {
  long space_dim = 0;
  long rank = 0;
  long kernel_dim = 0;
  long expected_dim = 0;
  bool complete = false;
};
KernelRankReport kernel_rank_check(int n, char slot, int cutoff);

// Exact rank of a matrix over the Gaussian rationals (rows = vectors).
long exact_rank(std::vector<std::vector<GaussianRational>> rows);

// Covariance check D^{m,n}(f ∘ T)(p) = prefactor · D^{m',n'} f(T(p)), with
// (m',n') = (m,n) for flip-free T and (n,m) for flipped T. Dilations, flip,
// and other class-preserving maps are compared structurally (exact = true);
// general maps are compared numerically through the jets pathway.
struct InvarianceReport {
  bool exact = false;
  bool pass = false;
  double max_rel_dev = 0.0;
};
InvarianceReport check_invariance(const OmegaFunction& f, const MoebiusMap& t, int m, int n,
                                  const std::vector<ExtPoint2>& points, double tol);

}  // namespace pm
