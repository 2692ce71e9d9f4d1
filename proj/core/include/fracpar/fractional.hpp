#pragma once

#include "fracpar/operator.hpp"
#include "fracpar/semigroup.hpp"

namespace fracpar {

enum class QuadratureScheme { log_trapezoid, gauss_jacobi, gauss_laguerre };

// Quadrature request for the singular-weight integrals behind H^s.  `lower`
// and `upper` truncate the transformed variable:
//   - log_trapezoid: the log variable y; for the resolvent integral the node
//     ladder is lambda = e^y, for the semigroup integral r = e^{y}/rho(u)
//     with rho(u) = ||Hu||/||u|| (so the stated truncations are dimensionless
//     and reused across fields).  Dropped mass is restored analytically by
//     geometric tail sums matched to the trapezoid lattice, leaving the
//     doubly-exponential trapezoid error ~ e^{-c/h} plus O(1/sigma) where
//     applicable.
//   - gauss_jacobi: exact on the weight lambda^{s-1} over (0,1] and mu^{-s}
//     over the inverted upper half; remainder decays like R^{-2n} with R the
//     Bernstein-ellipse radius of the resolvent factor, so target_tol is
//     honest for fields whose occupied symbol moduli are >= O(1).
//   - gauss_laguerre: nodes for the weight tau^{s-1} e^{-tau} on (0, inf)
//     (used by the extension profile); truncations unused.
struct QuadratureSpec {
  QuadratureScheme scheme = QuadratureScheme::log_trapezoid;
  int node_count = 200;
  double lower = -30.0;
  double upper = 30.0;
  double target_tol = 1e-6;

  void validate() const;

  // lambda = e^y over y in [-30, 30], 200 nodes, tail-corrected: per-mode
  // relative error ~ 1e-14 across symbol moduli spanning [1e-2, 2e4].
  static QuadratureSpec balakrishnan_default();
  // Two Gauss-Jacobi panels (lambda in (0,1] and its inversion) of 32 nodes.
  static QuadratureSpec balakrishnan_jacobi();
  // r*rho in [1e-3, 12], 39 nodes (spacing ~0.25), tail-corrected; combined
  // with the Yosida substitution the route error is ~ s*|symbol|/sigma.
  static QuadratureSpec semigroup_default();
};

// c_s = 2^{1-2s} Gamma(1-s)/Gamma(s), the extension normalization constant.
double cs_constant(double s);

// ||u||_2 + ||H^s u||_2, the shared graph-norm report for every route.
double graph_norm(const Field& u, const Field& hs_u);

// Exact Fourier route for constant coefficients: multiplies each mode by
// (xi . A xi + i tau)^s in the principal branch (zero symbol maps to zero).
// s in (0, 1]; s = 1 reproduces the operator itself.  Throws
// InvalidArgumentError for non-constant A.
Field hs_fourier(const Field& u, double s, const CoefficientField& A);

// Balakrishnan route sin(s pi)/pi * Int_0^inf lambda^{s-1} (lambda+H)^{-1} Hu
// dlambda, with scheme log_trapezoid (default) or gauss_jacobi.  s in
// [0.01, 0.99].
Field hs_balakrishnan(const ParabolicOperator& op, const Field& u, double s,
                      const QuadratureSpec& quad);

// Semigroup route 1/Gamma(-s) * Int_0^inf r^{-s-1} (S(r) - I) u dr with the
// Yosida chain S_sigma; cfg.sigma = 0 selects
// max(10/r_min, 10*||H||_est, s*rho(u)/(0.4*target_tol)).  The integrand
// norm bound ||(S(r)-I)u|| <= min(r ||Hu||, 2||u||) is asserted at every
// node.  s in [0.01, 0.99].
Field hs_semigroup(const ParabolicOperator& op, const Field& u, double s,
                   YosidaConfig cfg, const QuadratureSpec& quad);

}  // namespace fracpar
