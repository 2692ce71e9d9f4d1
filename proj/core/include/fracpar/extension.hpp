#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracpar/fractional.hpp"
#include "fracpar/operator.hpp"
#include "fracpar/semigroup.hpp"

namespace fracpar {

// The extension function U(lambda)u sampled on a ladder of heights: the
// bounded solution of the degenerate problem (lambda^{1-2s} U')' =
// lambda^{1-2s} H U with U(0) = u.
struct ExtensionProfile {
  double s = 0.5;
  std::vector<double> lambdas;  // strictly increasing, positive
  std::vector<Field> slices;    // one per lambda
  Field source;                 // the boundary datum u
};

// Even reflection onto +-lambdas (no lambda = 0 node; the weight
// |lambda|^{1-2s} keeps every integral finite without one).
struct TwoSidedProfile {
  double s = 0.5;
  std::vector<double> lambdas;  // -L..-l, l..L
  std::vector<Field> slices;
};

// Block coefficients of the augmented (n+1)-dimensional problem: B has a unit
// lambda-lambda entry and the base matrix A in the spatial block, and the
// whole equation carries the Muckenhoupt weight w(lambda) = |lambda|^{1-2s}.
struct AugmentedCoefficients {
  CoefficientField base;
  double s = 0.5;
  double kappa = 1.0;  // ellipticity constant max(1/c1, c2, 1)

  double weight(double lambda) const;
  // Samples the block quadratic form at every point with random directions;
  // true when Re<Bv, v> >= |v|^2/kappa and |Bv| <= kappa|v| throughout.
  bool check_ellipticity(int random_samples, std::uint64_t seed) const;

  static AugmentedCoefficients make(const CoefficientField& A, double s);
};

// Separable test function b(lambda) * shape(x, t) used by weak_residual;
// lambda_factor holds b at the two-sided profile's nodes and must vanish at
// (and near) the first and last node.
struct LambdaTestFunction {
  std::vector<double> lambda_factor;
  Field shape;
};

struct WeakResidualReport {
  double reinforced = 0.0;   // max normalized residual, half-derivative form
  double traditional = 0.0;  // max normalized residual, -U conj(dt Phi) form
};

// Default ladder: geometric from 1e-3 with ratio sqrt(2), capped by and
// including lambda_max.
std::vector<double> default_lambda_ladder(double lambda_max);

// Gauss-Laguerre defaults for the profile integral (weight tau^{s-1} e^{-tau},
// 32 nodes).
QuadratureSpec extension_quadrature_default();
// Mollified difference-quotient ladder for the DtN limit: log-trapezoid r
// ladder with spacing ~0.12 and target 2e-4.
QuadratureSpec dtn_quadrature_default();

// U(lambda)u for every requested lambda through the substituted integral
// (1/Gamma(s)) Int tau^{s-1} e^{-tau} S(lambda^2/(4 tau)) u dtau.  One shared
// Yosida chain serves every (lambda, node) pair; nodes beyond the certified
// decay radius 34/(c1 g_1), with g_1 the smallest nonzero spatial stencil
// symbol, are replaced by the mean projection P0 u (relative error under
// e^{-34}).  cfg.sigma = 0 selects max(10 ||H||_est, 0.1 rho(u)/target_tol).
ExtensionProfile extension_profile(const ParabolicOperator& op, const Field& u,
                                   double s, const std::vector<double>& lambdas,
                                   YosidaConfig cfg, const QuadratureSpec& quad);

// c_s H^s u from the profile: difference quotients lambda^{-2s}(u - U(lambda)u)
// on the rung ladder lambda_j = 0.2 * 2^{-j}, j = 0..4, Richardson-extrapolated
// first at order 2-2s and then at order 2, scaled by 2s.  Each quotient is
// evaluated in the mollified integral form
// 4^{-s}/Gamma(s) Int r^{-s-1} e^{-lambda^2/(4r)} (I - S(r)) u dr
// whose sub-r_min tail is an exact incomplete-gamma expression, so no rung
// ever differentiates through quadrature noise.  Throws NumericalError when
// the rung ladder fails to contract or a rung violates the flux bound
// ||D(lambda)|| <= 1.5 (||u|| + ||Hu|| max(1, lambda^{2-2s})).
Field dtn_limit(const ParabolicOperator& op, const Field& u, double s,
                const YosidaConfig& cfg, const QuadratureSpec& quad);

// Same ladder shared across several exponents: the resolvent chain and the
// per-node semigroup accumulators are s-independent, so all outputs cost one
// chain.  Results are ordered as ss.
std::vector<Field> dtn_limit_multi(const ParabolicOperator& op, const Field& u,
                                   const std::vector<double>& ss,
                                   YosidaConfig cfg, QuadratureSpec quad);

// Rung-level view of the same computation: rungs[j] = 2s D(lambda_j), each
// approximating c_s H^s u on its own, so convergence of the ladder is
// observable rung by rung before the extrapolation commits to a limit.
struct DtnLadder {
  double s = 0.5;
  std::vector<double> lambdas;  // 0.2 * 2^{-j}
  std::vector<Field> rungs;
  Field extrapolated;  // the dtn_limit output
};

std::vector<DtnLadder> dtn_ladder_multi(const ParabolicOperator& op,
                                        const Field& u,
                                        const std::vector<double>& ss,
                                        YosidaConfig cfg, QuadratureSpec quad);

TwoSidedProfile reflect_even(const ExtensionProfile& p);

// W-type weighted energy over lambda in [a, b] within the profile range:
// trapezoid of |lambda|^{1-2s} (energy_norm(slice)^2 + ||d slice/d lambda||^2)
// with centered lambda-derivatives (one-sided at the range ends).  Needs at
// least 3 nodes inside [a, b].
double weighted_energy_norm(const TwoSidedProfile& p, double a, double b);

// Bank of `count` seeded test functions: C^inf bump in lambda supported on
// the inner 80% of the ladder times a random smooth space-time shape (even
// and odd lambda-profiles alternate).
std::vector<LambdaTestFunction> default_test_bank(const TwoSidedProfile& p,
                                                  int count, std::uint64_t seed);

// Residual of the weighted weak formulation against each test function,
// normalized by the product of the weighted energies of profile and test.
// The reinforced form pairs half-order time derivatives; the traditional
// form moves the whole time derivative onto the test function.  Face terms
// (lambda-derivatives) and cell terms (spatial + time forms) use exact
// integrals of the weight over the dual lambda-cells.
WeakResidualReport weak_residual(const TwoSidedProfile& p,
                                 const ParabolicOperator& op,
                                 const std::vector<LambdaTestFunction>& tests);

// Direct conservative solve of the degenerate two-point problem in lambda:
// exact transmissibilities 2s/(lambda_{j+1}^{2s} - lambda_j^{2s}), cell
// weights Delta(lambda^{2-2s})/(2-2s), Dirichlet u at lambda = 0 and the
// formula slice at lambda_max (whose mean-free part must already be below
// 1e-6 of the datum's).  Constant coefficients solve exactly per mode; the
// variable case runs GMRES with a per-mode tridiagonal preconditioner.
ExtensionProfile solve_extension_bvp(const ParabolicOperator& op,
                                     const Field& u, double s,
                                     double lambda_max, int nlambda);

// Scalar Gauss-Laguerre evaluation of the profile at one symbol value z:
// (1/Gamma(s)) sum_i w_i exp(-r_i z_sigma) with r_i = lambda^2 / (4 tau_i)
// over the generalized Gauss-Laguerre rule of the given node count (weight
// tau^{s-1} e^{-tau}).  sigma > 0 substitutes the Yosida-regularized symbol
// z_sigma = sigma z / (sigma + z); sigma = 0 uses z itself.  Drives
// symbol-level convergence studies (sigma-doubling rate, quadrature error)
// without any field machinery.
cplx profile_symbol_gl(double s, cplx z, double lambda, int nodes,
                       double sigma = 0.0);

// Archive: slices as FRACPAR1 files plus a manifest (s, lambda grid, digest).
void write_profile_archive(const std::string& dir, const ExtensionProfile& p,
                           const std::string& config_digest);
ExtensionProfile read_profile_archive(const std::string& dir);

}  // namespace fracpar
