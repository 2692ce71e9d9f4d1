#pragma once

#include <string>
#include <vector>

#include "fracpar/operator.hpp"
#include "fracpar/semigroup.hpp"

namespace fracpar {

// How a kernel column was produced.  Implicit Euler time-stepping is monotone
// (nonnegativity is structural); the spectral flavor inverts the full
// space-time symbol and is exact per mode for constant coefficients.
enum class KernelScheme { implicit_euler, spectral_resolvent };

// One column K(., ., y, t_source) of a kernel, materialized as a space-time
// field on the operator grid.  Rows strictly before the source time are
// exactly zero; the source row of a fundamental-solution column carries the
// discrete delta itself (amplitude 1/dx^n at the source point).
struct KernelColumn {
  int source_ix = 0;
  int source_iy = 0;  // ignored when n = 1
  int source_it = 0;
  double t_horizon = 0.0;  // time extent actually stepped
  KernelScheme scheme = KernelScheme::implicit_euler;
  Field values;
};

// Fundamental solution by implicit-Euler propagation of a discrete delta:
// each step solves (I + dt L(t_{k+1})) u^{k+1} = u^k with the flux-form
// spatial operator frozen at the new time level.  Requires real coefficients;
// the stencil conserves mass identically per step (checked to 1e-8) and the
// backward step is an M-matrix solve, so values stay nonnegative up to solver
// roundoff.  t_horizon must fit inside the time period without wrapping:
// source_it + round(t_horizon/dt) <= nt - 1.
// 1-D slices solve a periodic tridiagonal system (Thomas + Sherman-Morrison);
// 2-D slices use GMRES on the slice operator.
KernelColumn fundamental_solution_column(const ParabolicOperator& op,
                                         int source_ix, int source_iy,
                                         int source_it, double t_horizon);

// Resolvent kernel column: (sigma (sigma + H)^{-1})^m applied to the discrete
// space-time delta (amplitude 1/(dx^n dt)), i.e. the kernel of the m-th
// resolvent power.  Continuum form: sigma^m (t-s)^{m-1}/(m-1)! e^{-sigma(t-s)}
// K(x,t,y,s).  Rows strictly before source_it are masked to zero; on the time
// torus the masked mass is O(e^{-sigma (Lt - t_horizon)}), so choose sigma
// large enough that the wrap is negligible.  Total space-time integral is
// 1 up to solver tolerance plus the masked wrap.
KernelColumn resolvent_kernel(const ParabolicOperator& op, double sigma, int m,
                              int source_ix, int source_iy, int source_it);

// Applies a kernel column to a field by circular space-time convolution.
// Valid for constant coefficients only (translation invariance makes one
// column determine the whole kernel); the caller is responsible for that
// precondition.
Field apply_kernel_torus(const KernelColumn& col, const Field& u);

// Integral of the column over space at one time row (weight dx^n).
double kernel_slice_mass(const KernelColumn& col, int it);
// Integral over all of space-time (weight dx^n dt).
double kernel_total_mass(const KernelColumn& col);

struct GaussianFitReport {
  double C = 0.0;  // envelope amplitude
  double c = 0.0;  // fitted exponential rate of |x-y|^2/(t-s)
  double dominated_fraction = 0.0;  // sampled points under the envelope
  int violations = 0;
  int slices = 0;
  int points = 0;
};

// Fits log K = intercept(t) - c |x-y|^2/(t-s) by least squares with one shared
// slope c and one intercept per time slice, over slices with
// t - t_source in [t_min, t_max], periodized distance |x-y| <= radius_factor
// sqrt(t - t_source), and strictly positive values.  C is then the exact
// envelope sup K (t-s)^{n/2} e^{c |x-y|^2/(t-s)} over the sampled points, so
// the reported bound C (t-s)^{-n/2} e^{-c |x-y|^2/(t-s)} dominates every
// sampled point by construction.
GaussianFitReport gaussian_bound_fit(const KernelColumn& col, double t_min,
                                     double t_max, double radius_factor);

// Cross-checks the two realizations of S_sigma(r) on a small grid
// (<= 4096 points, constant coefficients): the resolvent-chain evaluation
// against the Poisson-weighted sum of iterated kernel convolutions
// e^{-sigma r} sum_m (r sigma)^m / m! K_{sigma,m} * u.  Returns the max-abs
// discrepancy.  Also asserts the L-infinity contraction
// sup |S_sigma(r) u| <= (1 + 1e-8) sup |u| + tail, throwing NumericalError on
// violation.
double yosida_series_kernel_check(const ParabolicOperator& op, double sigma,
                                  double r, const Field& u);

// Cross-resolution Chapman-Kolmogorov defect for 1-D real coefficients frozen
// at time row 0: max-abs difference between the direct column at (t2, step dt)
// and the composition int K(x,t2,z,t1) K(z,t1,y,0) dz of two half-interval
// kernel matrices stepped at dt/2.  t1 and t2 - t1 must be integer multiples
// of dt with t1 < t2.
double chapman_kolmogorov_defect(const CoefficientField& A, int source_ix,
                                 double t1, double t2, double dt);

// FRACPAR1 archive of a column: values plus a manifest recording the source
// point, scheme, horizon, and config digest.
void write_kernel_column(const std::string& dir, const KernelColumn& col,
                         const std::string& config_digest);

}  // namespace fracpar
