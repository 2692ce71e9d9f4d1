#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fracpar/extension.hpp"
#include "fracpar/operator.hpp"

namespace fracpar {

// Which realization of H^s drives the dense nonlocal-Dirichlet assembly.
// `fourier` is exact for constant coefficients and fills the matrix from a
// single kernel column by translation invariance; the quadrature routes apply
// the operator to every basis vector and are meant for small grids.
enum class FractionalRoute { fourier, balakrishnan, semigroup };

const char* route_name(FractionalRoute route);
FractionalRoute route_from_name(const std::string& name);

// Axis-aligned periodic box Omega x J with strict periodic-distance bounds:
// a grid point lies inside when every spatial axis satisfies
// periodic_distance(x, center_x) < half_x and the time axis satisfies
// periodic_distance(t, center_t) < half_t.  Interior and exterior index sets
// partition the grid by construction.
struct SpaceTimeBox {
  std::array<double, 2> center_x{0.0, 0.0};
  std::array<double, 2> half_x{0.0, 0.0};
  double center_t = 0.0;
  double half_t = 0.0;

  bool contains(const Grid& grid, int ix, int iy, int it) const;
};

// Flat indices (grid layout order) of the points strictly inside the box.
std::vector<std::size_t> interior_indices(const Grid& grid,
                                          const SpaceTimeBox& box);

// Flat indices of the points a parabolic cube contains (spatial periodic
// distance < radius on every axis, time distance < radius^2).
std::vector<std::size_t> cube_indices(const Grid& grid,
                                      const ParabolicCube& cube);

// u = exterior_data outside the region; interior rows of H^s u vanish.
// Real coefficients only (the kernel/regularity pipelines have no complex
// theory behind them); exterior entries of the solution equal the data
// exactly, interior entries are the real part of the dense solve.
struct NonlocalDirichletProblem {
  double s = 0.5;
  SpaceTimeBox region;
  Field exterior_data;  // interior entries of this field are ignored
  FractionalRoute route = FractionalRoute::fourier;
};

Field solve_nonlocal_dirichlet(const NonlocalDirichletProblem& problem,
                               const ParabolicOperator& op);

// Solves several exterior data sets against one factorization of the interior
// block (the dense assembly and LU dominate; reusing them across data is what
// makes multi-seed studies affordable).  Throws InvalidArgumentError for
// grids above 4096 points, non-real coefficients, or s outside (0, 1);
// NumericalError("singular interior block", rcond) when the interior block
// is numerically singular, and NumericalError when an interior residual
// exceeds tolerance after the solve.
std::vector<Field> solve_nonlocal_dirichlet_batch(
    double s, const SpaceTimeBox& region, FractionalRoute route,
    const ParabolicOperator& op, const std::vector<Field>& exterior_data);

// Two-resolution stability diagnostics, filled by attach_refinement.
struct RefinementDiagnostics {
  bool present = false;
  int coarse_resolution = 0;
  int fine_resolution = 0;
  double alpha_coarse = 0.0;
  double alpha_fine = 0.0;
  double alpha_rel_delta = 0.0;  // |fine - coarse| / |coarse|, raw slopes
  double harnack_coarse = 0.0;
  double harnack_fine = 0.0;
  double harnack_rel_delta = 0.0;
};

// Joint report of the Hölder and Harnack probes on one field and cube.
// alpha is the fitted exponent clamped from above to 1 (alpha_raw keeps the
// unclamped least-squares slope; smooth fields can fit slightly above 1).
// holder_constant is the smallest c such that osc <= c (d/r)^alpha_raw
// sup|u| holds on at least 99% of the sampled pairs (bound_coverage records
// the achieved fraction).  The note records that the torus truncates the
// theorems' unbounded-past hypotheses and that the discrete graph domain
// stands in for the continuous solution class.
struct RegularityReport {
  double alpha = 1.0;
  double alpha_raw = 1.0;
  double holder_constant = 0.0;
  double fit_residual = 0.0;    // rms residual of the envelope fit, log space
  double bound_coverage = 1.0;  // fraction of pairs covered by (c, alpha_raw)
  std::size_t pair_count = 0;
  int bin_count = 0;

  double harnack_ratio = 1.0;  // sup over Q^- divided by inf over Q^+
  bool harnack_defined = false;
  double sup_past = 0.0;    // sup of u over Q^-
  double inf_future = 0.0;  // inf of u over Q^+
  double min_value = 0.0;   // min of Re u over the (truncated) past window

  ParabolicCube cube;
  int resolution = 0;  // spatial points per axis
  FractionalRoute route = FractionalRoute::fourier;
  std::string note;
  RefinementDiagnostics refinement;
};

// Fits the parabolic Hölder exponent on the cube: samples all grid-point
// pairs inside the cube with parabolic distance in [2 dx, radius] (below
// resolution and outside the theorem's regime are excluded), builds a robust
// oscillation envelope as the 90th percentile of |u(p) - u(q)| in each of 12
// log-spaced distance bins (linear-interpolated quantile; empty bins are
// skipped, zero-oscillation pairs never enter the envelope), and least-
// squares fits log envelope against log bin-center distance.  A constant
// field reports (alpha, c) = (1, 0).  Throws NumericalError when fewer than
// two bins survive.
RegularityReport holder_exponent_estimate(const Field& u,
                                          const ParabolicCube& cube);

// Harnack ratio sup_{Q^-} u / inf_{Q^+} u with waiting windows taken
// literally: spatial periodic distance <= 2 radius, past times in
// (tau0 - 3r^2/4, tau0 - r^2/4), future times in (tau0 + r^2/4, tau0 + r^2),
// both open, measured in wrapped time offsets.  Requires min Re u >=
// -1e-8 * max(1, sup|u|) over the (torus-truncated) past window; when the
// future infimum is not positive the ratio is flagged undefined instead of
// reported.  Throws NumericalError when a window contains no grid point.
RegularityReport harnack_ratio(const Field& u, const ParabolicCube& cube);

// Both probes on the same field and cube, merged into one report.
RegularityReport regularity_probe(const Field& u, const ParabolicCube& cube);

// Copies the two reports' headline numbers into the fine report's refinement
// diagnostics (relative deltas measured against the coarse values).
RegularityReport attach_refinement(RegularityReport fine,
                                   const RegularityReport& coarse);

// CSV with one row per report; column schema documented in the header line.
// Deterministic formatting (max-precision %.17g, fixed column order).
std::string regularity_csv(const std::vector<RegularityReport>& reports,
                           const std::string& config_digest);
void write_regularity_csv(const std::string& path,
                          const std::vector<RegularityReport>& reports,
                          const std::string& config_digest);

// Consistency of the extension realization on a nonlocal-harmonic field:
// the reflected profile's weak residual with test functions supported in the
// cube, on the default lambda ladder and on a midpoint-refined one (the
// residual should not grow under refinement), plus the Yosida convergence
// probe: re-running the profile with doubled sigma should at least halve the
// slice discrepancy, so sigma_doubling_ratio = ||U_{4s} - U_{2s}|| /
// ||U_{2s} - U_s|| stays below 0.6 (O(1/sigma) rate gives 0.5).  Constant
// fields report exact zeros.
struct ConsistencyReport {
  WeakResidualReport coarse;
  WeakResidualReport fine;
  double sigma_doubling_ratio = 0.0;
  double discrepancy_base = 0.0;  // ||U_{2s} - U_s|| feeding the ratio
};

ConsistencyReport extension_consistency_check(const ParabolicOperator& op,
                                              const Field& u, double s,
                                              const ParabolicCube& cube);

}  // namespace fracpar
