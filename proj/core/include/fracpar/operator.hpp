#pragma once

#include <cstdint>

#include "fracpar/coefficients.hpp"
#include "fracpar/field.hpp"

namespace fracpar {

// How the time derivative inside apply() is realized: `spectral` multiplies by
// i*tau directly; `factorized` routes through the half-derivative/Hilbert
// composition D_t^{1/2} H_T D_t^{1/2}, which equals i*tau on every discrete
// mode by the sign conventions of spectral.hpp.
enum class TimeDerivativeMode { spectral, factorized };

struct SolveStats {
  int iterations = 0;      // Krylov steps (0 when the symbol guess sufficed)
  double residual = 0.0;   // achieved relative residual
  bool fast_path = false;  // constant-symbol guess met the tolerance directly
};

struct AccretivityReport {
  double min_rayleigh = 0.0;  // min over trials of Re<Hu,u>/||u||^2
  int trials = 0;
  bool pass = false;          // min_rayleigh >= -1e-10
};

// Discrete realization of H = dt - div(A(x,t) grad): exact spectral time
// derivative plus a second-order flux-form divergence with arithmetic face
// averages of A (centered differences for the off-diagonal couplings when
// n = 2).  Resolvent solves use restarted GMRES with the volume-averaged
// coefficient symbol as a diagonal Fourier preconditioner; when A is constant
// the preconditioner is exact and the solve reduces to one symbol division
// plus a residual check.
class ParabolicOperator {
 public:
  explicit ParabolicOperator(
      CoefficientField A,
      TimeDerivativeMode mode = TimeDerivativeMode::spectral,
      double solver_tol = 1e-10, int solver_max_iter = 500);

  const Grid& grid() const { return A_.grid; }
  const CoefficientField& coeffs() const { return A_; }
  TimeDerivativeMode time_mode() const { return mode_; }
  double solver_tol() const { return tol_; }
  int solver_max_iter() const { return max_iter_; }

  Field apply(const Field& u) const;          // H u
  Field apply_spatial(const Field& u) const;  // -div(A grad u)
  Field apply_time(const Field& u) const;     // dt u per time_mode

  // E(u, v) = sum over faces of A grad u . conj(grad v) + <H_T D^{1/2} u,
  // D^{1/2} v>, the discrete sesquilinear form with <apply(u), v> = E(u, v)
  // exactly (periodic summation by parts).
  cplx form(const Field& u, const Field& v) const;

  // H* u = -dt u - div(A^H grad u); satisfies <H u, v> = <u, H* v>.
  Field apply_adjoint(const Field& u) const;

  // Solves (sigma + H) u = f to relative residual solver_tol.  Re sigma must
  // be positive.  Throws NumericalError when the iteration budget is exhausted
  // (the achieved residual rides along in the exception).
  Field resolvent(cplx sigma, const Field& f, SolveStats* stats = nullptr) const;

  // Min Rayleigh quotient Re<Hu,u>/||u||^2 over seeded random smooth fields.
  AccretivityReport check_accretivity(int trials, std::uint64_t seed) const;

  // Symbol bound on ||H||: hypot of the peak spatial-stencil symbol (scaled by
  // c2) and the peak time frequency.
  double norm_estimate() const;

  // Spatial symbol of the volume-averaged coefficients at mode (ix[, iy]); for
  // constant A this is the exact spatial symbol of apply_spatial.
  cplx mean_spatial_symbol(int ix, int iy) const;

 private:
  Field spatial_diag_flux(const Field& u) const;

  CoefficientField A_;
  TimeDerivativeMode mode_;
  double tol_;
  int max_iter_;
  std::vector<double> tau_;        // per time index
  std::vector<double> gsym_;       // flux-stencil symbol per spatial index
  std::vector<double> ssym_;       // sin(xi dx)/dx per spatial index (n = 2)
  std::array<cplx, 4> mean_{};     // volume-averaged coefficient entries
};

}  // namespace fracpar
