#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace fracpar {

struct GmresOptions {
  double tol = 1e-10;   // relative residual target, ||b - A x|| <= tol ||b||
  int max_iter = 500;   // total Krylov steps across restarts
  int restart = 50;
};

struct GmresResult {
  int iterations = 0;
  double residual = 0.0;  // achieved relative residual (true, recomputed)
  bool converged = false;
};

using LinearMap =
    std::function<void(const std::complex<double>*, std::complex<double>*)>;

// Restarted GMRES with right preconditioning: solves A M^{-1} y = b and
// returns x = M^{-1} y.  `x` carries the initial guess on entry and the
// iterate on exit.  Pass a null Minv for the unpreconditioned method.
GmresResult gmres_solve(std::size_t n, const LinearMap& A,
                        const LinearMap& Minv, const std::complex<double>* b,
                        std::complex<double>* x, const GmresOptions& opts);

}  // namespace fracpar
