#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "fracpar/field.hpp"

namespace fracpar {

// The matrix A(x,t) of the divergence-form spatial part: one n x n complex
// matrix per grid point (entries row-major a11, a12, a21, a22), together with
// the declared ellipticity constants: Re(A xi . conj(xi)) >= c1 |xi|^2 and
// |A xi . conj(zeta)| <= c2 |xi| |zeta| for all vectors.
struct CoefficientField {
  Grid grid;
  std::vector<cplx> entries;
  double c1 = 1.0;
  double c2 = 1.0;
  bool is_real = true;
  bool is_symmetric = true;  // diagnostic only

  int n() const { return grid.spatial_dims; }
  const cplx* at(std::size_t point) const {
    return entries.data() + point * static_cast<std::size_t>(n() * n());
  }
  cplx entry(std::size_t point, int j, int k) const {
    return entries[point * static_cast<std::size_t>(n() * n()) + j * n() + k];
  }

  bool is_constant() const;
  // Volume average of each entry; the symbol of the preconditioner.
  std::array<cplx, 4> mean() const;

  // Constant-coefficient field from one matrix (row-major, n*n entries).
  static CoefficientField constant(const Grid& grid,
                                   const std::vector<cplx>& matrix, double c1,
                                   double c2);
  static CoefficientField identity(const Grid& grid, double scale = 1.0);
  // Pointwise scalar a(x,t) on the diagonal (x[1] ignored when n = 1).
  static CoefficientField isotropic(
      const Grid& grid,
      const std::function<double(const std::array<double, 2>&, double)>& a,
      double c1, double c2);
  // Named builtin families: identity | anisotropic | rotating-nonsymmetric |
  // checkerboard.  All are real with declared constants; see the
  // implementation for the exact formulas.
  static CoefficientField builtin(const Grid& grid, const std::string& name);
};

struct EllipticityReport {
  double c1_observed = 0.0;  // min over samples of Re(A xi . conj(xi))/|xi|^2
  double c2_observed = 0.0;  // max over samples of |A xi . conj(zeta)|/(|xi||zeta|)
  int samples = 0;
  bool pass = false;         // observed constants within the declared ones
};

// Samples the quadratic/bilinear forms over the canonical basis plus
// `random_samples` random complex unit vectors at every grid point.
EllipticityReport check_ellipticity(const CoefficientField& A,
                                    int random_samples, std::uint64_t seed);

}  // namespace fracpar
