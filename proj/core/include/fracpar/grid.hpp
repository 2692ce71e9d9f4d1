#pragma once

#include <array>
#include <cstddef>

#include "fracpar/errors.hpp"

namespace fracpar {

// Periodic space-time lattice: n spatial axes (n in {1,2}) with nx points of
// spacing dx = Lx/nx each, and one time axis with nt points of spacing
// dt = Lt/nt.  All axes wrap.  Sample layout over flat arrays is row-major
// with x fastest, then y (when n = 2), then t slowest.
struct Grid {
  int spatial_dims = 1;
  int nx = 4;
  int nt = 4;
  double Lx = 1.0;
  double Lt = 1.0;

  // Validating factory; axis sizes must be even and at least 4 so every
  // Fourier multiplier has an unambiguous Nyquist mode.
  static Grid make(int spatial_dims, int nx, int nt, double Lx, double Lt);

  double dx() const { return Lx / nx; }
  double dt() const { return Lt / nt; }
  // Measure of one cell, dx^n * dt; the weight of the Riemann-sum inner product.
  double cell_measure() const;

  std::size_t spatial_points() const;               // nx^n
  std::size_t size() const;                         // nx^n * nt

  bool operator==(const Grid&) const = default;

  // Flat index helpers (callers pass indices already reduced mod axis size).
  std::size_t index1(int ix, int it) const {
    return static_cast<std::size_t>(it) * nx + ix;
  }
  std::size_t index2(int ix, int iy, int it) const {
    return (static_cast<std::size_t>(it) * nx + iy) * nx + ix;
  }
};

// A point (x, t) of the continuous torus, and the parabolic cube used by the
// regularity probes: |y_i - x_i| < r per spatial coordinate and |t - t0| < r^2,
// all distances taken in the periodic minimal-image sense.
struct ParabolicPoint {
  std::array<double, 2> x{0.0, 0.0};
  double t = 0.0;
};

struct ParabolicCube {
  ParabolicPoint center;
  double radius = 1.0;

  bool contains(const Grid& grid, const ParabolicPoint& p) const;
};

// Minimal-image distance of scalars on a circle of circumference L.
double periodic_distance(double a, double b, double L);

// d((x,t),(y,s)) = |x-y| + |t-s|^{1/2} with the Euclidean minimal-image |x-y|.
double parabolic_distance(const Grid& grid, const ParabolicPoint& p,
                          const ParabolicPoint& q);

}  // namespace fracpar
