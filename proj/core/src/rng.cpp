#include "fracpar/rng.hpp"

#include <cmath>
#include <numbers>

namespace fracpar {

namespace {

// Accumulates c * exp(2*pi*i*(kx*x/Lx [+ ky*y/Lx] + kt*t/Lt)) into f.
void add_mode1(Field& f, cplx c, int kx, int kt) {
  const Grid& g = f.grid;
  const double dx = g.Lx / g.nx, dt = g.Lt / g.nt;
  for (int it = 0; it < g.nt; ++it) {
    const double t = it * dt;
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = ix * dx;
      const double arg =
          2.0 * std::numbers::pi * (kx * x / g.Lx + kt * t / g.Lt);
      f.values[g.index1(ix, it)] += c * cplx(std::cos(arg), std::sin(arg));
    }
  }
}

void add_mode2(Field& f, cplx c, int kx, int ky, int kt) {
  const Grid& g = f.grid;
  const double dx = g.Lx / g.nx, dt = g.Lt / g.nt;
  for (int it = 0; it < g.nt; ++it) {
    const double t = it * dt;
    for (int iy = 0; iy < g.nx; ++iy) {
      const double y = iy * dx;
      for (int ix = 0; ix < g.nx; ++ix) {
        const double x = ix * dx;
        const double arg = 2.0 * std::numbers::pi *
                           ((kx * x + ky * y) / g.Lx + kt * t / g.Lt);
        f.values[g.index2(ix, iy, it)] += c * cplx(std::cos(arg), std::sin(arg));
      }
    }
  }
}

}  // namespace

Field smooth_field(const Grid& grid, std::uint64_t seed, int mx, int mt,
                   bool mean_free, bool spatial_only) {
  Lcg rng(seed);
  Field f(grid);
  if (grid.spatial_dims == 1) {
    for (int kx = -mx; kx <= mx; ++kx) {
      for (int kt = -mt; kt <= mt; ++kt) {
        cplx c = rng.coeff() / static_cast<double>(1 + kx * kx + kt * kt);
        if (mean_free && kx == 0 && kt == 0) c = 0.0;
        if (spatial_only && kt != 0) c = 0.0;
        if (c != cplx(0.0)) add_mode1(f, c, kx, kt);
      }
    }
  } else {
    for (int kx = -mx; kx <= mx; ++kx) {
      for (int ky = -mx; ky <= mx; ++ky) {
        for (int kt = -mt; kt <= mt; ++kt) {
          cplx c = rng.coeff() /
                   static_cast<double>(1 + kx * kx + ky * ky + kt * kt);
          if (mean_free && kx == 0 && ky == 0 && kt == 0) c = 0.0;
          if (spatial_only && kt != 0) c = 0.0;
          if (c != cplx(0.0)) add_mode2(f, c, kx, ky, kt);
        }
      }
    }
  }
  return f;
}

Field banded_spatial_field(const Grid& grid, std::uint64_t seed, int klo,
                           int khi) {
  if (grid.spatial_dims != 1) {
    throw InvalidArgumentError("banded_spatial_field: 1D grids only");
  }
  if (klo < 1 || khi < klo || khi >= grid.nx / 2) {
    throw InvalidArgumentError(
        "banded_spatial_field: need 1 <= klo <= khi < nx/2");
  }
  Lcg rng(seed);
  Field f(grid);
  for (int kx = -khi; kx <= -klo; ++kx) add_mode1(f, rng.coeff(), kx, 0);
  for (int kx = klo; kx <= khi; ++kx) add_mode1(f, rng.coeff(), kx, 0);
  return f;
}

}  // namespace fracpar
