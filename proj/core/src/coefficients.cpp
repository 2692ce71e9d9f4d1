#include "fracpar/coefficients.hpp"

#include <cmath>
#include <numbers>

#include "fracpar/rng.hpp"

namespace fracpar {

namespace {

// Visits grid points in layout order, handing the continuous coordinates.
template <typename F>
void for_each_point(const Grid& g, const F& f) {
  const double dx = g.dx(), dt = g.dt();
  if (g.spatial_dims == 1) {
    for (int it = 0; it < g.nt; ++it) {
      for (int ix = 0; ix < g.nx; ++ix) {
        f(g.index1(ix, it), std::array<double, 2>{ix * dx, 0.0}, it * dt);
      }
    }
  } else {
    for (int it = 0; it < g.nt; ++it) {
      for (int iy = 0; iy < g.nx; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
          f(g.index2(ix, iy, it), std::array<double, 2>{ix * dx, iy * dx},
            it * dt);
        }
      }
    }
  }
}

}  // namespace

bool CoefficientField::is_constant() const {
  const int nn = n() * n();
  for (std::size_t p = 1; p < grid.size(); ++p) {
    for (int e = 0; e < nn; ++e) {
      if (entries[p * nn + e] != entries[e]) return false;
    }
  }
  return true;
}

std::array<cplx, 4> CoefficientField::mean() const {
  const int nn = n() * n();
  std::array<cplx, 4> m{cplx(0.0), cplx(0.0), cplx(0.0), cplx(0.0)};
  for (std::size_t p = 0; p < grid.size(); ++p) {
    for (int e = 0; e < nn; ++e) m[e] += entries[p * nn + e];
  }
  for (int e = 0; e < nn; ++e) m[e] /= static_cast<double>(grid.size());
  return m;
}

CoefficientField CoefficientField::constant(const Grid& grid,
                                            const std::vector<cplx>& matrix,
                                            double c1, double c2) {
  const int nn = grid.spatial_dims * grid.spatial_dims;
  if (matrix.size() != static_cast<std::size_t>(nn)) {
    throw InvalidArgumentError("CoefficientField::constant: need n*n entries");
  }
  CoefficientField A;
  A.grid = grid;
  A.c1 = c1;
  A.c2 = c2;
  A.entries.resize(grid.size() * nn);
  bool real = true, sym = true;
  for (int e = 0; e < nn; ++e) {
    if (matrix[e].imag() != 0.0) real = false;
  }
  if (grid.spatial_dims == 2 && matrix[1] != matrix[2]) sym = false;
  A.is_real = real;
  A.is_symmetric = sym;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    for (int e = 0; e < nn; ++e) A.entries[p * nn + e] = matrix[e];
  }
  return A;
}

CoefficientField CoefficientField::identity(const Grid& grid, double scale) {
  if (grid.spatial_dims == 1) {
    return constant(grid, {cplx(scale)}, scale, scale);
  }
  return constant(grid, {cplx(scale), cplx(0.0), cplx(0.0), cplx(scale)},
                  scale, scale);
}

CoefficientField CoefficientField::isotropic(
    const Grid& grid,
    const std::function<double(const std::array<double, 2>&, double)>& a,
    double c1, double c2) {
  CoefficientField A;
  A.grid = grid;
  A.c1 = c1;
  A.c2 = c2;
  A.is_real = true;
  A.is_symmetric = true;
  const int nn = grid.spatial_dims * grid.spatial_dims;
  A.entries.assign(grid.size() * nn, cplx(0.0));
  for_each_point(grid, [&](std::size_t p, const std::array<double, 2>& x,
                           double t) {
    const double v = a(x, t);
    A.entries[p * nn] = v;
    if (grid.spatial_dims == 2) A.entries[p * nn + 3] = v;
  });
  return A;
}

CoefficientField CoefficientField::builtin(const Grid& grid,
                                           const std::string& name) {
  using std::numbers::pi;
  if (name == "identity") return identity(grid);
  if (name == "anisotropic") {
    if (grid.spatial_dims == 1) return constant(grid, {cplx(2.0)}, 2.0, 2.0);
    return constant(grid, {cplx(2.0), cplx(0.0), cplx(0.0), cplx(0.5)}, 0.5,
                    2.0);
  }
  if (name == "rotating-nonsymmetric") {
    // Scalar part 1.25 + 0.65 sin(theta) in [0.6, 1.9] plus, for n = 2, the
    // skew block 0.6 cos(theta) * [[0,1],[-1,0]] whose real quadratic form
    // vanishes; |A| <= sqrt(1.9^2 + 0.6^2) < 2.  Declared c1 = 0.5, c2 = 2.
    if (grid.spatial_dims == 1) {
      CoefficientField A = isotropic(
          grid,
          [&](const std::array<double, 2>& x, double t) {
            return 1.25 + 0.75 * std::sin(2.0 * pi *
                                          (x[0] / grid.Lx + t / grid.Lt));
          },
          0.5, 2.0);
      return A;
    }
    CoefficientField A;
    A.grid = grid;
    A.c1 = 0.5;
    A.c2 = 2.0;
    A.is_real = true;
    A.is_symmetric = false;
    A.entries.assign(grid.size() * 4, cplx(0.0));
    for_each_point(grid, [&](std::size_t p, const std::array<double, 2>& x,
                             double t) {
      const double theta =
          2.0 * pi * ((x[0] + x[1]) / grid.Lx + t / grid.Lt);
      const double a = 1.25 + 0.65 * std::sin(theta);
      const double b = 0.6 * std::cos(theta);
      A.entries[p * 4 + 0] = a;
      A.entries[p * 4 + 1] = b;
      A.entries[p * 4 + 2] = -b;
      A.entries[p * 4 + 3] = a;
    });
    return A;
  }
  if (name == "checkerboard") {
    return isotropic(
        grid,
        [&](const std::array<double, 2>& x, double t) {
          int par = static_cast<int>(std::floor(4.0 * x[0] / grid.Lx)) +
                    static_cast<int>(std::floor(4.0 * t / grid.Lt));
          if (grid.spatial_dims == 2) {
            par += static_cast<int>(std::floor(4.0 * x[1] / grid.Lx));
          }
          return (par % 2 == 0) ? 2.0 : 0.5;
        },
        0.5, 2.0);
  }
  throw InvalidArgumentError("unknown builtin coefficient family: " + name);
}

EllipticityReport check_ellipticity(const CoefficientField& A,
                                    int random_samples, std::uint64_t seed) {
  const int n = A.n();
  Lcg rng(seed);
  std::vector<std::array<cplx, 2>> vectors;
  // Canonical basis first, then random complex unit vectors.
  for (int d = 0; d < n; ++d) {
    std::array<cplx, 2> e{cplx(0.0), cplx(0.0)};
    e[d] = cplx(1.0);
    vectors.push_back(e);
  }
  for (int s = 0; s < random_samples; ++s) {
    std::array<cplx, 2> v{cplx(0.0), cplx(0.0)};
    double norm2 = 0.0;
    for (int d = 0; d < n; ++d) {
      v[d] = rng.coeff();
      norm2 += std::norm(v[d]);
    }
    const double inv = 1.0 / std::sqrt(std::max(norm2, 1e-300));
    for (int d = 0; d < n; ++d) v[d] *= inv;
    vectors.push_back(v);
  }

  EllipticityReport rep;
  rep.samples = static_cast<int>(vectors.size());
  double cmin = 1e300, cmax = 0.0;
  for (std::size_t p = 0; p < A.grid.size(); ++p) {
    for (const auto& xi : vectors) {
      std::array<cplx, 2> Axi{cplx(0.0), cplx(0.0)};
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) Axi[j] += A.entry(p, j, k) * xi[k];
      }
      double quad = 0.0;
      for (int j = 0; j < n; ++j) quad += (Axi[j] * std::conj(xi[j])).real();
      cmin = std::min(cmin, quad);
      for (const auto& zeta : vectors) {
        cplx bil(0.0);
        for (int j = 0; j < n; ++j) bil += Axi[j] * std::conj(zeta[j]);
        cmax = std::max(cmax, std::abs(bil));
      }
    }
  }
  rep.c1_observed = cmin;
  rep.c2_observed = cmax;
  rep.pass = (cmin >= A.c1 - 1e-12) && (cmax <= A.c2 + 1e-12);
  return rep;
}

}  // namespace fracpar
