#include "fracpar/spectral.hpp"

#include <cmath>
#include <numbers>

#include "fracpar/fft.hpp"

namespace fracpar {

namespace {

std::vector<double> signed_frequencies(int m, double L) {
  std::vector<double> out(m);
  for (int k = 0; k < m; ++k) {
    int ks = (k <= m / 2) ? k : k - m;
    out[k] = 2.0 * std::numbers::pi * ks / L;
  }
  return out;
}

}  // namespace

std::vector<double> tau_values(const Grid& grid) {
  return signed_frequencies(grid.nt, grid.Lt);
}

std::vector<double> xi_values(const Grid& grid) {
  return signed_frequencies(grid.nx, grid.Lx);
}

std::vector<double> flux_symbol(const Grid& grid) {
  std::vector<double> g(grid.nx);
  const double dx = grid.dx();
  for (int k = 0; k < grid.nx; ++k) {
    const double c = std::cos(2.0 * std::numbers::pi * k / grid.nx);
    g[k] = 2.0 * (1.0 - c) / (dx * dx);
  }
  return g;
}

void apply_symbol_spectrum(const Grid& grid, cplx* spectrum,
                           const std::function<cplx(double, double)>& m) {
  const std::vector<double> tau = tau_values(grid);
  const std::vector<double> g = flux_symbol(grid);
  if (grid.spatial_dims == 1) {
    for (int it = 0; it < grid.nt; ++it) {
      const double t = tau[it];
      cplx* row = spectrum + grid.index1(0, it);
      for (int ix = 0; ix < grid.nx; ++ix) row[ix] *= m(g[ix], t);
    }
  } else {
    for (int it = 0; it < grid.nt; ++it) {
      const double t = tau[it];
      for (int iy = 0; iy < grid.nx; ++iy) {
        const double gy = g[iy];
        cplx* row = spectrum + grid.index2(0, iy, it);
        for (int ix = 0; ix < grid.nx; ++ix) row[ix] *= m(g[ix] + gy, t);
      }
    }
  }
}

Field apply_symbol(const Field& u,
                   const std::function<cplx(double, double)>& m) {
  std::vector<cplx> spec = fft_forward(u);
  apply_symbol_spectrum(u.grid, spec.data(), m);
  return fft_inverse(u.grid, spec);
}

Field half_time_derivative(const Field& u) {
  return apply_symbol(u, [](double, double tau) {
    return cplx(std::sqrt(std::fabs(tau)), 0.0);
  });
}

Field hilbert_transform_t(const Field& u) {
  return apply_symbol(u, [](double, double tau) {
    if (tau > 0.0) return cplx(0.0, 1.0);
    if (tau < 0.0) return cplx(0.0, -1.0);
    return cplx(0.0, 0.0);
  });
}

Field time_derivative(const Field& u) {
  return apply_symbol(u, [](double, double tau) { return cplx(0.0, tau); });
}

std::vector<Field> gradient_forward(const Field& u) {
  const Grid& g = u.grid;
  const double inv_dx = 1.0 / g.dx();
  std::vector<Field> out;
  if (g.spatial_dims == 1) {
    Field dxu(g);
    for (int it = 0; it < g.nt; ++it) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const int ip = (ix + 1) % g.nx;
        dxu.values[g.index1(ix, it)] =
            (u.values[g.index1(ip, it)] - u.values[g.index1(ix, it)]) * inv_dx;
      }
    }
    out.push_back(std::move(dxu));
  } else {
    Field dxu(g), dyu(g);
    for (int it = 0; it < g.nt; ++it) {
      for (int iy = 0; iy < g.nx; ++iy) {
        const int jp = (iy + 1) % g.nx;
        for (int ix = 0; ix < g.nx; ++ix) {
          const int ip = (ix + 1) % g.nx;
          const std::size_t here = g.index2(ix, iy, it);
          dxu.values[here] =
              (u.values[g.index2(ip, iy, it)] - u.values[here]) * inv_dx;
          dyu.values[here] =
              (u.values[g.index2(ix, jp, it)] - u.values[here]) * inv_dx;
        }
      }
    }
    out.push_back(std::move(dxu));
    out.push_back(std::move(dyu));
  }
  return out;
}

double energy_norm(const Field& u) {
  double sq = l2_norm(u);
  sq *= sq;
  for (const Field& d : gradient_forward(u)) {
    const double n = l2_norm(d);
    sq += n * n;
  }
  const double h = l2_norm(half_time_derivative(u));
  sq += h * h;
  return std::sqrt(sq);
}

double parabolic_sobolev_norm(const Field& u, double s) {
  if (!(s > 0.0 && s < 1.0)) {
    throw InvalidArgumentError("parabolic_sobolev_norm: s must be in (0,1)");
  }
  const Grid& grid = u.grid;
  std::vector<cplx> spec = fft_forward(u);
  const std::vector<double> tau = tau_values(grid);
  const std::vector<double> g = flux_symbol(grid);
  double acc = 0.0;
  auto add = [&](double gt, double tv, cplx coef) {
    const double z = std::hypot(gt, tv);             // |g + i tau|
    acc += (1.0 + std::pow(z, s)) * std::norm(coef);
  };
  if (grid.spatial_dims == 1) {
    for (int it = 0; it < grid.nt; ++it) {
      for (int ix = 0; ix < grid.nx; ++ix) {
        add(g[ix], tau[it], spec[grid.index1(ix, it)]);
      }
    }
  } else {
    for (int it = 0; it < grid.nt; ++it) {
      for (int iy = 0; iy < grid.nx; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
          add(g[ix] + g[iy], tau[it], spec[grid.index2(ix, iy, it)]);
        }
      }
    }
  }
  const double scale = grid.cell_measure() / static_cast<double>(grid.size());
  return std::sqrt(acc * scale);
}

}  // namespace fracpar
