#include "fracpar/operator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fracpar/fft.hpp"
#include "fracpar/gmres.hpp"
#include "fracpar/rng.hpp"
#include "fracpar/spectral.hpp"

namespace fracpar {

ParabolicOperator::ParabolicOperator(CoefficientField A,
                                     TimeDerivativeMode mode,
                                     double solver_tol, int solver_max_iter)
    : A_(std::move(A)), mode_(mode), tol_(solver_tol), max_iter_(solver_max_iter) {
  if (!(tol_ > 0.0) || max_iter_ < 1) {
    throw InvalidArgumentError("ParabolicOperator: bad solver settings");
  }
  for (const cplx& z : A_.entries) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvalidArgumentError("ParabolicOperator: coefficients not finite");
    }
  }
  tau_ = tau_values(A_.grid);
  gsym_ = flux_symbol(A_.grid);
  ssym_.resize(A_.grid.nx);
  const double dx = A_.grid.dx();
  for (int k = 0; k < A_.grid.nx; ++k) {
    ssym_[k] = std::sin(2.0 * std::numbers::pi * k / A_.grid.nx) / dx;
  }
  mean_ = A_.mean();
}

cplx ParabolicOperator::mean_spatial_symbol(int ix, int iy) const {
  if (A_.grid.spatial_dims == 1) return mean_[0] * gsym_[ix];
  return mean_[0] * gsym_[ix] + mean_[3] * gsym_[iy] +
         (mean_[1] + mean_[2]) * (ssym_[ix] * ssym_[iy]);
}

Field ParabolicOperator::spatial_diag_flux(const Field& u) const {
  const Grid& g = A_.grid;
  const double inv_dx = 1.0 / g.dx();
  Field out(g);
  if (g.spatial_dims == 1) {
    std::vector<cplx> flux(g.nx);
    for (int it = 0; it < g.nt; ++it) {
      const std::size_t base = g.index1(0, it);
      for (int ix = 0; ix < g.nx; ++ix) {
        const int ip = (ix + 1) % g.nx;
        const cplx aface =
            0.5 * (A_.entries[base + ix] + A_.entries[base + ip]);
        flux[ix] = aface * (u.values[base + ip] - u.values[base + ix]) * inv_dx;
      }
      for (int ix = 0; ix < g.nx; ++ix) {
        const int im = (ix + g.nx - 1) % g.nx;
        out.values[base + ix] = -(flux[ix] - flux[im]) * inv_dx;
      }
    }
    return out;
  }

  // n = 2: flux form along each axis with the diagonal entries, centered
  // differences for the off-diagonal couplings.
  std::vector<cplx> flux(g.nx);
  for (int it = 0; it < g.nt; ++it) {
    for (int iy = 0; iy < g.nx; ++iy) {  // x-axis sweeps
      for (int ix = 0; ix < g.nx; ++ix) {
        const int ip = (ix + 1) % g.nx;
        const std::size_t here = g.index2(ix, iy, it);
        const std::size_t next = g.index2(ip, iy, it);
        const cplx aface = 0.5 * (A_.entries[here * 4] + A_.entries[next * 4]);
        flux[ix] = aface * (u.values[next] - u.values[here]) * inv_dx;
      }
      for (int ix = 0; ix < g.nx; ++ix) {
        const int im = (ix + g.nx - 1) % g.nx;
        out.values[g.index2(ix, iy, it)] -= (flux[ix] - flux[im]) * inv_dx;
      }
    }
    for (int ix = 0; ix < g.nx; ++ix) {  // y-axis sweeps
      for (int iy = 0; iy < g.nx; ++iy) {
        const int jp = (iy + 1) % g.nx;
        const std::size_t here = g.index2(ix, iy, it);
        const std::size_t next = g.index2(ix, jp, it);
        const cplx aface =
            0.5 * (A_.entries[here * 4 + 3] + A_.entries[next * 4 + 3]);
        flux[iy] = aface * (u.values[next] - u.values[here]) * inv_dx;
      }
      for (int iy = 0; iy < g.nx; ++iy) {
        const int jm = (iy + g.nx - 1) % g.nx;
        out.values[g.index2(ix, iy, it)] -= (flux[iy] - flux[jm]) * inv_dx;
      }
    }
  }
  return out;
}

Field ParabolicOperator::apply_spatial(const Field& u) const {
  require_same_grid(u, Field(A_.grid));
  const Grid& g = A_.grid;
  Field out = spatial_diag_flux(u);
  if (g.spatial_dims == 1) return out;

  const double inv_2dx = 0.5 / g.dx();
  // w01 = A01 * D0_y u, then out -= D0_x w01; w10 = A10 * D0_x u, then
  // out -= D0_y w10.
  std::vector<cplx> w(g.spatial_points());
  for (int it = 0; it < g.nt; ++it) {
    for (int iy = 0; iy < g.nx; ++iy) {
      const int jp = (iy + 1) % g.nx, jm = (iy + g.nx - 1) % g.nx;
      for (int ix = 0; ix < g.nx; ++ix) {
        const std::size_t here = g.index2(ix, iy, it);
        const cplx d0y =
            (u.values[g.index2(ix, jp, it)] - u.values[g.index2(ix, jm, it)]) *
            inv_2dx;
        w[static_cast<std::size_t>(iy) * g.nx + ix] =
            A_.entries[here * 4 + 1] * d0y;
      }
    }
    for (int iy = 0; iy < g.nx; ++iy) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const int ipx = (ix + 1) % g.nx, imx = (ix + g.nx - 1) % g.nx;
        out.values[g.index2(ix, iy, it)] -=
            (w[static_cast<std::size_t>(iy) * g.nx + ipx] -
             w[static_cast<std::size_t>(iy) * g.nx + imx]) *
            inv_2dx;
      }
    }
    for (int iy = 0; iy < g.nx; ++iy) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const int ipx = (ix + 1) % g.nx, imx = (ix + g.nx - 1) % g.nx;
        const std::size_t here = g.index2(ix, iy, it);
        const cplx d0x =
            (u.values[g.index2(ipx, iy, it)] - u.values[g.index2(imx, iy, it)]) *
            inv_2dx;
        w[static_cast<std::size_t>(iy) * g.nx + ix] =
            A_.entries[here * 4 + 2] * d0x;
      }
    }
    for (int iy = 0; iy < g.nx; ++iy) {
      const int jpy = (iy + 1) % g.nx, jmy = (iy + g.nx - 1) % g.nx;
      for (int ix = 0; ix < g.nx; ++ix) {
        out.values[g.index2(ix, iy, it)] -=
            (w[static_cast<std::size_t>(jpy) * g.nx + ix] -
             w[static_cast<std::size_t>(jmy) * g.nx + ix]) *
            inv_2dx;
      }
    }
  }
  return out;
}

Field ParabolicOperator::apply_time(const Field& u) const {
  if (mode_ == TimeDerivativeMode::spectral) return time_derivative(u);
  return half_time_derivative(hilbert_transform_t(half_time_derivative(u)));
}

Field ParabolicOperator::apply(const Field& u) const {
  require_finite(u, "ParabolicOperator::apply");
  Field out = apply_time(u);
  out += apply_spatial(u);
  return out;
}

cplx ParabolicOperator::form(const Field& u, const Field& v) const {
  require_same_grid(u, v);
  const Grid& g = A_.grid;
  const double inv_dx = 1.0 / g.dx();
  const double meas = g.cell_measure();
  cplx acc(0.0);

  if (g.spatial_dims == 1) {
    for (int it = 0; it < g.nt; ++it) {
      const std::size_t base = g.index1(0, it);
      for (int ix = 0; ix < g.nx; ++ix) {
        const int ip = (ix + 1) % g.nx;
        const cplx aface =
            0.5 * (A_.entries[base + ix] + A_.entries[base + ip]);
        const cplx du = (u.values[base + ip] - u.values[base + ix]) * inv_dx;
        const cplx dv = (v.values[base + ip] - v.values[base + ix]) * inv_dx;
        acc += aface * du * std::conj(dv);
      }
    }
  } else {
    const double inv_2dx = 0.5 * inv_dx;
    for (int it = 0; it < g.nt; ++it) {
      for (int iy = 0; iy < g.nx; ++iy) {
        const int jp = (iy + 1) % g.nx, jm = (iy + g.nx - 1) % g.nx;
        for (int ix = 0; ix < g.nx; ++ix) {
          const int ipx = (ix + 1) % g.nx, imx = (ix + g.nx - 1) % g.nx;
          const std::size_t here = g.index2(ix, iy, it);
          // Diagonal entries on forward-difference faces.
          const cplx ax =
              0.5 * (A_.entries[here * 4] + A_.entries[g.index2(ipx, iy, it) * 4]);
          const cplx dux =
              (u.values[g.index2(ipx, iy, it)] - u.values[here]) * inv_dx;
          const cplx dvx =
              (v.values[g.index2(ipx, iy, it)] - v.values[here]) * inv_dx;
          acc += ax * dux * std::conj(dvx);
          const cplx ay = 0.5 * (A_.entries[here * 4 + 3] +
                                 A_.entries[g.index2(ix, jp, it) * 4 + 3]);
          const cplx duy =
              (u.values[g.index2(ix, jp, it)] - u.values[here]) * inv_dx;
          const cplx dvy =
              (v.values[g.index2(ix, jp, it)] - v.values[here]) * inv_dx;
          acc += ay * duy * std::conj(dvy);
          // Off-diagonal couplings on centered differences.
          const cplx d0xu =
              (u.values[g.index2(ipx, iy, it)] - u.values[g.index2(imx, iy, it)]) *
              inv_2dx;
          const cplx d0yu =
              (u.values[g.index2(ix, jp, it)] - u.values[g.index2(ix, jm, it)]) *
              inv_2dx;
          const cplx d0xv =
              (v.values[g.index2(ipx, iy, it)] - v.values[g.index2(imx, iy, it)]) *
              inv_2dx;
          const cplx d0yv =
              (v.values[g.index2(ix, jp, it)] - v.values[g.index2(ix, jm, it)]) *
              inv_2dx;
          acc += A_.entries[here * 4 + 1] * d0yu * std::conj(d0xv);
          acc += A_.entries[here * 4 + 2] * d0xu * std::conj(d0yv);
        }
      }
    }
  }
  acc *= meas;

  const Field du_half = half_time_derivative(u);
  const Field dv_half = half_time_derivative(v);
  acc += l2_inner(hilbert_transform_t(du_half), dv_half);
  return acc;
}

Field ParabolicOperator::apply_adjoint(const Field& u) const {
  // H* uses the conjugate-transpose coefficients and the reversed time
  // orientation: H* u = -dt u - div(A^H grad u).
  CoefficientField AH = A_;
  const int n = A_.n();
  if (n == 2) {
    for (std::size_t p = 0; p < A_.grid.size(); ++p) {
      AH.entries[p * 4 + 0] = std::conj(A_.entries[p * 4 + 0]);
      AH.entries[p * 4 + 1] = std::conj(A_.entries[p * 4 + 2]);
      AH.entries[p * 4 + 2] = std::conj(A_.entries[p * 4 + 1]);
      AH.entries[p * 4 + 3] = std::conj(A_.entries[p * 4 + 3]);
    }
  } else {
    for (std::size_t p = 0; p < A_.grid.size(); ++p) {
      AH.entries[p] = std::conj(A_.entries[p]);
    }
  }
  ParabolicOperator adj(AH, TimeDerivativeMode::spectral, tol_, max_iter_);
  Field out = adj.apply_spatial(u);
  Field dt = time_derivative(u);
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] -= dt.values[i];
  return out;
}

Field ParabolicOperator::resolvent(cplx sigma, const Field& f,
                                   SolveStats* stats) const {
  if (!(sigma.real() > 0.0)) {
    throw InvalidArgumentError("resolvent: Re sigma must be positive");
  }
  require_finite(f, "ParabolicOperator::resolvent");
  const Grid& g = A_.grid;
  const std::size_t N = g.size();

  // Denominator of the volume-averaged symbol, per mode.
  std::vector<cplx> denom(N);
  if (g.spatial_dims == 1) {
    for (int it = 0; it < g.nt; ++it) {
      const cplx st = sigma + cplx(0.0, tau_[it]);
      for (int ix = 0; ix < g.nx; ++ix) {
        denom[g.index1(ix, it)] = st + mean_spatial_symbol(ix, 0);
      }
    }
  } else {
    for (int it = 0; it < g.nt; ++it) {
      const cplx st = sigma + cplx(0.0, tau_[it]);
      for (int iy = 0; iy < g.nx; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
          denom[g.index2(ix, iy, it)] = st + mean_spatial_symbol(ix, iy);
        }
      }
    }
  }

  std::vector<cplx> fhat(N), xhat(N), buf(N);
  fft_forward(g, f.values.data(), fhat.data());
  for (std::size_t i = 0; i < N; ++i) xhat[i] = fhat[i] / denom[i];

  Field x(g);
  fft_inverse(g, xhat.data(), x.values.data());

  // Residual of the symbol guess: r = f - sigma x - H x, with the time part
  // taken from the already-available spectrum.
  auto residual_of = [&](const Field& cand, const std::vector<cplx>& cand_hat,
                         Field& r_out) {
    for (std::size_t i = 0; i < N; ++i) buf[i] = cand_hat[i];
    apply_symbol_spectrum(g, buf.data(),
                          [](double, double tau) { return cplx(0.0, tau); });
    Field dtx(g);
    fft_inverse(g, buf.data(), dtx.values.data());
    Field Hx = apply_spatial(cand);
    double rn = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      r_out.values[i] = f.values[i] - sigma * cand.values[i] -
                        dtx.values[i] - Hx.values[i];
      rn += std::norm(r_out.values[i]);
    }
    return std::sqrt(rn);
  };

  double fnorm = 0.0;
  for (std::size_t i = 0; i < N; ++i) fnorm += std::norm(f.values[i]);
  fnorm = std::sqrt(fnorm);

  Field r(g);
  const double r0 = residual_of(x, xhat, r);
  if (r0 <= tol_ * fnorm || fnorm == 0.0) {
    if (stats) {
      stats->iterations = 0;
      stats->residual = fnorm > 0.0 ? r0 / fnorm : 0.0;
      stats->fast_path = true;
    }
    return x;
  }

  // GMRES on (sigma + H) with the mean-symbol preconditioner, warm-started
  // from the symbol guess.
  LinearMap op = [&](const cplx* in, cplx* out) {
    fft_forward(g, in, buf.data());
    apply_symbol_spectrum(g, buf.data(),
                          [](double, double tau) { return cplx(0.0, tau); });
    fft_inverse(g, buf.data(), out);
    Field tmp(g);
    std::copy(in, in + N, tmp.values.begin());
    Field Hx = apply_spatial(tmp);
    for (std::size_t i = 0; i < N; ++i) {
      out[i] += sigma * in[i] + Hx.values[i];
    }
  };
  LinearMap precond = [&](const cplx* in, cplx* out) {
    fft_forward(g, in, buf.data());
    for (std::size_t i = 0; i < N; ++i) buf[i] /= denom[i];
    fft_inverse(g, buf.data(), out);
  };

  GmresOptions opts;
  opts.tol = tol_;
  opts.max_iter = max_iter_;
  opts.restart = 50;
  GmresResult res = gmres_solve(N, op, precond, f.values.data(),
                                x.values.data(), opts);
  if (stats) {
    stats->iterations = res.iterations;
    stats->residual = res.residual;
    stats->fast_path = false;
  }
  if (!res.converged) {
    throw NumericalError(
        "resolvent: GMRES did not reach tolerance " + std::to_string(tol_) +
            " after " + std::to_string(res.iterations) +
            " iterations (achieved relative residual " +
            std::to_string(res.residual) + ")",
        res.residual);
  }
  if (!x.all_finite()) {
    throw NumericalError("resolvent: solution contains NaN/Inf");
  }
  return x;
}

AccretivityReport ParabolicOperator::check_accretivity(
    int trials, std::uint64_t seed) const {
  if (trials < 1) {
    throw InvalidArgumentError("check_accretivity: trials must be >= 1");
  }
  const Grid& g = A_.grid;
  const int mx = std::min(6, g.nx / 2 - 1);
  const int mt = std::min(6, g.nt / 2 - 1);
  AccretivityReport rep;
  rep.trials = trials;
  rep.min_rayleigh = 1e300;
  for (int trial = 0; trial < trials; ++trial) {
    Field u = smooth_field(g, seed + 7919ull * trial, mx, mt,
                           /*mean_free=*/false);
    const double nu = l2_norm(u);
    if (nu == 0.0) continue;
    const double q = l2_inner(apply(u), u).real() / (nu * nu);
    rep.min_rayleigh = std::min(rep.min_rayleigh, q);
  }
  rep.pass = rep.min_rayleigh >= -1e-10;
  return rep;
}

double ParabolicOperator::norm_estimate() const {
  const Grid& g = A_.grid;
  const double dx = g.dx();
  double spatial = A_.c2 * g.spatial_dims * 4.0 / (dx * dx);
  if (g.spatial_dims == 2) spatial += A_.c2 * 2.0 / (dx * dx);
  const double tau_max = std::numbers::pi * g.nt / g.Lt;
  return std::hypot(spatial, tau_max);
}

}  // namespace fracpar
