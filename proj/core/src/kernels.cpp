#include "fracpar/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "fracpar/fft.hpp"
#include "fracpar/gmres.hpp"
#include "fracpar/io.hpp"

namespace fracpar {

namespace {

void require_real(const CoefficientField& A, const char* where) {
  for (const cplx& e : A.entries) {
    if (e.imag() != 0.0) {
      throw InvalidArgumentError(std::string(where) +
                                 ": kernel machinery requires real coefficients");
    }
  }
}

// Plain Thomas solve of a tridiagonal system; diagonally dominant here, so no
// pivoting.  low[0] and up[n-1] are ignored.
void thomas(const std::vector<double>& low, std::vector<double> diag,
            const std::vector<double>& up, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = low[i] / diag[i - 1];
    diag[i] -= m * up[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / diag[i];
  }
}

// Periodic tridiagonal solve by Sherman-Morrison: the two corner entries
// low[0] (coupling row 0 to column n-1) and up[n-1] (row n-1 to column 0)
// are peeled off as a rank-one update.
void cyclic_thomas(const std::vector<double>& low,
                   const std::vector<double>& diag,
                   const std::vector<double>& up, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  const double alpha = up[n - 1];  // A[n-1][0]
  const double beta = low[0];      // A[0][n-1]
  const double gamma = -diag[0];
  std::vector<double> d = diag;
  d[0] -= gamma;
  d[n - 1] -= alpha * beta / gamma;
  std::vector<double> q(n, 0.0);
  q[0] = gamma;
  q[n - 1] = alpha;
  std::vector<double> y = rhs;
  thomas(low, d, up, y);
  thomas(low, d, up, q);
  const double vy = y[0] + beta / gamma * y[n - 1];
  const double vq = q[0] + beta / gamma * q[n - 1];
  const double factor = vy / (1.0 + vq);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = y[i] - factor * q[i];
}

// One implicit-Euler step of the 1-D flux stencil: solves
// (I + k (a_{i+1/2} + a_{i-1/2}) - k a_{i+1/2} E^+ - k a_{i-1/2} E^-) u = rhs
// with k = dt/dx^2 and face coefficients af[i] = a_{i+1/2}.
void step_euler_1d(const std::vector<double>& af, double k,
                   std::vector<double>& u) {
  const std::size_t n = af.size();
  std::vector<double> low(n), diag(n), up(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = (i + n - 1) % n;
    diag[i] = 1.0 + k * (af[i] + af[im]);
    up[i] = -k * af[i];
    low[i] = -k * af[im];
  }
  cyclic_thomas(low, diag, up, u);
}

// (I + dt L(t_row)) applied to one 2-D spatial slice; same stencil as the
// operator's spatial part, with coefficients frozen at one time row.
void apply_slice_2d(const CoefficientField& A, int it, double dt,
                    const cplx* in, cplx* out) {
  const Grid& g = A.grid;
  const int nx = g.nx;
  const double inv_dx = 1.0 / g.dx();
  const double inv_2dx = 0.5 * inv_dx;
  auto sp = [&](int ix, int iy) { return static_cast<std::size_t>(iy) * nx + ix; };
  auto cf = [&](int ix, int iy, int e) {
    return A.entries[(g.index2(ix, iy, it)) * 4 + static_cast<std::size_t>(e)]
        .real();
  };
  std::vector<cplx> acc(static_cast<std::size_t>(nx) * nx, cplx(0.0));
  std::vector<cplx> flux(static_cast<std::size_t>(nx));
  for (int iy = 0; iy < nx; ++iy) {  // x-axis fluxes with a00
    for (int ix = 0; ix < nx; ++ix) {
      const int ip = (ix + 1) % nx;
      const double aface = 0.5 * (cf(ix, iy, 0) + cf(ip, iy, 0));
      flux[static_cast<std::size_t>(ix)] =
          aface * (in[sp(ip, iy)] - in[sp(ix, iy)]) * inv_dx;
    }
    for (int ix = 0; ix < nx; ++ix) {
      const int im = (ix + nx - 1) % nx;
      acc[sp(ix, iy)] -= (flux[static_cast<std::size_t>(ix)] -
                          flux[static_cast<std::size_t>(im)]) *
                         inv_dx;
    }
  }
  for (int ix = 0; ix < nx; ++ix) {  // y-axis fluxes with a11
    for (int iy = 0; iy < nx; ++iy) {
      const int jp = (iy + 1) % nx;
      const double aface = 0.5 * (cf(ix, iy, 3) + cf(ix, jp, 3));
      flux[static_cast<std::size_t>(iy)] =
          aface * (in[sp(ix, jp)] - in[sp(ix, iy)]) * inv_dx;
    }
    for (int iy = 0; iy < nx; ++iy) {
      const int jm = (iy + nx - 1) % nx;
      acc[sp(ix, iy)] -= (flux[static_cast<std::size_t>(iy)] -
                          flux[static_cast<std::size_t>(jm)]) *
                         inv_dx;
    }
  }
  std::vector<cplx> w(static_cast<std::size_t>(nx) * nx);
  for (int iy = 0; iy < nx; ++iy) {  // w01 = a01 D0_y u, acc -= D0_x w01
    const int jp = (iy + 1) % nx, jm = (iy + nx - 1) % nx;
    for (int ix = 0; ix < nx; ++ix) {
      const cplx d0y = (in[sp(ix, jp)] - in[sp(ix, jm)]) * inv_2dx;
      w[sp(ix, iy)] = cf(ix, iy, 1) * d0y;
    }
  }
  for (int iy = 0; iy < nx; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const int ipx = (ix + 1) % nx, imx = (ix + nx - 1) % nx;
      acc[sp(ix, iy)] -= (w[sp(ipx, iy)] - w[sp(imx, iy)]) * inv_2dx;
    }
  }
  for (int iy = 0; iy < nx; ++iy) {  // w10 = a10 D0_x u, acc -= D0_y w10
    for (int ix = 0; ix < nx; ++ix) {
      const int ipx = (ix + 1) % nx, imx = (ix + nx - 1) % nx;
      const cplx d0x = (in[sp(ipx, iy)] - in[sp(imx, iy)]) * inv_2dx;
      w[sp(ix, iy)] = cf(ix, iy, 2) * d0x;
    }
  }
  for (int iy = 0; iy < nx; ++iy) {
    const int jpy = (iy + 1) % nx, jmy = (iy + nx - 1) % nx;
    for (int ix = 0; ix < nx; ++ix) {
      acc[sp(ix, iy)] -= (w[sp(ix, jpy)] - w[sp(ix, jmy)]) * inv_2dx;
    }
  }
  const std::size_t np = static_cast<std::size_t>(nx) * nx;
  for (std::size_t p = 0; p < np; ++p) out[p] = in[p] + dt * acc[p];
}

void step_euler_2d(const CoefficientField& A, int it, double dt,
                   std::vector<double>& slice) {
  const std::size_t np = slice.size();
  std::vector<cplx> rhs(np), x(np);
  for (std::size_t p = 0; p < np; ++p) {
    rhs[p] = cplx(slice[p], 0.0);
    x[p] = rhs[p];
  }
  LinearMap Aop = [&](const cplx* in, cplx* out) {
    apply_slice_2d(A, it, dt, in, out);
  };
  GmresOptions opts;
  opts.tol = 1e-13;
  opts.max_iter = 600;
  opts.restart = 60;
  GmresResult res = gmres_solve(np, Aop, LinearMap(), rhs.data(), x.data(), opts);
  if (!res.converged) {
    throw NumericalError(
        "fundamental_solution_column: implicit step solve stalled at relative "
        "residual " + std::to_string(res.residual),
        res.residual);
  }
  for (std::size_t p = 0; p < np; ++p) slice[p] = x[p].real();
}

}  // namespace

KernelColumn fundamental_solution_column(const ParabolicOperator& op,
                                         int source_ix, int source_iy,
                                         int source_it, double t_horizon) {
  const CoefficientField& A = op.coeffs();
  const Grid& g = op.grid();
  require_real(A, "fundamental_solution_column");
  if (source_ix < 0 || source_ix >= g.nx || source_it < 0 ||
      source_it >= g.nt ||
      (g.spatial_dims == 2 && (source_iy < 0 || source_iy >= g.nx))) {
    throw InvalidArgumentError("fundamental_solution_column: source off grid");
  }
  const double dt = g.dt();
  const long nsteps = std::lround(t_horizon / dt);
  if (nsteps < 1 || std::abs(nsteps * dt - t_horizon) > 1e-9 * dt) {
    throw InvalidArgumentError(
        "fundamental_solution_column: t_horizon must be a positive multiple "
        "of dt");
  }
  if (source_it + nsteps > g.nt - 1) {
    throw InvalidArgumentError(
        "fundamental_solution_column: horizon wraps around the time period");
  }

  KernelColumn col;
  col.source_ix = source_ix;
  col.source_iy = g.spatial_dims == 2 ? source_iy : 0;
  col.source_it = source_it;
  col.t_horizon = static_cast<double>(nsteps) * dt;
  col.scheme = KernelScheme::implicit_euler;
  col.values = Field(g);

  const std::size_t np = g.spatial_points();
  std::vector<double> slice(np, 0.0);
  const double amp = g.spatial_dims == 1 ? 1.0 / g.dx() : 1.0 / (g.dx() * g.dx());
  const std::size_t src_sp =
      g.spatial_dims == 1
          ? static_cast<std::size_t>(source_ix)
          : static_cast<std::size_t>(source_iy) * g.nx + source_ix;
  slice[src_sp] = amp;

  auto store_row = [&](int it) {
    cplx* row = col.values.values.data() + static_cast<std::size_t>(it) * np;
    for (std::size_t p = 0; p < np; ++p) row[p] = cplx(slice[p], 0.0);
  };
  store_row(source_it);

  const double mass0 = amp > 0.0 ? 1.0 : 0.0;  // total integral of the delta
  const double k = dt / (g.dx() * g.dx());
  std::vector<double> af(static_cast<std::size_t>(g.nx));
  for (long step = 1; step <= nsteps; ++step) {
    const int it = source_it + static_cast<int>(step);
    if (g.spatial_dims == 1) {
      const std::size_t base = g.index1(0, it);
      for (int ix = 0; ix < g.nx; ++ix) {
        const int ip = (ix + 1) % g.nx;
        af[static_cast<std::size_t>(ix)] =
            0.5 * (A.entries[base + ix].real() + A.entries[base + ip].real());
      }
      step_euler_1d(af, k, slice);
    } else {
      step_euler_2d(A, it, dt, slice);
    }
    double mass = 0.0;
    for (double v : slice) mass += v;
    mass *= std::pow(g.dx(), g.spatial_dims);
    if (std::abs(mass - mass0) > 1e-8 * std::max(1.0, mass0)) {
      throw NumericalError(
          "fundamental_solution_column: mass drifted to " +
              std::to_string(mass) + " at step " + std::to_string(step),
          mass - mass0);
    }
    store_row(it);
  }
  return col;
}

KernelColumn resolvent_kernel(const ParabolicOperator& op, double sigma, int m,
                              int source_ix, int source_iy, int source_it) {
  const Grid& g = op.grid();
  require_real(op.coeffs(), "resolvent_kernel");
  if (!(sigma > 0.0) || m < 1) {
    throw InvalidArgumentError("resolvent_kernel: need sigma > 0 and m >= 1");
  }
  if (source_ix < 0 || source_ix >= g.nx || source_it < 0 ||
      source_it >= g.nt ||
      (g.spatial_dims == 2 && (source_iy < 0 || source_iy >= g.nx))) {
    throw InvalidArgumentError("resolvent_kernel: source off grid");
  }

  Field delta(g);
  const std::size_t flat =
      g.spatial_dims == 1
          ? g.index1(source_ix, source_it)
          : g.index2(source_ix, source_iy, source_it);
  delta.values[flat] = cplx(1.0 / g.cell_measure(), 0.0);

  Field v = std::move(delta);
  for (int j = 0; j < m; ++j) {
    Field next = op.resolvent(sigma, v);
    next *= cplx(sigma, 0.0);
    v = std::move(next);
  }
  // Causal mask: rows strictly before the source time; their content is the
  // torus wrap e^{-sigma (Lt - ...)} of the future.
  const std::size_t np = g.spatial_points();
  for (int it = 0; it < source_it; ++it) {
    cplx* row = v.values.data() + static_cast<std::size_t>(it) * np;
    std::fill(row, row + np, cplx(0.0));
  }

  KernelColumn col;
  col.source_ix = source_ix;
  col.source_iy = g.spatial_dims == 2 ? source_iy : 0;
  col.source_it = source_it;
  col.t_horizon = (g.nt - 1 - source_it) * g.dt();
  col.scheme = KernelScheme::spectral_resolvent;
  col.values = std::move(v);
  return col;
}

Field apply_kernel_torus(const KernelColumn& col, const Field& u) {
  require_same_grid(col.values, u);
  const Grid& g = u.grid;
  // The column samples K(x - y, t - s) at offsets from the source; shift so
  // index 0 holds zero offset, then convolve circularly.
  Field shifted(g);
  const std::size_t np = g.spatial_points();
  for (int it = 0; it < g.nt; ++it) {
    const int ot = (it + col.source_it) % g.nt;
    for (int iy = 0; iy < (g.spatial_dims == 2 ? g.nx : 1); ++iy) {
      const int oy = (iy + col.source_iy) % g.nx;
      for (int ix = 0; ix < g.nx; ++ix) {
        const int ox = (ix + col.source_ix) % g.nx;
        const std::size_t to =
            static_cast<std::size_t>(it) * np +
            static_cast<std::size_t>(g.spatial_dims == 2 ? iy * g.nx + ix : ix);
        const std::size_t from =
            static_cast<std::size_t>(ot) * np +
            static_cast<std::size_t>(g.spatial_dims == 2 ? oy * g.nx + ox : ox);
        shifted.values[to] = col.values.values[from];
      }
    }
  }
  std::vector<cplx> khat = fft_forward(shifted);
  std::vector<cplx> uhat = fft_forward(u);
  for (std::size_t i = 0; i < khat.size(); ++i) khat[i] *= uhat[i];
  Field out = fft_inverse(g, khat);
  out *= cplx(g.cell_measure(), 0.0);
  return out;
}

double kernel_slice_mass(const KernelColumn& col, int it) {
  const Grid& g = col.values.grid;
  if (it < 0 || it >= g.nt) {
    throw InvalidArgumentError("kernel_slice_mass: time row off grid");
  }
  const std::size_t np = g.spatial_points();
  const cplx* row = col.values.values.data() + static_cast<std::size_t>(it) * np;
  double acc = 0.0;
  for (std::size_t p = 0; p < np; ++p) acc += row[p].real();
  return acc * std::pow(g.dx(), g.spatial_dims);
}

double kernel_total_mass(const KernelColumn& col) {
  const Grid& g = col.values.grid;
  double acc = 0.0;
  for (const cplx& v : col.values.values) acc += v.real();
  return acc * g.cell_measure();
}

GaussianFitReport gaussian_bound_fit(const KernelColumn& col, double t_min,
                                     double t_max, double radius_factor) {
  const Grid& g = col.values.grid;
  const double dt = g.dt();
  const double dx = g.dx();
  const int n = g.spatial_dims;
  const std::size_t np = g.spatial_points();

  auto perdist = [&](int i, int i0) {
    double d = std::abs(i - i0) * dx;
    return std::min(d, g.Lx - d);
  };

  // Gather (X = |x-y|^2/t, log K) samples with one intercept per slice.
  std::vector<std::vector<double>> Xs, Ys;
  std::vector<double> slice_t;
  for (int it = col.source_it + 1; it < g.nt; ++it) {
    const double t = (it - col.source_it) * dt;
    if (t < t_min || t > t_max) continue;
    const double rad = radius_factor * std::sqrt(t);
    std::vector<double> xr, yr;
    const cplx* row = col.values.values.data() + static_cast<std::size_t>(it) * np;
    for (std::size_t p = 0; p < np; ++p) {
      double dist2;
      if (n == 1) {
        const double d = perdist(static_cast<int>(p), col.source_ix);
        dist2 = d * d;
      } else {
        const int ix = static_cast<int>(p % g.nx);
        const int iy = static_cast<int>(p / g.nx);
        const double ddx = perdist(ix, col.source_ix);
        const double ddy = perdist(iy, col.source_iy);
        dist2 = ddx * ddx + ddy * ddy;
      }
      if (dist2 > rad * rad) continue;
      const double v = row[p].real();
      if (!(v > 0.0)) continue;
      xr.push_back(dist2 / t);
      yr.push_back(std::log(v));
    }
    if (xr.size() < 5) continue;
    Xs.push_back(std::move(xr));
    Ys.push_back(std::move(yr));
    slice_t.push_back(t);
  }
  const int nsl = static_cast<int>(Xs.size());
  if (nsl < 2) {
    throw NumericalError(
        "gaussian_bound_fit: fewer than two usable time slices (degenerate "
        "fit)",
        nsl);
  }

  // Normal equations of the pooled regression: column 0 is -X (so the slope
  // solves for +c), columns 1..nsl are the per-slice intercept indicators.
  Eigen::MatrixXd AtA = Eigen::MatrixXd::Zero(nsl + 1, nsl + 1);
  Eigen::VectorXd Aty = Eigen::VectorXd::Zero(nsl + 1);
  int ntot = 0;
  for (int i = 0; i < nsl; ++i) {
    const auto& xr = Xs[static_cast<std::size_t>(i)];
    const auto& yr = Ys[static_cast<std::size_t>(i)];
    for (std::size_t q = 0; q < xr.size(); ++q) {
      AtA(0, 0) += xr[q] * xr[q];
      AtA(0, i + 1) -= xr[q];
      AtA(i + 1, 0) -= xr[q];
      Aty(0) -= xr[q] * yr[q];
      Aty(i + 1) += yr[q];
    }
    AtA(i + 1, i + 1) = static_cast<double>(xr.size());
    ntot += static_cast<int>(xr.size());
  }
  Eigen::VectorXd sol = AtA.ldlt().solve(Aty);
  const double c = sol(0);

  // Tight envelope amplitude over the sampled points:
  // C = sup K t^{n/2} e^{c X}.
  double logC = -1e300;
  for (int i = 0; i < nsl; ++i) {
    const double halfnlogt = 0.5 * n * std::log(slice_t[static_cast<std::size_t>(i)]);
    const auto& xr = Xs[static_cast<std::size_t>(i)];
    const auto& yr = Ys[static_cast<std::size_t>(i)];
    for (std::size_t q = 0; q < xr.size(); ++q) {
      logC = std::max(logC, yr[q] + c * xr[q] + halfnlogt);
    }
  }

  GaussianFitReport rep;
  rep.c = c;
  rep.C = std::exp(logC);
  rep.slices = nsl;
  rep.points = ntot;
  rep.violations = 0;
  for (int i = 0; i < nsl; ++i) {
    const double halfnlogt = 0.5 * n * std::log(slice_t[static_cast<std::size_t>(i)]);
    const auto& xr = Xs[static_cast<std::size_t>(i)];
    const auto& yr = Ys[static_cast<std::size_t>(i)];
    for (std::size_t q = 0; q < xr.size(); ++q) {
      if (yr[q] > logC - c * xr[q] - halfnlogt + 1e-12) ++rep.violations;
    }
  }
  rep.dominated_fraction =
      ntot > 0 ? 1.0 - static_cast<double>(rep.violations) / ntot : 0.0;
  return rep;
}

double yosida_series_kernel_check(const ParabolicOperator& op, double sigma,
                                  double r, const Field& u) {
  const Grid& g = op.grid();
  if (g.size() > 4096) {
    throw InvalidArgumentError(
        "yosida_series_kernel_check: grid too large to materialize kernels");
  }
  if (u.grid != g) {
    throw GridMismatchError("yosida_series_kernel_check: grid mismatch");
  }
  if (!(sigma > 0.0) || !(r >= 0.0)) {
    throw InvalidArgumentError("yosida_series_kernel_check: need sigma > 0, r >= 0");
  }
  if (!op.coeffs().is_constant()) {
    throw InvalidArgumentError(
        "yosida_series_kernel_check: single-column convolution requires "
        "constant coefficients");
  }

  YosidaConfig cfg;
  cfg.sigma = sigma;
  const Field chain = semigroup_apply(op, cfg, r, u);

  // Independent accumulation: Poisson-weighted powers of the materialized
  // m = 1 kernel, composed spectrally (iterated space-time convolution).
  const KernelColumn k1 = resolvent_kernel(op, sigma, 1, 0, 0, 0);
  std::vector<cplx> khat = fft_forward(k1.values);
  const double cm = g.cell_measure();
  for (cplx& v : khat) v *= cm;  // convolution against a unit-mass density

  const PoissonWindow win = poisson_window(sigma * r, cfg.poisson_tail_tol,
                                           cfg.max_terms);
  std::vector<cplx> uhat = fft_forward(u);
  std::vector<cplx> acc(uhat.size(), cplx(0.0));
  std::vector<cplx> pw = uhat;  // khat^m applied to uhat, starting at m = 0
  for (long mm = 0; mm <= win.hi; ++mm) {
    if (mm > 0) {
      for (std::size_t i = 0; i < pw.size(); ++i) pw[i] *= khat[i];
    }
    if (mm >= win.lo) {
      const double w = win.weights[static_cast<std::size_t>(mm - win.lo)];
      for (std::size_t i = 0; i < pw.size(); ++i) acc[i] += w * pw[i];
    }
  }
  const Field series = fft_inverse(g, acc);

  double disc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    disc = std::max(disc, std::abs(series.values[i] - chain.values[i]));
  }

  const double sup_u = linf_norm(u);
  const double sup_s = linf_norm(chain);
  if (sup_s > sup_u * (1.0 + 1e-8) + 10.0 * cfg.poisson_tail_tol * sup_u) {
    throw NumericalError(
        "yosida_series_kernel_check: sup-norm contraction violated (" +
            std::to_string(sup_s) + " > " + std::to_string(sup_u) + ")",
        sup_s - sup_u);
  }
  return disc;
}

double chapman_kolmogorov_defect(const CoefficientField& A, int source_ix,
                                 double t1, double t2, double dt) {
  const Grid& g = A.grid;
  if (g.spatial_dims != 1) {
    throw InvalidArgumentError("chapman_kolmogorov_defect: 1-D only");
  }
  require_real(A, "chapman_kolmogorov_defect");
  if (!(0.0 < t1 && t1 < t2) || !(dt > 0.0)) {
    throw InvalidArgumentError("chapman_kolmogorov_defect: need 0 < t1 < t2, dt > 0");
  }
  const long n2 = std::lround(t2 / dt);
  const long nh = std::lround(t1 / (0.5 * dt));
  if (std::abs(n2 * dt - t2) > 1e-9 * dt ||
      std::abs(nh * 0.5 * dt - t1) > 1e-9 * dt) {
    throw InvalidArgumentError(
        "chapman_kolmogorov_defect: t1, t2 must be multiples of dt");
  }
  if (std::lround((t2 - t1) / t1) != 1) {
    throw InvalidArgumentError(
        "chapman_kolmogorov_defect: expects t2 = 2 t1 (two equal intervals)");
  }

  const int nx = g.nx;
  const double dx = g.dx();
  std::vector<double> af(static_cast<std::size_t>(nx));
  for (int ix = 0; ix < nx; ++ix) {  // coefficients frozen at time row 0
    const int ip = (ix + 1) % nx;
    af[static_cast<std::size_t>(ix)] =
        0.5 * (A.entries[static_cast<std::size_t>(ix)].real() +
               A.entries[static_cast<std::size_t>(ip)].real());
  }

  // Direct column at step dt.
  std::vector<double> direct(static_cast<std::size_t>(nx), 0.0);
  direct[static_cast<std::size_t>(source_ix)] = 1.0 / dx;
  const double kd = dt / (dx * dx);
  for (long s = 0; s < n2; ++s) step_euler_1d(af, kd, direct);

  // One half-interval kernel matrix at step dt/2: column z holds the delta
  // propagated from z over t1.
  const double kh = 0.5 * dt / (dx * dx);
  std::vector<std::vector<double>> M(
      static_cast<std::size_t>(nx),
      std::vector<double>(static_cast<std::size_t>(nx), 0.0));
  for (int z = 0; z < nx; ++z) {
    std::vector<double>& colz = M[static_cast<std::size_t>(z)];
    colz[static_cast<std::size_t>(z)] = 1.0 / dx;
    for (long s = 0; s < nh; ++s) step_euler_1d(af, kh, colz);
  }
  // Composition: int K(x, t2, z, t1) K(z, t1, y, 0) dz.
  std::vector<double> composed(static_cast<std::size_t>(nx), 0.0);
  for (int z = 0; z < nx; ++z) {
    const double kz = M[static_cast<std::size_t>(source_ix)]
                       [static_cast<std::size_t>(z)];
    const std::vector<double>& colz = M[static_cast<std::size_t>(z)];
    for (int x = 0; x < nx; ++x) {
      composed[static_cast<std::size_t>(x)] +=
          colz[static_cast<std::size_t>(x)] * kz * dx;
    }
  }

  double defect = 0.0;
  for (int x = 0; x < nx; ++x) {
    defect = std::max(defect, std::abs(direct[static_cast<std::size_t>(x)] -
                                       composed[static_cast<std::size_t>(x)]));
  }
  return defect;
}

void write_kernel_column(const std::string& dir, const KernelColumn& col,
                         const std::string& config_digest) {
  std::filesystem::create_directories(dir);
  std::ostringstream manifest;
  manifest << "fracpar-kernel 1\n";
  manifest << "scheme = "
           << (col.scheme == KernelScheme::implicit_euler ? "implicit_euler"
                                                          : "spectral_resolvent")
           << "\n";
  manifest << "source_ix = " << col.source_ix << "\n";
  manifest << "source_iy = " << col.source_iy << "\n";
  manifest << "source_it = " << col.source_it << "\n";
  manifest << "t_horizon = " << format_double(col.t_horizon) << "\n";
  manifest << "digest = " << config_digest << "\n";
  manifest << "values = column.f64\n";
  write_field_fracpar1(dir + "/column.f64", col.values);
  write_text_file(dir + "/manifest.txt", manifest.str());
}

}  // namespace fracpar
