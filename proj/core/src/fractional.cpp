#include "fracpar/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fracpar/fft.hpp"
#include "fracpar/parallel.hpp"
#include "fracpar/quadrature.hpp"
#include "fracpar/special.hpp"
#include "fracpar/spectral.hpp"

namespace fracpar {

namespace {

void check_s_range(double s) {
  if (!(s >= 0.01 && s <= 0.99)) {
    throw InvalidArgumentError(
        "fractional power: s must lie in [0.01, 0.99]; the weight "
        "lambda^{s-1} / r^{-s-1} quadrature degenerates outside");
  }
}

// Sums precomputed per-node contributions in node order, independent of how
// many workers produced them.
Field ordered_sum(std::vector<Field>& parts, const Grid& g) {
  Field out(g);
  for (Field& p : parts) out += p;
  return out;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (node_count < 16) {
    throw InvalidArgumentError("QuadratureSpec: node_count must be >= 16");
  }
  if (!(target_tol > 0.0)) {
    throw InvalidArgumentError("QuadratureSpec: target_tol must be positive");
  }
  if (scheme == QuadratureScheme::log_trapezoid && !(upper > lower)) {
    throw InvalidArgumentError(
        "QuadratureSpec: log-trapezoid needs upper > lower");
  }
}

QuadratureSpec QuadratureSpec::balakrishnan_default() {
  return {QuadratureScheme::log_trapezoid, 200, -30.0, 30.0, 1e-6};
}

QuadratureSpec QuadratureSpec::balakrishnan_jacobi() {
  return {QuadratureScheme::gauss_jacobi, 32, 0.0, 1.0, 1e-6};
}

QuadratureSpec QuadratureSpec::semigroup_default() {
  return {QuadratureScheme::log_trapezoid, 39, std::log(1e-3), std::log(12.0),
          1e-4};
}

double cs_constant(double s) {
  if (!(s > 0.0 && s < 1.0)) {
    throw InvalidArgumentError("cs_constant: s must lie in (0, 1)");
  }
  return std::exp2(1.0 - 2.0 * s) * std::tgamma(1.0 - s) / std::tgamma(s);
}

double graph_norm(const Field& u, const Field& hs_u) {
  require_same_grid(u, hs_u);
  return l2_norm(u) + l2_norm(hs_u);
}

Field hs_fourier(const Field& u, double s, const CoefficientField& A) {
  if (u.grid != A.grid) {
    throw GridMismatchError("hs_fourier: field and coefficient grids differ");
  }
  if (!(s > 0.0 && s <= 1.0)) {
    throw InvalidArgumentError("hs_fourier: s must lie in (0, 1]");
  }
  if (!A.is_constant()) {
    throw InvalidArgumentError(
        "hs_fourier: exact Fourier route requires constant coefficients");
  }
  require_finite(u, "hs_fourier");

  const Grid& g = u.grid;
  const std::array<cplx, 4> a = A.mean();  // equals the constant entries
  const std::vector<double> gsym = flux_symbol(g);
  const std::vector<double> tau = tau_values(g);
  std::vector<double> ssym(g.nx);
  for (int k = 0; k < g.nx; ++k) {
    ssym[k] = std::sin(2.0 * std::numbers::pi * k / g.nx) / g.dx();
  }

  auto spatial = [&](int ix, int iy) -> cplx {
    if (g.spatial_dims == 1) return a[0] * gsym[ix];
    return a[0] * gsym[ix] + a[3] * gsym[iy] +
           (a[1] + a[2]) * (ssym[ix] * ssym[iy]);
  };

  // Guard the branch cut: the symbol must stay in the closed right half-plane.
  double worst = 0.0;
  for (int iy = 0; iy < (g.spatial_dims == 2 ? g.nx : 1); ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      worst = std::min(worst, spatial(ix, iy).real());
    }
  }
  if (worst < -1e-10 * (1.0 + std::abs(a[0]))) {
    throw InvalidArgumentError(
        "hs_fourier: coefficient symbol leaves the right half-plane "
        "(non-accretive constant matrix)");
  }

  const std::size_t N = g.size();
  std::vector<cplx> hat(N);
  fft_forward(g, u.values.data(), hat.data());
  if (g.spatial_dims == 1) {
    for (int it = 0; it < g.nt; ++it) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const cplx z = spatial(ix, 0) + cplx(0.0, tau[it]);
        cplx& c = hat[g.index1(ix, it)];
        c = (z == cplx(0.0)) ? cplx(0.0) : std::pow(z, s) * c;
      }
    }
  } else {
    for (int it = 0; it < g.nt; ++it) {
      for (int iy = 0; iy < g.nx; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
          const cplx z = spatial(ix, iy) + cplx(0.0, tau[it]);
          cplx& c = hat[g.index2(ix, iy, it)];
          c = (z == cplx(0.0)) ? cplx(0.0) : std::pow(z, s) * c;
        }
      }
    }
  }
  Field out(g);
  fft_inverse(g, hat.data(), out.values.data());
  return out;
}

Field hs_balakrishnan(const ParabolicOperator& op, const Field& u, double s,
                      const QuadratureSpec& quad) {
  check_s_range(s);
  quad.validate();
  if (u.grid != op.grid()) {
    throw GridMismatchError("hs_balakrishnan: field grid differs from operator");
  }
  require_finite(u, "hs_balakrishnan");

  const Grid& g = u.grid;
  Field Hu = op.apply(u);
  if (l2_norm(Hu) == 0.0) return Field(g);  // constants: H^s u = 0

  Field out(g);
  if (quad.scheme == QuadratureScheme::log_trapezoid) {
    const int n = quad.node_count;
    const double h = (quad.upper - quad.lower) / (n - 1);
    std::vector<Field> parts(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      const double y = quad.lower + h * static_cast<double>(i);
      Field v = op.resolvent(cplx(std::exp(y), 0.0), Hu);
      const double w = (i == 0 || i + 1 == static_cast<std::size_t>(n)) ? 0.5 : 1.0;
      v *= cplx(w * h * std::exp(s * y), 0.0);
      parts[i] = std::move(v);
    });
    out = ordered_sum(parts, g);
    // Geometric lattice tails: lambda -> 0 leaves (u - P0 u), lambda -> inf
    // expands into Hu - H^2 u / lambda.
    Field u0 = subtract_mean(u);
    Field H2u = op.apply(Hu);
    axpy(trapezoid_geometric_tail(s, h, -quad.lower), u0, out);
    axpy(trapezoid_geometric_tail(1.0 - s, h, quad.upper), Hu, out);
    axpy(-trapezoid_geometric_tail(2.0 - s, h, quad.upper), H2u, out);
  } else if (quad.scheme == QuadratureScheme::gauss_jacobi) {
    // Split at lambda = 1; map both halves onto (0, 1] so the endpoint weight
    // is handled exactly by the Jacobi rule.
    const int n = quad.node_count;
    const QuadratureRule lower_rule = gauss_jacobi(n, 0.0, s - 1.0);
    const QuadratureRule upper_rule = gauss_jacobi(n, 0.0, -s);
    std::vector<Field> parts(static_cast<std::size_t>(2 * n));
    parallel_for(static_cast<std::size_t>(2 * n), [&](std::size_t i) {
      if (i < static_cast<std::size_t>(n)) {
        const double lam = 0.5 * (1.0 + lower_rule.nodes[i]);
        Field v = op.resolvent(cplx(lam, 0.0), Hu);
        v *= cplx(std::exp2(-s) * lower_rule.weights[i], 0.0);
        parts[i] = std::move(v);
      } else {
        const std::size_t j = i - static_cast<std::size_t>(n);
        const double mu = 0.5 * (1.0 + upper_rule.nodes[j]);
        Field v = op.resolvent(cplx(1.0 / mu, 0.0), Hu);
        v *= cplx(std::exp2(s - 1.0) * upper_rule.weights[j] / mu, 0.0);
        parts[i] = std::move(v);
      }
    });
    out = ordered_sum(parts, g);
  } else {
    throw InvalidArgumentError(
        "hs_balakrishnan: gauss_laguerre nodes belong to the extension "
        "profile, not the resolvent integral");
  }
  out *= cplx(std::sin(s * std::numbers::pi) / std::numbers::pi, 0.0);
  return out;
}

Field hs_semigroup(const ParabolicOperator& op, const Field& u, double s,
                   YosidaConfig cfg, const QuadratureSpec& quad) {
  check_s_range(s);
  quad.validate();
  if (quad.scheme != QuadratureScheme::log_trapezoid) {
    throw InvalidArgumentError(
        "hs_semigroup: only the log-trapezoid ladder is supported");
  }
  if (u.grid != op.grid()) {
    throw GridMismatchError("hs_semigroup: field grid differs from operator");
  }
  require_finite(u, "hs_semigroup");

  const Grid& g = u.grid;
  const double nu = l2_norm(u);
  if (nu == 0.0) return Field(g);
  Field Hu = op.apply(u);
  const double nHu = l2_norm(Hu);
  if (nHu == 0.0) return Field(g);

  const double rho = nHu / nu;
  const double rmin = std::exp(quad.lower) / rho;
  const double rmax = std::exp(quad.upper) / rho;
  if (cfg.sigma == 0.0) {
    cfg.sigma = std::max({10.0 / rmin, 10.0 * op.norm_estimate(),
                          s * rho / (0.4 * quad.target_tol)});
  }
  cfg.validate();

  const int n = quad.node_count;
  const double h = (quad.upper - quad.lower) / (n - 1);
  std::vector<double> rs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rs[static_cast<std::size_t>(i)] =
        std::exp(quad.lower + h * i) / rho;
  }
  std::vector<Field> S = semigroup_apply_batch(op, cfg, rs, u);

  Field out(g);
  for (int i = 0; i < n; ++i) {
    Field d = S[static_cast<std::size_t>(i)];
    d -= u;
    const double nd = l2_norm(d);
    const double bound =
        std::min(rs[static_cast<std::size_t>(i)] * nHu, 2.0 * nu) *
            (1.0 + 1e-3) +
        10.0 * cfg.poisson_tail_tol * nu;
    if (nd > bound) {
      throw NumericalError(
          "hs_semigroup: integrand norm " + std::to_string(nd) +
              " exceeds the strong-continuity bound " + std::to_string(bound) +
              " at r = " + std::to_string(rs[static_cast<std::size_t>(i)]),
          nd);
    }
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    axpy(cplx(w * h * std::pow(rs[static_cast<std::size_t>(i)], -s), 0.0), d,
         out);
  }

  // Lattice tails: r -> 0 expands (S(r)-I)u into -r H_sigma u +
  // r^2 H_sigma^2 u / 2; r -> inf leaves -(u - P0 u).
  Field Hs1 = yosida_resolvent_step(op, cfg, Hu);
  Field Hs2 = yosida_resolvent_step(op, cfg, op.apply(Hs1));
  const double Ylo = -std::log(rmin);
  const double Yup = std::log(rmax);
  axpy(-trapezoid_geometric_tail(1.0 - s, h, Ylo), Hs1, out);
  axpy(0.5 * trapezoid_geometric_tail(2.0 - s, h, Ylo), Hs2, out);
  Field u0 = subtract_mean(u);
  axpy(-trapezoid_geometric_tail(s, h, Yup), u0, out);

  out *= cplx(1.0 / gamma_negative(s), 0.0);
  return out;
}

}  // namespace fracpar
