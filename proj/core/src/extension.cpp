#include "fracpar/extension.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>

#include "fracpar/fft.hpp"
#include "fracpar/gmres.hpp"
#include "fracpar/io.hpp"
#include "fracpar/quadrature.hpp"
#include "fracpar/rng.hpp"
#include "fracpar/special.hpp"
#include "fracpar/spectral.hpp"

namespace fracpar {

namespace {

void check_s(double s) {
  if (!(s >= 0.01 && s <= 0.99)) {
    throw InvalidArgumentError("extension: s must lie in [0.01, 0.99]");
  }
}

Field constant_field(const Grid& g, cplx v) {
  Field f(g);
  std::fill(f.values.begin(), f.values.end(), v);
  return f;
}

Field p0_projection(const Field& u) {
  return constant_field(u.grid, field_mean(u));
}

// Smallest nonzero spatial stencil symbol: with the Garding bound
// Re<Hu,u> >= c1 ||D+ u||^2 and the discrete Poincare inequality
// ||D+ u||^2 >= g_1 ||u - P0 u||^2 (both exact identities of the flux
// stencil), the semigroup of the mean-free part decays at least like
// e^{-c1 g_1 r}.
double smallest_flux_symbol(const Grid& g) {
  const double dx = g.dx();
  return 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi / g.nx)) / (dx * dx);
}

double certified_decay_radius(const ParabolicOperator& op) {
  return 34.0 / (op.coeffs().c1 * smallest_flux_symbol(op.grid()));
}

// Antiderivative of the weight |l|^{1-2s}: F(l) = sign(l) |l|^{2-2s}/(2-2s).
double weight_primitive(double l, double s) {
  const double p = 2.0 - 2.0 * s;
  return (l >= 0.0 ? 1.0 : -1.0) * std::pow(std::abs(l), p) / p;
}

// Sesquilinear time part <H_T D^{1/2} u, D^{1/2} v>, needed separately from
// ParabolicOperator::form by the traditional weak form.
cplx time_form(const Field& u, const Field& dhalf_v) {
  return l2_inner(hilbert_transform_t(half_time_derivative(u)), dhalf_v);
}

}  // namespace

double AugmentedCoefficients::weight(double lambda) const {
  return std::pow(std::abs(lambda), 1.0 - 2.0 * s);
}

AugmentedCoefficients AugmentedCoefficients::make(const CoefficientField& A,
                                                  double s) {
  if (!(s > 0.0 && s < 1.0)) {
    throw InvalidArgumentError("AugmentedCoefficients: s must lie in (0, 1)");
  }
  AugmentedCoefficients aug{A, s, 1.0};
  aug.kappa = std::max({1.0 / A.c1, A.c2, 1.0});
  return aug;
}

bool AugmentedCoefficients::check_ellipticity(int random_samples,
                                              std::uint64_t seed) const {
  const int n = base.n();
  const int dim = n + 1;
  Lcg rng(seed);
  const double slack = 1e-10;
  for (std::size_t p = 0; p < base.grid.size(); ++p) {
    for (int trial = 0; trial < random_samples + dim; ++trial) {
      std::array<cplx, 3> v{};
      if (trial < dim) {
        v[static_cast<std::size_t>(trial)] = cplx(1.0, 0.0);
      } else {
        for (int k = 0; k < dim; ++k) v[static_cast<std::size_t>(k)] = rng.coeff();
      }
      double norm2 = 0.0;
      for (int k = 0; k < dim; ++k) norm2 += std::norm(v[static_cast<std::size_t>(k)]);
      if (norm2 == 0.0) continue;
      // B v = (v0, A v_x)
      std::array<cplx, 3> Bv{};
      Bv[0] = v[0];
      if (n == 1) {
        Bv[1] = base.entries[p] * v[1];
      } else {
        Bv[1] = base.entries[p * 4 + 0] * v[1] + base.entries[p * 4 + 1] * v[2];
        Bv[2] = base.entries[p * 4 + 2] * v[1] + base.entries[p * 4 + 3] * v[2];
      }
      cplx form(0.0);
      double bnorm2 = 0.0;
      for (int k = 0; k < dim; ++k) {
        form += Bv[static_cast<std::size_t>(k)] * std::conj(v[static_cast<std::size_t>(k)]);
        bnorm2 += std::norm(Bv[static_cast<std::size_t>(k)]);
      }
      if (form.real() < norm2 / kappa - slack * norm2) return false;
      if (bnorm2 > kappa * kappa * norm2 * (1.0 + slack)) return false;
    }
  }
  return true;
}

std::vector<double> default_lambda_ladder(double lambda_max) {
  if (!(lambda_max > 1e-3)) {
    throw InvalidArgumentError("default_lambda_ladder: lambda_max must exceed 1e-3");
  }
  std::vector<double> out{1e-3};
  const double ratio = std::sqrt(2.0);
  while (out.back() * ratio < lambda_max * (1.0 - 1e-12)) {
    out.push_back(out.back() * ratio);
  }
  out.push_back(lambda_max);
  return out;
}

QuadratureSpec extension_quadrature_default() {
  return {QuadratureScheme::gauss_laguerre, 32, 0.0, 0.0, 1e-3};
}

QuadratureSpec dtn_quadrature_default() {
  return {QuadratureScheme::log_trapezoid, 80, std::log(1e-3), std::log(12.0),
          2e-4};
}

ExtensionProfile extension_profile(const ParabolicOperator& op, const Field& u,
                                   double s, const std::vector<double>& lambdas,
                                   YosidaConfig cfg, const QuadratureSpec& quad) {
  check_s(s);
  quad.validate();
  if (quad.scheme != QuadratureScheme::gauss_laguerre) {
    throw InvalidArgumentError(
        "extension_profile: the substituted integral uses gauss_laguerre nodes");
  }
  if (u.grid != op.grid()) {
    throw GridMismatchError("extension_profile: field grid differs from operator");
  }
  require_finite(u, "extension_profile");
  if (lambdas.empty()) {
    throw InvalidArgumentError("extension_profile: empty lambda ladder");
  }
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    if (!(lambdas[j] > 0.0) ||
        (j > 0 && !(lambdas[j] > lambdas[j - 1]))) {
      throw InvalidArgumentError(
          "extension_profile: lambdas must be strictly increasing and positive");
    }
  }

  const Grid& g = u.grid;
  const double nu = l2_norm(u);
  Field Hu = op.apply(u);
  const double rho = nu > 0.0 ? l2_norm(Hu) / nu : 0.0;
  if (cfg.sigma == 0.0) {
    cfg.sigma = std::max(10.0 * op.norm_estimate(), 0.1 * rho / quad.target_tol);
  }
  cfg.validate();

  const QuadratureRule rule = gauss_laguerre(quad.node_count, s - 1.0);
  const double r_big = certified_decay_radius(op);

  const std::size_t nl = lambdas.size();
  const std::size_t nn = rule.nodes.size();
  std::vector<double> rs;
  std::vector<long> slot(nl * nn, -1);
  rs.reserve(nl * nn);
  for (std::size_t j = 0; j < nl; ++j) {
    for (std::size_t i = 0; i < nn; ++i) {
      const double r = lambdas[j] * lambdas[j] / (4.0 * rule.nodes[i]);
      if (r <= r_big) {
        slot[j * nn + i] = static_cast<long>(rs.size());
        rs.push_back(r);
      }
    }
  }
  const std::vector<Field> S = semigroup_apply_batch(op, cfg, rs, u);
  const Field p0 = p0_projection(u);

  ExtensionProfile prof;
  prof.s = s;
  prof.lambdas = lambdas;
  prof.source = u;
  prof.slices.reserve(nl);
  const double gs = std::tgamma(s);
  for (std::size_t j = 0; j < nl; ++j) {
    Field slice(g);
    for (std::size_t i = 0; i < nn; ++i) {
      const long q = slot[j * nn + i];
      const Field& term = q >= 0 ? S[static_cast<std::size_t>(q)] : p0;
      axpy(cplx(rule.weights[i] / gs, 0.0), term, slice);
    }
    const double ns = l2_norm(slice);
    if (ns > nu * (1.0 + 1e-4) + 10.0 * cfg.poisson_tail_tol * nu) {
      throw NumericalError(
          "extension_profile: slice norm " + std::to_string(ns) +
              " at lambda = " + std::to_string(lambdas[j]) +
              " violates the contraction average " + std::to_string(nu),
          ns);
    }
    prof.slices.push_back(std::move(slice));
  }
  return prof;
}

std::vector<DtnLadder> dtn_ladder_multi(const ParabolicOperator& op,
                                        const Field& u,
                                        const std::vector<double>& ss,
                                        YosidaConfig cfg, QuadratureSpec quad) {
  for (double s : ss) check_s(s);
  quad.validate();
  if (quad.scheme != QuadratureScheme::log_trapezoid) {
    throw InvalidArgumentError(
        "dtn_limit: the mollified ladder uses the log-trapezoid scheme");
  }
  if (u.grid != op.grid()) {
    throw GridMismatchError("dtn_limit: field grid differs from operator");
  }
  require_finite(u, "dtn_limit");
  if (ss.empty()) return {};

  constexpr int kRungs = 5;
  const Grid& g = u.grid;
  const double nu = l2_norm(u);
  auto zero_ladders = [&] {
    std::vector<DtnLadder> zs;
    for (double s : ss) {
      DtnLadder lad;
      lad.s = s;
      for (int j = 0; j < kRungs; ++j) {
        lad.lambdas.push_back(0.2 * std::exp2(-double(j)));
        lad.rungs.emplace_back(g);
      }
      lad.extrapolated = Field(g);
      zs.push_back(std::move(lad));
    }
    return zs;
  };
  std::vector<DtnLadder> out;
  if (nu == 0.0) return zero_ladders();
  Field Hu = op.apply(u);
  const double nHu = l2_norm(Hu);
  if (nHu == 0.0) {  // constants: the profile is constant in lambda
    return zero_ladders();
  }

  const double rho = nHu / nu;
  const double rmin = std::exp(quad.lower) / rho;
  const double rmax = std::exp(quad.upper) / rho;
  if (cfg.sigma == 0.0) {
    const double smax = *std::max_element(ss.begin(), ss.end());
    cfg.sigma = std::max({10.0 / rmin, 10.0 * op.norm_estimate(),
                          smax * rho / (0.4 * quad.target_tol)});
  }
  cfg.validate();

  const int n = quad.node_count;
  const double h = (quad.upper - quad.lower) / (n - 1);
  std::vector<double> rs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rs[static_cast<std::size_t>(i)] = std::exp(quad.lower + h * i) / rho;
  }
  std::vector<Field> diff = semigroup_apply_batch(op, cfg, rs, u);
  for (Field& d : diff) {  // turn S(r)u into u - S(r)u
    Field t = u;
    t -= d;
    d = std::move(t);
  }
  Field Hs1 = yosida_resolvent_step(op, cfg, Hu);
  Field Hs2 = yosida_resolvent_step(op, cfg, op.apply(Hs1));
  Field u0 = subtract_mean(u);

  out.reserve(ss.size());
  for (double s : ss) {
    std::vector<Field> D;
    D.reserve(kRungs);
    for (int j = 0; j < kRungs; ++j) {
      const double lam = 0.2 * std::exp2(-double(j));
      const double a = 0.25 * lam * lam;
      Field acc(g);
      for (int i = 0; i < n; ++i) {
        const double r = rs[static_cast<std::size_t>(i)];
        const double w = ((i == 0 || i == n - 1) ? 0.5 : 1.0) * h *
                         std::pow(r, -s) * std::exp(-a / r);
        axpy(cplx(w, 0.0), diff[static_cast<std::size_t>(i)], acc);
      }
      // Exact sub-r_min remainder: Int_0^{rmin} r^{-s-1+k} e^{-a/r} dr =
      // a^{k-s} Gamma(s-k, a/rmin) for the k = 1, 2 Taylor terms of
      // (I - S_sigma(r)) u.
      axpy(cplx(std::pow(a, 1.0 - s) *
                    upper_incomplete_gamma(s - 1.0, a / rmin),
                0.0),
           Hs1, acc);
      axpy(cplx(-0.5 * std::pow(a, 2.0 - s) *
                    upper_incomplete_gamma(s - 2.0, a / rmin),
                0.0),
           Hs2, acc);
      axpy(cplx(trapezoid_geometric_tail(s, h, std::log(rmax)), 0.0), u0, acc);
      acc *= cplx(std::pow(4.0, -s) / std::tgamma(s), 0.0);

      const double nd = l2_norm(acc);
      const double bound =
          1.5 * (nu + nHu * std::max(1.0, std::pow(lam, 2.0 - 2.0 * s)));
      if (nd > bound) {
        throw NumericalError(
            "dtn_limit: rung at lambda = " + std::to_string(lam) +
                " violates the flux bound (" + std::to_string(nd) + " > " +
                std::to_string(bound) + ")",
            nd);
      }
      D.push_back(std::move(acc));
    }

    // Cauchy control of the ladder before extrapolating.
    Field d01 = D[1] - D[0];
    Field d34 = D[4] - D[3];
    const double q0 = l2_norm(d01);
    const double q3 = l2_norm(d34);
    if (q3 > q0 && q3 > 1e-12 * l2_norm(D[4])) {
      throw NumericalError(
          "dtn_limit: difference-quotient ladder is not contracting (first "
          "gap " + std::to_string(q0) + ", last gap " + std::to_string(q3) +
              ")",
          q3);
    }

    // Richardson at the boundary-layer order 2 - 2s, then at order 2.
    const double c1r = std::exp2(-(2.0 - 2.0 * s));
    std::vector<Field> r1;
    r1.reserve(kRungs - 1);
    for (int j = 0; j + 1 < kRungs; ++j) {
      Field t = D[static_cast<std::size_t>(j + 1)];
      axpy(cplx(-c1r, 0.0), D[static_cast<std::size_t>(j)], t);
      t *= cplx(1.0 / (1.0 - c1r), 0.0);
      r1.push_back(std::move(t));
    }
    std::vector<Field> r2;
    r2.reserve(r1.size() - 1);
    for (std::size_t j = 0; j + 1 < r1.size(); ++j) {
      Field t = r1[j + 1];
      axpy(cplx(-0.25, 0.0), r1[j], t);
      t *= cplx(1.0 / 0.75, 0.0);
      r2.push_back(std::move(t));
    }
    Field best = std::move(r2.back());
    best *= cplx(2.0 * s, 0.0);

    DtnLadder lad;
    lad.s = s;
    for (int j = 0; j < kRungs; ++j) {
      lad.lambdas.push_back(0.2 * std::exp2(-double(j)));
      Field rung = std::move(D[static_cast<std::size_t>(j)]);
      rung *= cplx(2.0 * s, 0.0);
      lad.rungs.push_back(std::move(rung));
    }
    lad.extrapolated = std::move(best);
    out.push_back(std::move(lad));
  }
  return out;
}

std::vector<Field> dtn_limit_multi(const ParabolicOperator& op, const Field& u,
                                   const std::vector<double>& ss,
                                   YosidaConfig cfg, QuadratureSpec quad) {
  std::vector<DtnLadder> ladders = dtn_ladder_multi(op, u, ss, cfg, quad);
  std::vector<Field> out;
  out.reserve(ladders.size());
  for (DtnLadder& lad : ladders) out.push_back(std::move(lad.extrapolated));
  return out;
}

Field dtn_limit(const ParabolicOperator& op, const Field& u, double s,
                const YosidaConfig& cfg, const QuadratureSpec& quad) {
  std::vector<Field> out = dtn_limit_multi(op, u, {s}, cfg, quad);
  return std::move(out.front());
}

TwoSidedProfile reflect_even(const ExtensionProfile& p) {
  TwoSidedProfile t;
  t.s = p.s;
  const std::size_t m = p.lambdas.size();
  t.lambdas.reserve(2 * m);
  t.slices.reserve(2 * m);
  for (std::size_t k = m; k-- > 0;) {
    t.lambdas.push_back(-p.lambdas[k]);
    t.slices.push_back(p.slices[k]);
  }
  for (std::size_t k = 0; k < m; ++k) {
    t.lambdas.push_back(p.lambdas[k]);
    t.slices.push_back(p.slices[k]);
  }
  return t;
}

double weighted_energy_norm(const TwoSidedProfile& p, double a, double b) {
  if (!(b > a)) {
    throw InvalidArgumentError("weighted_energy_norm: need b > a");
  }
  const std::size_t M = p.lambdas.size();
  std::vector<std::size_t> sel;
  for (std::size_t k = 0; k < M; ++k) {
    if (p.lambdas[k] >= a && p.lambdas[k] <= b) sel.push_back(k);
  }
  if (sel.size() < 3) {
    throw InvalidArgumentError(
        "weighted_energy_norm: fewer than 3 lambda nodes in the interval");
  }

  auto derivative_norm2 = [&](std::size_t k) {
    const std::size_t lo = k == 0 ? k : k - 1;
    const std::size_t hi = k + 1 == M ? k : k + 1;
    Field d = p.slices[hi] - p.slices[lo];
    const double dl = p.lambdas[hi] - p.lambdas[lo];
    const double nrm = l2_norm(d) / dl;
    return nrm * nrm;
  };

  std::vector<double> f(sel.size());
  for (std::size_t q = 0; q < sel.size(); ++q) {
    const std::size_t k = sel[q];
    const double e = energy_norm(p.slices[k]);
    f[q] = std::pow(std::abs(p.lambdas[k]), 1.0 - 2.0 * p.s) *
           (e * e + derivative_norm2(k));
  }
  double acc = 0.0;
  for (std::size_t q = 0; q + 1 < sel.size(); ++q) {
    acc += 0.5 * (f[q] + f[q + 1]) *
           (p.lambdas[sel[q + 1]] - p.lambdas[sel[q]]);
  }
  return std::sqrt(acc);
}

std::vector<LambdaTestFunction> default_test_bank(const TwoSidedProfile& p,
                                                  int count,
                                                  std::uint64_t seed) {
  if (p.slices.empty()) {
    throw InvalidArgumentError("default_test_bank: empty profile");
  }
  const Grid& g = p.slices.front().grid;
  const double edge = 0.8 * std::abs(p.lambdas.back());
  std::vector<LambdaTestFunction> bank;
  bank.reserve(static_cast<std::size_t>(count));
  for (int m = 0; m < count; ++m) {
    LambdaTestFunction t;
    t.lambda_factor.resize(p.lambdas.size());
    for (std::size_t k = 0; k < p.lambdas.size(); ++k) {
      const double z = p.lambdas[k] / edge;
      double bump = 0.0;
      if (std::abs(z) < 1.0) bump = std::exp(1.0 - 1.0 / (1.0 - z * z));
      t.lambda_factor[k] = (m % 2 == 0) ? bump : z * bump;
    }
    t.shape = smooth_field(g, seed + static_cast<std::uint64_t>(m), 3, 3,
                           /*mean_free=*/false);
    bank.push_back(std::move(t));
  }
  return bank;
}

WeakResidualReport weak_residual(const TwoSidedProfile& p,
                                 const ParabolicOperator& op,
                                 const std::vector<LambdaTestFunction>& tests) {
  const std::size_t M = p.lambdas.size();
  if (M < 3) {
    throw InvalidArgumentError("weak_residual: profile needs >= 3 lambda nodes");
  }
  const double s = p.s;

  // Exact weight integrals over faces (between adjacent nodes) and dual
  // cells (midpoint to midpoint, half cells at the ends).
  std::vector<double> wface(M - 1), wcell(M);
  for (std::size_t k = 0; k + 1 < M; ++k) {
    wface[k] = weight_primitive(p.lambdas[k + 1], s) -
               weight_primitive(p.lambdas[k], s);
  }
  std::vector<double> edges(M + 1);
  edges[0] = p.lambdas[0];
  edges[M] = p.lambdas[M - 1];
  for (std::size_t k = 1; k < M; ++k) {
    edges[k] = 0.5 * (p.lambdas[k - 1] + p.lambdas[k]);
  }
  for (std::size_t k = 0; k < M; ++k) {
    wcell[k] = weight_primitive(edges[k + 1], s) - weight_primitive(edges[k], s);
  }

  const double wprof =
      weighted_energy_norm(p, p.lambdas.front(), p.lambdas.back());

  WeakResidualReport rep;
  for (const LambdaTestFunction& t : tests) {
    if (t.lambda_factor.size() != M) {
      throw InvalidArgumentError(
          "weak_residual: test lambda_factor length mismatch");
    }
    if (t.lambda_factor.front() != 0.0 || t.lambda_factor.back() != 0.0) {
      throw InvalidArgumentError(
          "weak_residual: test functions must vanish at the lambda endpoints");
    }
    const Field& phi = t.shape;
    require_same_grid(p.slices.front(), phi);
    const Field dhalf_phi = half_time_derivative(phi);
    const Field dt_phi = time_derivative(phi);

    cplx reinforced(0.0);
    cplx traditional(0.0);
    // Face terms: <dU/dl, dPhi/dl> against the exact face weight.
    for (std::size_t k = 0; k + 1 < M; ++k) {
      const double db = t.lambda_factor[k + 1] - t.lambda_factor[k];
      if (db == 0.0) continue;
      const double dl = p.lambdas[k + 1] - p.lambdas[k];
      Field dU = p.slices[k + 1] - p.slices[k];
      const cplx term = wface[k] * (db / (dl * dl)) * l2_inner(dU, phi);
      reinforced += term;
      traditional += term;
    }
    // Cell terms: spatial + time forms against the exact cell weight.
    for (std::size_t k = 0; k < M; ++k) {
      const double bk = t.lambda_factor[k];
      if (bk == 0.0) continue;
      const cplx full = op.form(p.slices[k], phi);
      const cplx tpart = time_form(p.slices[k], dhalf_phi);
      reinforced += wcell[k] * bk * full;
      traditional +=
          wcell[k] * bk * (full - tpart - l2_inner(p.slices[k], dt_phi));
    }

    // Normalize by the product of weighted energies.
    TwoSidedProfile tp;
    tp.s = s;
    tp.lambdas = p.lambdas;
    tp.slices.reserve(M);
    for (std::size_t k = 0; k < M; ++k) {
      tp.slices.push_back(cplx(t.lambda_factor[k], 0.0) * phi);
    }
    const double wtest =
        weighted_energy_norm(tp, p.lambdas.front(), p.lambdas.back());
    const double denom = std::max(wprof * wtest, 1e-300);
    rep.reinforced = std::max(rep.reinforced, std::abs(reinforced) / denom);
    rep.traditional = std::max(rep.traditional, std::abs(traditional) / denom);
  }
  return rep;
}

ExtensionProfile solve_extension_bvp(const ParabolicOperator& op,
                                     const Field& u, double s,
                                     double lambda_max, int nlambda) {
  check_s(s);
  if (nlambda < 16) {
    throw InvalidArgumentError("solve_extension_bvp: nlambda must be >= 16");
  }
  if (!(lambda_max > 1e-3)) {
    throw InvalidArgumentError("solve_extension_bvp: lambda_max must exceed 1e-3");
  }
  if (u.grid != op.grid()) {
    throw GridMismatchError("solve_extension_bvp: field grid differs from operator");
  }
  require_finite(u, "solve_extension_bvp");

  const Grid& g = u.grid;
  const std::size_t N = g.size();
  const int J = nlambda;

  // Ladder 0 = l_0 < l_1 < ... < l_J, geometric from 1e-3.
  std::vector<double> lam(static_cast<std::size_t>(J) + 1);
  lam[0] = 0.0;
  for (int j = 1; j <= J; ++j) {
    lam[static_cast<std::size_t>(j)] =
        1e-3 * std::pow(lambda_max / 1e-3, double(j - 1) / double(J - 1));
  }

  // Far-field closure from the formula route, with its decay certificate.
  YosidaConfig cfg;
  ExtensionProfile farp = extension_profile(
      op, u, s, {lambda_max}, cfg, extension_quadrature_default());
  Field far = std::move(farp.slices.front());
  {
    Field udot = subtract_mean(u);
    const double nudot = l2_norm(udot);
    if (nudot > 0.0) {
      Field fdot = far - p0_projection(u);
      if (l2_norm(fdot) > 1e-6 * nudot) {
        throw NumericalError(
            "solve_extension_bvp: far-field slice has not decayed below "
            "1e-6 of the datum; increase lambda_max",
            l2_norm(fdot));
      }
    }
  }

  // Exact transmissibilities and cell weights of the degenerate flux.
  const double ts = 2.0 * s;
  std::vector<double> T(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) {
    T[static_cast<std::size_t>(j)] =
        ts / (std::pow(lam[static_cast<std::size_t>(j + 1)], ts) -
              std::pow(lam[static_cast<std::size_t>(j)], ts));
  }
  std::vector<double> faces(static_cast<std::size_t>(J) + 2);
  faces[0] = 0.0;
  faces[static_cast<std::size_t>(J) + 1] = lam[static_cast<std::size_t>(J)];
  for (int j = 1; j <= J; ++j) {
    faces[static_cast<std::size_t>(j)] =
        0.5 * (lam[static_cast<std::size_t>(j - 1)] +
               lam[static_cast<std::size_t>(j)]);
  }
  const double pw = 2.0 - 2.0 * s;
  std::vector<double> W(static_cast<std::size_t>(J) + 1);
  for (int j = 0; j <= J; ++j) {
    W[static_cast<std::size_t>(j)] =
        (std::pow(faces[static_cast<std::size_t>(j + 1)], pw) -
         std::pow(faces[static_cast<std::size_t>(j)], pw)) /
        pw;
  }

  const int ni = J - 1;  // interior unknowns l_1..l_{J-1}
  std::vector<Field> V(static_cast<std::size_t>(ni), Field(g));

  if (op.coeffs().is_constant()) {
    // Exact per-mode tridiagonal solves.
    std::vector<cplx> uh(N), fh(N);
    fft_forward(g, u.values.data(), uh.data());
    fft_forward(g, far.values.data(), fh.data());
    const std::vector<double> tau = tau_values(g);
    std::vector<std::vector<cplx>> vh(
        static_cast<std::size_t>(ni), std::vector<cplx>(N));

    std::vector<cplx> diag(static_cast<std::size_t>(ni)),
        rhs(static_cast<std::size_t>(ni)), cp(static_cast<std::size_t>(ni));
    auto solve_mode = [&](std::size_t flat, cplx z) {
      for (int i = 0; i < ni; ++i) {
        const int j = i + 1;
        diag[static_cast<std::size_t>(i)] =
            T[static_cast<std::size_t>(j - 1)] + T[static_cast<std::size_t>(j)] +
            W[static_cast<std::size_t>(j)] * z;
        rhs[static_cast<std::size_t>(i)] = cplx(0.0);
      }
      rhs[0] += T[0] * uh[flat];
      rhs[static_cast<std::size_t>(ni - 1)] +=
          T[static_cast<std::size_t>(J - 1)] * fh[flat];
      // Thomas elimination with constant off-diagonals -T[j].
      cp[0] = -T[1] / diag[0];
      rhs[0] /= diag[0];
      for (int i = 1; i < ni; ++i) {
        const cplx sub = -T[static_cast<std::size_t>(i)];  // couples to i-1
        const cplx m = diag[static_cast<std::size_t>(i)] -
                       sub * cp[static_cast<std::size_t>(i - 1)];
        if (i < ni - 1) {
          cp[static_cast<std::size_t>(i)] =
              -T[static_cast<std::size_t>(i + 1)] / m;
        }
        rhs[static_cast<std::size_t>(i)] =
            (rhs[static_cast<std::size_t>(i)] -
             sub * rhs[static_cast<std::size_t>(i - 1)]) /
            m;
      }
      vh[static_cast<std::size_t>(ni - 1)][flat] =
          rhs[static_cast<std::size_t>(ni - 1)];
      for (int i = ni - 2; i >= 0; --i) {
        vh[static_cast<std::size_t>(i)][flat] =
            rhs[static_cast<std::size_t>(i)] -
            cp[static_cast<std::size_t>(i)] *
                vh[static_cast<std::size_t>(i + 1)][flat];
      }
    };

    if (g.spatial_dims == 1) {
      for (int it = 0; it < g.nt; ++it) {
        for (int ix = 0; ix < g.nx; ++ix) {
          solve_mode(g.index1(ix, it),
                     op.mean_spatial_symbol(ix, 0) + cplx(0.0, tau[it]));
        }
      }
    } else {
      for (int it = 0; it < g.nt; ++it) {
        for (int iy = 0; iy < g.nx; ++iy) {
          for (int ix = 0; ix < g.nx; ++ix) {
            solve_mode(g.index2(ix, iy, it),
                       op.mean_spatial_symbol(ix, iy) + cplx(0.0, tau[it]));
          }
        }
      }
    }
    for (int i = 0; i < ni; ++i) {
      fft_inverse(g, vh[static_cast<std::size_t>(i)].data(),
                  V[static_cast<std::size_t>(i)].values.data());
    }
  } else {
    // One coupled system over all interior slices, GMRES with a per-mode
    // tridiagonal preconditioner built from the volume-averaged symbol.
    const std::size_t total = static_cast<std::size_t>(ni) * N;
    std::vector<cplx> rhs(total, cplx(0.0));
    for (std::size_t k = 0; k < N; ++k) rhs[k] += T[0] * u.values[k];
    for (std::size_t k = 0; k < N; ++k) {
      rhs[(static_cast<std::size_t>(ni - 1)) * N + k] +=
          T[static_cast<std::size_t>(J - 1)] * far.values[k];
    }

    LinearMap apply_block = [&](const cplx* in, cplx* outp) {
      for (int i = 0; i < ni; ++i) {
        const int j = i + 1;
        Field slice(g);
        std::copy(in + static_cast<std::size_t>(i) * N,
                  in + static_cast<std::size_t>(i + 1) * N,
                  slice.values.begin());
        Field Hs = op.apply(slice);
        cplx* o = outp + static_cast<std::size_t>(i) * N;
        const double dsum = T[static_cast<std::size_t>(j - 1)] +
                            T[static_cast<std::size_t>(j)];
        const double wj = W[static_cast<std::size_t>(j)];
        for (std::size_t k = 0; k < N; ++k) {
          o[k] = dsum * slice.values[k] + wj * Hs.values[k];
        }
        if (i > 0) {
          const cplx* prev = in + static_cast<std::size_t>(i - 1) * N;
          for (std::size_t k = 0; k < N; ++k) {
            o[k] -= T[static_cast<std::size_t>(j - 1)] * prev[k];
          }
        }
        if (i < ni - 1) {
          const cplx* next = in + static_cast<std::size_t>(i + 1) * N;
          for (std::size_t k = 0; k < N; ++k) {
            o[k] -= T[static_cast<std::size_t>(j)] * next[k];
          }
        }
      }
    };

    const std::vector<double> tau = tau_values(g);
    std::vector<cplx> zsym(N);
    if (g.spatial_dims == 1) {
      for (int it = 0; it < g.nt; ++it) {
        for (int ix = 0; ix < g.nx; ++ix) {
          zsym[g.index1(ix, it)] =
              op.mean_spatial_symbol(ix, 0) + cplx(0.0, tau[it]);
        }
      }
    } else {
      for (int it = 0; it < g.nt; ++it) {
        for (int iy = 0; iy < g.nx; ++iy) {
          for (int ix = 0; ix < g.nx; ++ix) {
            zsym[g.index2(ix, iy, it)] =
                op.mean_spatial_symbol(ix, iy) + cplx(0.0, tau[it]);
          }
        }
      }
    }
    LinearMap precond = [&](const cplx* in, cplx* outp) {
      // Per-mode Thomas on the mean-symbol tridiagonal system.
      std::vector<std::vector<cplx>> hat(
          static_cast<std::size_t>(ni), std::vector<cplx>(N));
      for (int i = 0; i < ni; ++i) {
        fft_forward(g, in + static_cast<std::size_t>(i) * N,
                    hat[static_cast<std::size_t>(i)].data());
      }
      std::vector<cplx> diag(static_cast<std::size_t>(ni)),
          r(static_cast<std::size_t>(ni)), cp(static_cast<std::size_t>(ni));
      for (std::size_t k = 0; k < N; ++k) {
        for (int i = 0; i < ni; ++i) {
          const int j = i + 1;
          diag[static_cast<std::size_t>(i)] =
              T[static_cast<std::size_t>(j - 1)] +
              T[static_cast<std::size_t>(j)] +
              W[static_cast<std::size_t>(j)] * zsym[k];
          r[static_cast<std::size_t>(i)] = hat[static_cast<std::size_t>(i)][k];
        }
        cp[0] = -T[1] / diag[0];
        r[0] /= diag[0];
        for (int i = 1; i < ni; ++i) {
          const cplx sub = -T[static_cast<std::size_t>(i)];
          const cplx m = diag[static_cast<std::size_t>(i)] -
                         sub * cp[static_cast<std::size_t>(i - 1)];
          if (i < ni - 1) {
            cp[static_cast<std::size_t>(i)] =
                -T[static_cast<std::size_t>(i + 1)] / m;
          }
          r[static_cast<std::size_t>(i)] =
              (r[static_cast<std::size_t>(i)] -
               sub * r[static_cast<std::size_t>(i - 1)]) /
              m;
        }
        hat[static_cast<std::size_t>(ni - 1)][k] =
            r[static_cast<std::size_t>(ni - 1)];
        for (int i = ni - 2; i >= 0; --i) {
          hat[static_cast<std::size_t>(i)][k] =
              r[static_cast<std::size_t>(i)] -
              cp[static_cast<std::size_t>(i)] *
                  hat[static_cast<std::size_t>(i + 1)][k];
        }
      }
      for (int i = 0; i < ni; ++i) {
        fft_inverse(g, hat[static_cast<std::size_t>(i)].data(),
                    outp + static_cast<std::size_t>(i) * N);
      }
    };

    std::vector<cplx> x(total, cplx(0.0));
    precond(rhs.data(), x.data());  // warm start from the mean-symbol solve
    GmresOptions opts;
    opts.tol = op.solver_tol();
    opts.max_iter = 400;
    opts.restart = 40;
    GmresResult res =
        gmres_solve(total, apply_block, precond, rhs.data(), x.data(), opts);
    if (!res.converged) {
      throw NumericalError(
          "solve_extension_bvp: coupled solve did not converge (relative "
          "residual " + std::to_string(res.residual) + ")",
          res.residual);
    }
    for (int i = 0; i < ni; ++i) {
      std::copy(x.begin() + static_cast<std::size_t>(i) * N,
                x.begin() + static_cast<std::size_t>(i + 1) * N,
                V[static_cast<std::size_t>(i)].values.begin());
    }
  }

  ExtensionProfile prof;
  prof.s = s;
  prof.source = u;
  prof.lambdas.assign(lam.begin() + 1, lam.end());
  prof.slices = std::move(V);
  prof.slices.push_back(std::move(far));
  return prof;
}

cplx profile_symbol_gl(double s, cplx z, double lambda, int nodes,
                       double sigma) {
  check_s(s);
  if (nodes < 2) throw InvalidArgumentError("profile_symbol_gl needs >= 2 nodes");
  if (lambda < 0.0) throw InvalidArgumentError("lambda must be nonnegative");
  if (sigma < 0.0) throw InvalidArgumentError("sigma must be nonnegative");
  const cplx zs = sigma > 0.0 ? sigma * z / (sigma + z) : z;
  const QuadratureRule rule = gauss_laguerre(nodes, s - 1.0);
  cplx acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double r = lambda * lambda / (4.0 * rule.nodes[i]);
    acc += rule.weights[i] * std::exp(-r * zs);
  }
  return acc / std::tgamma(s);
}

void write_profile_archive(const std::string& dir, const ExtensionProfile& p,
                           const std::string& config_digest) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ostringstream manifest;
  manifest << "fracpar-profile 1\n";
  manifest << "s = " << format_double(p.s) << "\n";
  manifest << "digest = " << config_digest << "\n";
  manifest << "count = " << p.lambdas.size() << "\n";
  manifest << "source = source.f64\n";
  write_field_fracpar1(dir + "/source.f64", p.source);
  for (std::size_t k = 0; k < p.lambdas.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "slice_%03zu.f64", k);
    manifest << "lambda " << k << " = " << format_double(p.lambdas[k])
             << " file = " << name << "\n";
    write_field_fracpar1(dir + "/" + name, p.slices[k]);
  }
  write_text_file(dir + "/manifest.txt", manifest.str());
}

ExtensionProfile read_profile_archive(const std::string& dir) {
  const std::string text = read_text_file(dir + "/manifest.txt");
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "fracpar-profile 1") {
    throw IoError("read_profile_archive: bad manifest magic");
  }
  ExtensionProfile p;
  std::size_t count = 0;
  std::string source_file;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "s") {
      std::string eq;
      ls >> eq >> p.s;
    } else if (key == "count") {
      std::string eq;
      ls >> eq >> count;
    } else if (key == "source") {
      std::string eq;
      ls >> eq >> source_file;
    } else if (key == "lambda") {
      std::size_t k;
      std::string eq, filekw, fname;
      double lv;
      ls >> k >> eq >> lv >> filekw >> eq >> fname;
      p.lambdas.push_back(lv);
      p.slices.push_back(read_field_fracpar1(dir + "/" + fname));
    }
  }
  if (!source_file.empty()) {
    p.source = read_field_fracpar1(dir + "/" + source_file);
  }
  if (p.lambdas.size() != count) {
    throw IoError("read_profile_archive: slice count mismatch");
  }
  return p;
}

}  // namespace fracpar
