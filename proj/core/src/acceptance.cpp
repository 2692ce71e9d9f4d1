#include "fracpar/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fracpar/coefficients.hpp"
#include "fracpar/extension.hpp"
#include "fracpar/fft.hpp"
#include "fracpar/field.hpp"
#include "fracpar/fractional.hpp"
#include "fracpar/grid.hpp"
#include "fracpar/kernels.hpp"
#include "fracpar/operator.hpp"
#include "fracpar/parallel.hpp"
#include "fracpar/quadrature.hpp"
#include "fracpar/regularity.hpp"
#include "fracpar/rng.hpp"
#include "fracpar/semigroup.hpp"
#include "fracpar/spectral.hpp"

namespace fracpar {

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void append(std::string& detail, const std::string& piece) {
  if (!detail.empty()) detail += "; ";
  detail += piece;
}

double rel_l2_err(const Field& got, const Field& ref, double ref_norm) {
  Field d = got;
  axpy(cplx(-1.0, 0.0), ref, d);
  return l2_norm(d) / ref_norm;
}

// --------------------------------------------------------------------------
// 1. Route agreement for constant coefficients: the resolvent integral and
//    the semigroup integral must reproduce the multiplier route on a banded
//    high-frequency field, within their quadrature budgets, in under two
//    minutes for all three exponents together.
CriterionResult crit_route_agreement() {
  CriterionResult r;
  r.name = "route-agreement";
  const auto t0 = std::chrono::steady_clock::now();

  const Grid grid = Grid::make(1, 64, 64, 64.0, 64.0);
  const CoefficientField A = CoefficientField::identity(grid);
  const ParabolicOperator op(A, TimeDerivativeMode::spectral, 1e-10);
  const Field u = banded_spatial_field(grid, 7, 20, 28);
  const std::vector<double> ss = {0.25, 0.5, 0.75};

  std::vector<double> rel_bala(ss.size(), 0.0), rel_semi(ss.size(), 0.0);
  std::vector<Field> refs(ss.size());
  for (std::size_t i = 0; i < ss.size(); ++i) {
    refs[i] = hs_fourier(u, ss[i], A);
    const Field b = hs_balakrishnan(op, u, ss[i],
                                    QuadratureSpec::balakrishnan_default());
    rel_bala[i] = rel_l2_err(b, refs[i], l2_norm(refs[i]));
  }
  // The three semigroup runs are independent resolvent chains; run them
  // concurrently (each chain is strictly sequential internally).
  parallel_for(ss.size(), [&](std::size_t i) {
    const Field sg = hs_semigroup(op, u, ss[i], YosidaConfig{},
                                  QuadratureSpec::semigroup_default());
    rel_semi[i] = rel_l2_err(sg, refs[i], l2_norm(refs[i]));
  });

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  bool ok = elapsed <= 120.0;
  for (std::size_t i = 0; i < ss.size(); ++i) {
    ok = ok && rel_bala[i] <= 1e-6 && rel_semi[i] <= 1e-4;
    append(r.detail, "s=" + num(ss[i]) + ": resolvent " + num(rel_bala[i]) +
                         " (tol 1e-6), semigroup " + num(rel_semi[i]) +
                         " (tol 1e-4)");
  }
  // Keep the detail string free of wall-clock numbers so summary files stay
  // byte-identical across runs; the measured seconds live in `seconds`.
  append(r.detail, elapsed <= 120.0 ? "runtime cap 120 s met"
                                    : "runtime cap 120 s EXCEEDED");
  r.passed = ok;
  return r;
}

// --------------------------------------------------------------------------
// 2. Dirichlet-to-Neumann limit: the extrapolated flux over c_s matches the
//    multiplier route to 1e-3, and the raw ladder errors decrease
//    monotonically over at least three consecutive rungs.
CriterionResult crit_dtn_limit() {
  CriterionResult r;
  r.name = "dtn-limit";

  const Grid grid = Grid::make(1, 64, 64, 64.0, 64.0);
  const CoefficientField A = CoefficientField::identity(grid);
  const ParabolicOperator op(A, TimeDerivativeMode::spectral, 1e-10);
  const Field u = banded_spatial_field(grid, 7, 20, 28);
  const std::vector<double> ss = {0.25, 0.5, 0.75};

  const std::vector<DtnLadder> ladders =
      dtn_ladder_multi(op, u, ss, YosidaConfig{}, dtn_quadrature_default());

  bool ok = ladders.size() == ss.size();
  for (const DtnLadder& lad : ladders) {
    const Field ref = hs_fourier(u, lad.s, A);
    const double ref_norm = l2_norm(ref);
    const double cs = cs_constant(lad.s);

    std::vector<double> errs;
    errs.reserve(lad.rungs.size());
    for (const Field& rung : lad.rungs) {
      Field scaled = rung;
      scaled *= cplx(1.0 / cs, 0.0);
      errs.push_back(rel_l2_err(scaled, ref, ref_norm));
    }
    // Longest run of strictly decreasing consecutive rung errors.
    int run = 1, best_run = 1;
    for (std::size_t j = 1; j < errs.size(); ++j) {
      run = errs[j] < errs[j - 1] ? run + 1 : 1;
      best_run = std::max(best_run, run);
    }
    Field extrap = lad.extrapolated;
    extrap *= cplx(1.0 / cs, 0.0);
    const double final_err = rel_l2_err(extrap, ref, ref_norm);

    ok = ok && final_err <= 1e-3 && best_run >= 3;
    append(r.detail, "s=" + num(lad.s) + ": extrapolated " + num(final_err) +
                         " (tol 1e-3), rungs " + num(errs.front()) + "->" +
                         num(errs.back()) + ", monotone run " +
                         std::to_string(best_run) + "/" +
                         std::to_string(static_cast<int>(errs.size())));
  }
  r.passed = ok;
  return r;
}

// --------------------------------------------------------------------------
// 3. Gamma-function normalization: the extension profile of the constant
//    field equals 1 at every ladder height to 1e-8 (the Poisson tail and the
//    Laguerre weight-sum are the only error sources).
CriterionResult crit_constant_profile() {
  CriterionResult r;
  r.name = "constant-profile";

  const Grid grid = Grid::make(1, 32, 32, 8.0, 8.0);
  const CoefficientField A = CoefficientField::identity(grid);
  const ParabolicOperator op(A, TimeDerivativeMode::spectral, 1e-10);
  Field ones(grid);
  for (cplx& v : ones.values) v = cplx(1.0, 0.0);
  const std::vector<double> lambdas = default_lambda_ladder(2.0);

  bool ok = true;
  for (double s : {0.3, 0.7}) {
    const ExtensionProfile prof = extension_profile(
        op, ones, s, lambdas, YosidaConfig{}, extension_quadrature_default());
    double worst = 0.0;
    for (const Field& slice : prof.slices) {
      for (const cplx& v : slice.values) {
        worst = std::max(worst, std::abs(v - cplx(1.0, 0.0)));
      }
    }
    ok = ok && worst <= 1e-8 && prof.slices.size() == lambdas.size();
    append(r.detail, "s=" + num(s) + ": max |U-1| = " + num(worst) +
                         " over " + std::to_string(prof.slices.size()) +
                         " heights (tol 1e-8)");
  }
  r.passed = ok;
  return r;
}

// --------------------------------------------------------------------------
// 4. Yosida semigroup structure under a variable nonsymmetric real
//    coefficient: no relative L^2 expansion beyond 1e-9, and the
//    composition-law defect stays under the a-priori substitution bound
//    4(r1+r2)||(H_sigma - H)u|| + 3*tail*||u|| on 20 random smooth fields.
CriterionResult crit_semigroup_contraction() {
  CriterionResult r;
  r.name = "semigroup-contraction";

  const Grid grid = Grid::make(1, 16, 16, 1.0, 1.0);
  const CoefficientField A = CoefficientField::builtin(grid,
                                                       "rotating-nonsymmetric");
  // Tight solves: the chain accumulates about mu = sigma*(r1+r2) solver
  // residuals, which must stay well under the 1e-9 contraction allowance.
  const ParabolicOperator op(A, TimeDerivativeMode::spectral, 1e-12);
  YosidaConfig cfg;
  cfg.sigma = 500.0;

  const double r1 = 0.11, r2 = 0.07;
  double worst_expansion = 0.0;
  double worst_ratio = 0.0;  // defect / bound
  bool ok = true;

  for (int k = 1; k <= 20; ++k) {
    const Field u = smooth_field(grid, static_cast<std::uint64_t>(k), 3, 3);
    const double un = l2_norm(u);

    const std::vector<Field> S =
        semigroup_apply_batch(op, cfg, {r2, r1, r1 + r2}, u);
    for (const Field& Su : S) {
      worst_expansion = std::max(worst_expansion, l2_norm(Su) / un - 1.0);
    }

    const Field S12 = semigroup_apply(op, cfg, r1, S[0]);
    Field defect_field = S12;
    axpy(cplx(-1.0, 0.0), S[2], defect_field);
    const double defect = l2_norm(defect_field);

    const Field Hu = op.apply(u);
    Field sub = yosida_resolvent_step(op, cfg, Hu);  // H_sigma u
    axpy(cplx(-1.0, 0.0), Hu, sub);                  // (H_sigma - H) u
    const double bound =
        4.0 * (r1 + r2) * l2_norm(sub) + 3.0 * cfg.poisson_tail_tol * un;

    ok = ok && defect <= bound;
    if (bound > 0.0) worst_ratio = std::max(worst_ratio, defect / bound);
  }

  ok = ok && worst_expansion <= 1e-9;
  append(r.detail, "worst expansion " + num(worst_expansion) + " (tol 1e-9)");
  append(r.detail,
         "worst law defect/bound " + num(worst_ratio) + " over 20 fields");
  r.passed = ok;
  return r;
}

// --------------------------------------------------------------------------
// 5. Fundamental-solution structure: per-slice mass 1 +- 1e-8, nonnegativity
//    to roundoff, fitted Gaussian rate within 10% of 1/(4a), and the
//    Chapman-Kolmogorov defect at least halving when the step halves.
CriterionResult crit_kernel_bounds() {
  CriterionResult r;
  r.name = "kernel-bounds";

  const Grid grid = Grid::make(1, 96, 258, 48.0, 2.58);
  bool ok = true;

  for (double a : {1.0, 2.0}) {
    const CoefficientField A =
        CoefficientField::constant(grid, {cplx(a, 0.0)}, a, a);
    const ParabolicOperator op(A, TimeDerivativeMode::spectral, 1e-10);
    const KernelColumn col = fundamental_solution_column(op, 48, 0, 0, 2.56);

    double worst_mass = 0.0;
    const int last = col.source_it +
                     static_cast<int>(std::lround(col.t_horizon / grid.dt()));
    for (int it = col.source_it; it <= last; ++it) {
      worst_mass = std::max(worst_mass,
                            std::abs(kernel_slice_mass(col, it) - 1.0));
    }

    double min_v = 0.0, max_v = 0.0;
    for (const cplx& v : col.values.values) {
      min_v = std::min(min_v, v.real());
      max_v = std::max(max_v, v.real());
    }

    const GaussianFitReport fit = gaussian_bound_fit(col, 0.4, 2.2, 3.5);
    const double target = 1.0 / (4.0 * a);
    const double c_err = std::abs(fit.c - target) / target;

    ok = ok && worst_mass <= 1e-8 && min_v >= -1e-12 * max_v && c_err <= 0.10;
    append(r.detail, "a=" + num(a) + ": mass defect " + num(worst_mass) +
                         " (tol 1e-8), min/max " + num(min_v) + "/" +
                         num(max_v) + ", rate c=" + num(fit.c) + " vs " +
                         num(target) + " (err " + num(c_err) + ", tol 0.1)");
  }

  const CoefficientField AI = CoefficientField::identity(grid);
  const double d1 = chapman_kolmogorov_defect(AI, 48, 0.64, 1.28, 0.01);
  const double d2 = chapman_kolmogorov_defect(AI, 48, 0.64, 1.28, 0.005);
  const double ratio = d1 > 0.0 ? d2 / d1 : 1.0;
  ok = ok && ratio <= 0.6;
  append(r.detail, "composition defect " + num(d1) + " -> " + num(d2) +
                       ", ratio " + num(ratio) + " (tol 0.6)");
  r.passed = ok;
  return r;
}

// --------------------------------------------------------------------------
// 6. Hidden coercivity and resolvent bounds for the nonsymmetric family:
//    Re<Hu,u> >= -1e-10 * ||u||^2 over 100 random fields (1-D and 2-D), and
//    ||(sigma+H)^{-1} f|| <= ||f||/sigma up to 1e-8 slack over 20 solves.
CriterionResult crit_accretivity_resolvent() {
  CriterionResult r;
  r.name = "accretivity-resolvent";

  const Grid g1 = Grid::make(1, 16, 16, 1.0, 1.0);
  const Grid g2 = Grid::make(2, 10, 8, 1.0, 1.0);
  const ParabolicOperator op1(
      CoefficientField::builtin(g1, "rotating-nonsymmetric"),
      TimeDerivativeMode::spectral, 1e-10);
  const ParabolicOperator op2(
      CoefficientField::builtin(g2, "rotating-nonsymmetric"),
      TimeDerivativeMode::spectral, 1e-10);

  const AccretivityReport a1 = op1.check_accretivity(100, 2026);
  const AccretivityReport a2 = op2.check_accretivity(100, 2027);
  const double min_ray = std::min(a1.min_rayleigh, a2.min_rayleigh);

  double worst_ratio = 0.0;
  for (int k = 0; k < 20; ++k) {
    const ParabolicOperator& op = k < 10 ? op1 : op2;
    const Grid& g = k < 10 ? g1 : g2;
    const double sigma = 0.5 * std::pow(10.0, (k % 10) / 3.0);
    const Field f =
        smooth_field(g, static_cast<std::uint64_t>(3000 + k), 4, 4, false);
    const Field x = op.resolvent(cplx(sigma, 0.0), f);
    worst_ratio = std::max(worst_ratio, sigma * l2_norm(x) / l2_norm(f));
  }

  const bool ok = min_ray >= -1e-10 && worst_ratio <= 1.0 + 1e-8;
  append(r.detail, "min Rayleigh quotient " + num(min_ray) +
                       " over 200 fields (tol -1e-10)");
  append(r.detail, "worst sigma*||resolvent f||/||f|| = " + num(worst_ratio) +
                       " over 20 solves (tol 1+1e-8)");
  r.passed = ok;
  return r;
}

// --------------------------------------------------------------------------
// 7. Square-root domain: per mode and on full-spectrum random fields, the
//    ratio ||H^{1/2}u|| / sqrt(||grad u||^2 + ||D_t^{1/2}u||^2) lies in
//    [2^{-1/4}, 1] to 1e-10.
CriterionResult crit_square_root_domain() {
  CriterionResult r;
  r.name = "square-root-domain";

  const Grid grid = Grid::make(1, 64, 64, 64.0, 64.0);
  const CoefficientField A = CoefficientField::identity(grid);
  const double lo = std::pow(2.0, -0.25) - 1e-10;
  const double hi = 1.0 + 1e-10;

  // Exact per-mode scan of the symbol ratio.
  const std::vector<double> tau = tau_values(grid);
  const std::vector<double> gsym = flux_symbol(grid);
  double mode_min = 2.0, mode_max = 0.0;
  for (int it = 0; it < grid.nt; ++it) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      if (it == 0 && ix == 0) continue;  // H annihilates the mean
      const double t = std::abs(tau[static_cast<std::size_t>(it)]);
      const double g = gsym[static_cast<std::size_t>(ix)];
      const double ratio = std::pow(t * t + g * g, 0.25) / std::sqrt(t + g);
      mode_min = std::min(mode_min, ratio);
      mode_max = std::max(mode_max, ratio);
    }
  }

  // Full-spectrum random fields: every nonzero mode populated with a
  // unit-box complex coefficient.
  double field_min = 2.0, field_max = 0.0;
  for (int k = 0; k < 10; ++k) {
    Lcg rng(static_cast<std::uint64_t>(500 + k));
    std::vector<cplx> spec(grid.size());
    for (cplx& c : spec) {
      c = cplx(2.0 * rng.unit() - 1.0, 2.0 * rng.unit() - 1.0);
    }
    spec[0] = cplx(0.0, 0.0);
    const Field u = fft_inverse(grid, spec);

    const double numer = l2_norm(hs_fourier(u, 0.5, A));
    double den_sq = 0.0;
    for (const Field& d : gradient_forward(u)) {
      const double n = l2_norm(d);
      den_sq += n * n;
    }
    const double ht = l2_norm(half_time_derivative(u));
    den_sq += ht * ht;
    const double ratio = numer / std::sqrt(den_sq);
    field_min = std::min(field_min, ratio);
    field_max = std::max(field_max, ratio);
  }

  const bool ok = mode_min >= lo && mode_max <= hi && field_min >= lo &&
                  field_max <= hi;
  append(r.detail, "per-mode ratio in [" + num(mode_min) + ", " +
                       num(mode_max) + "]");
  append(r.detail, "field ratio in [" + num(field_min) + ", " +
                       num(field_max) + "]");
  append(r.detail, "required [2^{-1/4}-1e-10, 1+1e-10] = [" + num(lo) + ", " +
                       num(hi) + "]");
  r.passed = ok;
  return r;
}

// --------------------------------------------------------------------------
// 8. Nonlocal Dirichlet regularity: on five seeded problems with nonnegative
//    exterior data, the interior stays positive, the Holder exponent estimate
//    is positive and stable within 20% under grid refinement, and the
//    Harnack ratio is finite, >= 1, and equally stable.
CriterionResult crit_dirichlet_regularity() {
  CriterionResult r;
  r.name = "dirichlet-regularity";

  const double s = 0.3;
  SpaceTimeBox box;
  box.center_x = {2.0, 0.0};
  box.half_x = {1.75, 0.0};
  box.center_t = 2.0;
  box.half_t = 1.75;
  ParabolicCube cube;
  cube.center = ParabolicPoint{{2.0, 0.0}, 2.0};
  cube.radius = 0.75;

  struct SeedStats {
    double alpha[2] = {0.0, 0.0};
    double harnack[2] = {0.0, 0.0};
    bool harnack_ok[2] = {false, false};
    double min_int[2] = {0.0, 0.0};
  };
  std::vector<SeedStats> stats(5);

  const int resolutions[2] = {32, 64};
  for (int ri = 0; ri < 2; ++ri) {
    const int res = resolutions[ri];
    const Grid grid = Grid::make(1, res, res, 4.0, 4.0);
    const CoefficientField A = CoefficientField::identity(grid);
    const ParabolicOperator op(A, TimeDerivativeMode::spectral, 1e-10);

    std::vector<Field> data;
    data.reserve(5);
    for (int seed = 1; seed <= 5; ++seed) {
      const Field base =
          smooth_field(grid, static_cast<std::uint64_t>(seed), 6, 6, false);
      Field f(grid);
      for (std::size_t i = 0; i < f.size(); ++i) {
        f.values[i] = cplx(std::exp(base.values[i].real()), 0.0);
      }
      data.push_back(std::move(f));
    }

    const std::vector<Field> sols = solve_nonlocal_dirichlet_batch(
        s, box, FractionalRoute::fourier, op, data);
    const std::vector<std::size_t> interior = interior_indices(grid, box);

    for (int seed = 0; seed < 5; ++seed) {
      const Field& sol = sols[static_cast<std::size_t>(seed)];
      const RegularityReport rep = regularity_probe(sol, cube);
      double mn = std::numeric_limits<double>::infinity();
      for (std::size_t idx : interior) {
        mn = std::min(mn, sol.values[idx].real());
      }
      SeedStats& st = stats[static_cast<std::size_t>(seed)];
      st.alpha[ri] = rep.alpha_raw;
      st.harnack[ri] = rep.harnack_ratio;
      st.harnack_ok[ri] = rep.harnack_defined &&
                          std::isfinite(rep.harnack_ratio) &&
                          rep.harnack_ratio >= 1.0 - 1e-12;
      st.min_int[ri] = mn;
    }
  }

  bool ok = true;
  double worst_da = 0.0, worst_dh = 0.0;
  double worst_min = std::numeric_limits<double>::infinity();
  for (const SeedStats& st : stats) {
    const double da = std::abs(st.alpha[1] - st.alpha[0]) /
                      std::max(std::abs(st.alpha[0]), 1e-300);
    const double dh = std::abs(st.harnack[1] - st.harnack[0]) /
                      std::max(std::abs(st.harnack[0]), 1e-300);
    ok = ok && st.alpha[0] > 0.0 && st.alpha[1] > 0.0 && da <= 0.20;
    ok = ok && st.harnack_ok[0] && st.harnack_ok[1] && dh <= 0.20;
    ok = ok && st.min_int[0] >= -1e-8 && st.min_int[1] >= -1e-8;
    worst_da = std::max(worst_da, da);
    worst_dh = std::max(worst_dh, dh);
    worst_min = std::min(worst_min, std::min(st.min_int[0], st.min_int[1]));
  }
  append(r.detail, "worst exponent drift " + num(worst_da) +
                       " (tol 0.2) across 32->64");
  append(r.detail, "worst Harnack drift " + num(worst_dh) + " (tol 0.2)");
  append(r.detail,
         "min interior value " + num(worst_min) + " (tol -1e-8)");
  r.passed = ok;
  return r;
}

// --------------------------------------------------------------------------
// 9. Yosida substitution convergence in sigma: on the scalar symbol test the
//    profile discrepancy |P_{2 sigma} - P_sigma| at least drops by 0.6 per
//    doubling, for each exponent.
CriterionResult crit_sigma_doubling() {
  CriterionResult r;
  r.name = "sigma-doubling";

  const cplx z(2.0, 0.0);
  const double lambda = 1.0;
  bool ok = true;
  for (double s : {0.25, 0.5, 0.75}) {
    const cplx p1 = profile_symbol_gl(s, z, lambda, 32, 200.0);
    const cplx p2 = profile_symbol_gl(s, z, lambda, 32, 400.0);
    const cplx p3 = profile_symbol_gl(s, z, lambda, 32, 800.0);
    const double d12 = std::abs(p2 - p1);
    const double d23 = std::abs(p3 - p2);
    const double ratio = d12 > 0.0 ? d23 / d12 : 1.0;
    ok = ok && ratio <= 0.6;
    append(r.detail, "s=" + num(s) + ": discrepancy " + num(d12) + " -> " +
                         num(d23) + ", ratio " + num(ratio) + " (tol 0.6)");
  }
  r.passed = ok;
  return r;
}

}  // namespace

bool AcceptanceSummary::all_passed() const {
  if (results.empty()) return false;
  for (const CriterionResult& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

double AcceptanceSummary::total_seconds() const {
  double t = 0.0;
  for (const CriterionResult& r : results) t += r.seconds;
  return t;
}

AcceptanceSummary run_acceptance(const std::vector<int>& only) {
  using CriterionFn = CriterionResult (*)();
  struct Entry {
    int number;
    const char* name;
    CriterionFn fn;
  };
  static const Entry table[] = {
      {1, "route-agreement", crit_route_agreement},
      {2, "dtn-limit", crit_dtn_limit},
      {3, "constant-profile", crit_constant_profile},
      {4, "semigroup-contraction", crit_semigroup_contraction},
      {5, "kernel-bounds", crit_kernel_bounds},
      {6, "accretivity-resolvent", crit_accretivity_resolvent},
      {7, "square-root-domain", crit_square_root_domain},
      {8, "dirichlet-regularity", crit_dirichlet_regularity},
      {9, "sigma-doubling", crit_sigma_doubling},
  };

  AcceptanceSummary summary;
  for (const Entry& e : table) {
    if (!only.empty() &&
        std::find(only.begin(), only.end(), e.number) == only.end()) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult res;
    try {
      res = e.fn();
    } catch (const std::exception& ex) {
      res.passed = false;
      res.detail = std::string("exception: ") + ex.what();
    }
    res.number = e.number;
    if (res.name.empty()) res.name = e.name;
    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    summary.results.push_back(std::move(res));
  }
  return summary;
}

// No timing column: identical configs must produce byte-identical summaries.
std::string acceptance_csv(const AcceptanceSummary& summary) {
  std::string out = "number,name,passed,detail\n";
  for (const CriterionResult& r : summary.results) {
    out += std::to_string(r.number) + "," + r.name + "," +
           (r.passed ? "1" : "0") + ",\"" + r.detail + "\"\n";
  }
  return out;
}

}  // namespace fracpar
