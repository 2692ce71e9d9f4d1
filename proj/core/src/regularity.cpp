#include "fracpar/regularity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "fracpar/errors.hpp"
#include "fracpar/io.hpp"
#include "fracpar/parallel.hpp"
#include "fracpar/rng.hpp"

namespace fracpar {

namespace {

constexpr const char* kSurrogateNote =
    "periodic-torus surrogate: hypotheses on the unbounded past are "
    "truncated to the periodic time window; the discrete graph domain "
    "stands in for the continuous solution class";

void check_s_range(double s) {
  if (!(s >= 0.01 && s <= 0.99)) {
    throw InvalidArgumentError("fractional exponent s must lie in [0.01, 0.99]");
  }
}

void require_real_data(const Field& f, const char* what) {
  double max_im = 0.0, max_ab = 0.0;
  for (const cplx& v : f.values) {
    max_im = std::max(max_im, std::fabs(v.imag()));
    max_ab = std::max(max_ab, std::abs(v));
  }
  if (max_im > 1e-12 * std::max(1.0, max_ab)) {
    throw InvalidArgumentError(std::string(what) +
                               " must be real-valued in this pipeline");
  }
}

// Dense matrix of the chosen H^s realization on the full grid, real part.
// The fourier fill uses one kernel column and translation invariance; the
// quadrature routes apply the operator to every basis vector.
Eigen::MatrixXd dense_route_matrix(double s, FractionalRoute route,
                                   const ParabolicOperator& op) {
  const Grid& g = op.grid();
  const std::size_t n = g.size();
  Eigen::MatrixXd M(n, n);

  if (route == FractionalRoute::fourier) {
    Field delta(g);
    delta[0] = 1.0;
    Field column = hs_fourier(delta, s, op.coeffs());
    // On an even grid the Nyquist-in-time row is its own conjugate partner,
    // so the exact discrete kernel carries a small imaginary component with
    // no continuum counterpart.  The dense operator is the real part: the
    // matrix of the route on real fields followed by real projection.
    if (g.spatial_dims == 1) {
      for (int itr = 0; itr < g.nt; ++itr)
        for (int ixr = 0; ixr < g.nx; ++ixr)
          for (int itc = 0; itc < g.nt; ++itc)
            for (int ixc = 0; ixc < g.nx; ++ixc) {
              const int dt = (itr - itc + g.nt) % g.nt;
              const int dx = (ixr - ixc + g.nx) % g.nx;
              M(g.index1(ixr, itr), g.index1(ixc, itc)) =
                  column[g.index1(dx, dt)].real();
            }
    } else {
      for (std::size_t row = 0; row < n; ++row) {
        const int ixr = static_cast<int>(row) % g.nx;
        const int iyr = static_cast<int>(row / g.nx) % g.nx;
        const int itr = static_cast<int>(row / (g.nx * g.nx));
        for (std::size_t col = 0; col < n; ++col) {
          const int ixc = static_cast<int>(col) % g.nx;
          const int iyc = static_cast<int>(col / g.nx) % g.nx;
          const int itc = static_cast<int>(col / (g.nx * g.nx));
          M(row, col) = column[g.index2((ixr - ixc + g.nx) % g.nx,
                                        (iyr - iyc + g.nx) % g.nx,
                                        (itr - itc + g.nt) % g.nt)]
                            .real();
        }
      }
    }
    return M;
  }

  parallel_for(n, [&](std::size_t j) {
    Field ej(g);
    ej[j] = 1.0;
    Field col = route == FractionalRoute::balakrishnan
                    ? hs_balakrishnan(op, ej, s,
                                      QuadratureSpec::balakrishnan_default())
                    : hs_semigroup(op, ej, s, YosidaConfig{},
                                   QuadratureSpec::semigroup_default());
    // Real projection, as in the multiplier branch above.
    for (std::size_t i = 0; i < n; ++i) M(i, j) = col[i].real();
  });
  return M;
}

struct SamplePoint {
  double x = 0.0, y = 0.0, t = 0.0;
  double value = 0.0;
};

std::vector<SamplePoint> cube_samples(const Field& u,
                                      const ParabolicCube& cube) {
  const Grid& g = u.grid;
  std::vector<SamplePoint> pts;
  for (int it = 0; it < g.nt; ++it)
    for (int iy = 0; iy < (g.spatial_dims == 2 ? g.nx : 1); ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        ParabolicPoint p;
        p.x[0] = ix * g.dx();
        p.x[1] = iy * g.dx();
        p.t = it * g.dt();
        if (!cube.contains(g, p)) continue;
        const std::size_t idx = g.spatial_dims == 1
                                    ? g.index1(ix, it)
                                    : g.index2(ix, iy, it);
        pts.push_back({p.x[0], p.x[1], p.t, u[idx].real()});
      }
  return pts;
}

// Linear-interpolated quantile of an unsorted sample (numpy's default).
double linear_quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const std::size_t i0 = static_cast<std::size_t>(std::floor(h));
  if (i0 + 1 >= v.size()) return v.back();
  const double frac = h - static_cast<double>(i0);
  return v[i0] + frac * (v[i0 + 1] - v[i0]);
}

double wrapped_offset(double t, double center, double L) {
  return std::remainder(t - center, L);
}

}  // namespace

const char* route_name(FractionalRoute route) {
  switch (route) {
    case FractionalRoute::fourier: return "fourier";
    case FractionalRoute::balakrishnan: return "balakrishnan";
    case FractionalRoute::semigroup: return "semigroup";
  }
  return "fourier";
}

FractionalRoute route_from_name(const std::string& name) {
  if (name == "fourier") return FractionalRoute::fourier;
  if (name == "balakrishnan") return FractionalRoute::balakrishnan;
  if (name == "semigroup") return FractionalRoute::semigroup;
  throw InvalidArgumentError("unknown route '" + name +
                             "' (fourier|balakrishnan|semigroup)");
}

bool SpaceTimeBox::contains(const Grid& grid, int ix, int iy, int it) const {
  if (periodic_distance(ix * grid.dx(), center_x[0], grid.Lx) >= half_x[0])
    return false;
  if (grid.spatial_dims == 2 &&
      periodic_distance(iy * grid.dx(), center_x[1], grid.Lx) >= half_x[1])
    return false;
  return periodic_distance(it * grid.dt(), center_t, grid.Lt) < half_t;
}

std::vector<std::size_t> interior_indices(const Grid& grid,
                                          const SpaceTimeBox& box) {
  std::vector<std::size_t> idx;
  for (int it = 0; it < grid.nt; ++it)
    for (int iy = 0; iy < (grid.spatial_dims == 2 ? grid.nx : 1); ++iy)
      for (int ix = 0; ix < grid.nx; ++ix)
        if (box.contains(grid, ix, iy, it))
          idx.push_back(grid.spatial_dims == 1 ? grid.index1(ix, it)
                                               : grid.index2(ix, iy, it));
  return idx;
}

std::vector<std::size_t> cube_indices(const Grid& grid,
                                      const ParabolicCube& cube) {
  std::vector<std::size_t> idx;
  for (int it = 0; it < grid.nt; ++it)
    for (int iy = 0; iy < (grid.spatial_dims == 2 ? grid.nx : 1); ++iy)
      for (int ix = 0; ix < grid.nx; ++ix) {
        ParabolicPoint p;
        p.x[0] = ix * grid.dx();
        p.x[1] = iy * grid.dx();
        p.t = it * grid.dt();
        if (cube.contains(grid, p))
          idx.push_back(grid.spatial_dims == 1 ? grid.index1(ix, it)
                                               : grid.index2(ix, iy, it));
      }
  return idx;
}

std::vector<Field> solve_nonlocal_dirichlet_batch(
    double s, const SpaceTimeBox& region, FractionalRoute route,
    const ParabolicOperator& op, const std::vector<Field>& exterior_data) {
  check_s_range(s);
  const Grid& g = op.grid();
  if (g.size() > 4096) {
    throw InvalidArgumentError(
        "dense nonlocal-Dirichlet assembly is limited to 4096 grid points");
  }
  if (!op.coeffs().is_real) {
    throw InvalidArgumentError(
        "nonlocal-Dirichlet pipeline requires real coefficients");
  }
  for (const Field& f : exterior_data) {
    require_same_grid(f, Field(g));
    require_real_data(f, "exterior data");
  }

  const std::vector<std::size_t> interior = interior_indices(g, region);
  if (interior.empty() || interior.size() == g.size()) {
    throw InvalidArgumentError(
        "region must split the grid into nonempty interior and exterior");
  }
  std::vector<std::size_t> exterior;
  exterior.reserve(g.size() - interior.size());
  {
    std::vector<char> inside(g.size(), 0);
    for (std::size_t i : interior) inside[i] = 1;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!inside[i]) exterior.push_back(i);
  }

  const Eigen::MatrixXd M = dense_route_matrix(s, route, op);
  const Eigen::Index ni = static_cast<Eigen::Index>(interior.size());
  const Eigen::Index ne = static_cast<Eigen::Index>(exterior.size());
  Eigen::MatrixXd MII(ni, ni), MIE(ni, ne);
  for (Eigen::Index r = 0; r < ni; ++r) {
    for (Eigen::Index c = 0; c < ni; ++c)
      MII(r, c) = M(interior[r], interior[c]);
    for (Eigen::Index c = 0; c < ne; ++c)
      MIE(r, c) = M(interior[r], exterior[c]);
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(MII);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) {
    throw NumericalError("singular interior block", rcond);
  }

  std::vector<Field> solutions;
  solutions.reserve(exterior_data.size());
  for (const Field& f : exterior_data) {
    Eigen::VectorXd fe(ne);
    for (Eigen::Index c = 0; c < ne; ++c) fe[c] = f[exterior[c]].real();
    const Eigen::VectorXd rhs = -(MIE * fe);
    const Eigen::VectorXd ui = lu.solve(rhs);
    const double resid = (MII * ui - rhs).norm();
    const double scale = rhs.norm() + MII.cwiseAbs().maxCoeff() * ui.norm();
    if (!(resid <= 1e-8 * std::max(scale, 1e-300))) {
      throw NumericalError("interior rows of the dense solve did not vanish",
                           resid / std::max(scale, 1e-300));
    }
    Field u = f;  // exterior entries equal the data exactly
    for (Eigen::Index r = 0; r < ni; ++r) u[interior[r]] = ui[r];
    solutions.push_back(std::move(u));
  }
  return solutions;
}

Field solve_nonlocal_dirichlet(const NonlocalDirichletProblem& problem,
                               const ParabolicOperator& op) {
  return solve_nonlocal_dirichlet_batch(problem.s, problem.region,
                                        problem.route, op,
                                        {problem.exterior_data})
      .front();
}

RegularityReport holder_exponent_estimate(const Field& u,
                                          const ParabolicCube& cube) {
  require_finite(u, "holder_exponent_estimate");
  const Grid& g = u.grid;
  RegularityReport rep;
  rep.cube = cube;
  rep.resolution = g.nx;
  rep.note = kSurrogateNote;

  const std::vector<SamplePoint> pts = cube_samples(u, cube);
  const double r = cube.radius;
  const double dmin_valid = 2.0 * g.dx();
  std::vector<double> ds, osc;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      ParabolicPoint pa{{pts[a].x, pts[a].y}, pts[a].t};
      ParabolicPoint pb{{pts[b].x, pts[b].y}, pts[b].t};
      const double d = parabolic_distance(g, pa, pb);
      if (d < dmin_valid || d > r) continue;
      ds.push_back(d);
      osc.push_back(std::fabs(pts[a].value - pts[b].value));
    }
  if (ds.empty()) {
    throw NumericalError("no point pairs in the Hölder fit window");
  }
  rep.pair_count = ds.size();

  const double max_osc = *std::max_element(osc.begin(), osc.end());
  if (max_osc == 0.0) {  // constant field: exponent 1 with zero constant
    rep.alpha = rep.alpha_raw = 1.0;
    rep.holder_constant = 0.0;
    rep.bound_coverage = 1.0;
    return rep;
  }

  // 12 log-spaced bins anchored on the positive-oscillation pairs.
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (osc[i] <= 0.0) continue;
    lo = std::min(lo, std::log(ds[i]));
    hi = std::max(hi, std::log(ds[i]));
  }
  hi += 1e-12;
  constexpr int kBins = 12;
  std::vector<std::vector<double>> bin_osc(kBins);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (osc[i] <= 0.0) continue;
    int b = static_cast<int>((std::log(ds[i]) - lo) / (hi - lo) * kBins);
    b = std::clamp(b, 0, kBins - 1);
    bin_osc[b].push_back(osc[i]);
  }
  std::vector<double> bx, by;
  for (int b = 0; b < kBins; ++b) {
    if (bin_osc[b].empty()) continue;
    const double width = (hi - lo) / kBins;
    bx.push_back(lo + (b + 0.5) * width);
    by.push_back(std::log(linear_quantile(bin_osc[b], 0.90)));
  }
  rep.bin_count = static_cast<int>(bx.size());
  if (bx.size() < 2) {
    throw NumericalError("degenerate Hölder fit window (fewer than two bins)");
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double nb = static_cast<double>(bx.size());
  for (std::size_t i = 0; i < bx.size(); ++i) {
    sx += bx[i];
    sy += by[i];
    sxx += bx[i] * bx[i];
    sxy += bx[i] * by[i];
  }
  const double denom = nb * sxx - sx * sx;
  const double slope = (nb * sxy - sx * sy) / denom;
  const double icpt = (sy - slope * sx) / nb;
  double ss = 0;
  for (std::size_t i = 0; i < bx.size(); ++i) {
    const double e = by[i] - (slope * bx[i] + icpt);
    ss += e * e;
  }
  rep.alpha_raw = slope;
  rep.alpha = std::min(1.0, slope);
  rep.fit_residual = std::sqrt(ss / nb);

  // Smallest constant covering >= 99% of pairs under the fitted exponent,
  // normalized by the global sup as in the theorem's right-hand side.
  const double sup = linf_norm(u);
  std::vector<double> q(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    q[i] = osc[i] / (std::pow(ds[i] / r, rep.alpha_raw) * sup);
  }
  std::vector<double> qs = q;
  std::sort(qs.begin(), qs.end());
  const std::size_t k = static_cast<std::size_t>(
      std::ceil(0.99 * static_cast<double>(qs.size())));
  rep.holder_constant = qs[k - 1];
  std::size_t covered = 0;
  for (double v : q)
    if (v <= rep.holder_constant) ++covered;
  rep.bound_coverage = static_cast<double>(covered) /
                       static_cast<double>(q.size());
  return rep;
}

RegularityReport harnack_ratio(const Field& u, const ParabolicCube& cube) {
  require_finite(u, "harnack_ratio");
  const Grid& g = u.grid;
  RegularityReport rep;
  rep.cube = cube;
  rep.resolution = g.nx;
  rep.note = kSurrogateNote;

  const double r = cube.radius;
  const double sup_abs = linf_norm(u);
  double sup_minus = -std::numeric_limits<double>::infinity();
  double inf_plus = std::numeric_limits<double>::infinity();
  double min_past = std::numeric_limits<double>::infinity();
  bool minus_hit = false, plus_hit = false;

  for (int it = 0; it < g.nt; ++it) {
    const double off = wrapped_offset(it * g.dt(), cube.center.t, g.Lt);
    const bool in_minus = off > -0.75 * r * r && off < -0.25 * r * r;
    const bool in_plus = off > 0.25 * r * r && off < r * r;
    const bool in_past = off <= 16.0 * r * r;
    if (!(in_minus || in_plus || in_past)) continue;
    for (int iy = 0; iy < (g.spatial_dims == 2 ? g.nx : 1); ++iy)
      for (int ix = 0; ix < g.nx; ++ix) {
        const std::size_t idx = g.spatial_dims == 1 ? g.index1(ix, it)
                                                    : g.index2(ix, iy, it);
        const double v = u[idx].real();
        if (in_past) min_past = std::min(min_past, v);
        double sq = 0.0;
        const double ddx =
            periodic_distance(ix * g.dx(), cube.center.x[0], g.Lx);
        sq += ddx * ddx;
        if (g.spatial_dims == 2) {
          const double ddy =
              periodic_distance(iy * g.dx(), cube.center.x[1], g.Lx);
          sq += ddy * ddy;
        }
        if (std::sqrt(sq) > 2.0 * r) continue;
        if (in_minus) {
          sup_minus = std::max(sup_minus, v);
          minus_hit = true;
        }
        if (in_plus) {
          inf_plus = std::min(inf_plus, v);
          plus_hit = true;
        }
      }
  }
  if (!minus_hit || !plus_hit) {
    throw NumericalError("empty Harnack waiting window on this grid");
  }
  rep.min_value = min_past;
  if (min_past < -1e-8 * std::max(1.0, sup_abs)) {
    throw NumericalError("negative values on the Harnack past window",
                         min_past);
  }
  rep.sup_past = sup_minus;
  rep.inf_future = inf_plus;
  if (inf_plus > 0.0) {
    rep.harnack_defined = true;
    rep.harnack_ratio = sup_minus / inf_plus;
  } else {
    rep.harnack_defined = false;
    rep.harnack_ratio = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

RegularityReport regularity_probe(const Field& u, const ParabolicCube& cube) {
  RegularityReport rep = holder_exponent_estimate(u, cube);
  const RegularityReport h = harnack_ratio(u, cube);
  rep.harnack_ratio = h.harnack_ratio;
  rep.harnack_defined = h.harnack_defined;
  rep.sup_past = h.sup_past;
  rep.inf_future = h.inf_future;
  rep.min_value = h.min_value;
  return rep;
}

RegularityReport attach_refinement(RegularityReport fine,
                                   const RegularityReport& coarse) {
  RefinementDiagnostics d;
  d.present = true;
  d.coarse_resolution = coarse.resolution;
  d.fine_resolution = fine.resolution;
  d.alpha_coarse = coarse.alpha_raw;
  d.alpha_fine = fine.alpha_raw;
  d.alpha_rel_delta = std::fabs(fine.alpha_raw - coarse.alpha_raw) /
                      std::max(std::fabs(coarse.alpha_raw), 1e-300);
  d.harnack_coarse = coarse.harnack_ratio;
  d.harnack_fine = fine.harnack_ratio;
  d.harnack_rel_delta =
      std::fabs(fine.harnack_ratio - coarse.harnack_ratio) /
      std::max(std::fabs(coarse.harnack_ratio), 1e-300);
  fine.refinement = d;
  return fine;
}

std::string regularity_csv(const std::vector<RegularityReport>& reports,
                           const std::string& config_digest) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out;
  out += "# fracpar-regularity 1\n";
  out += "# digest = " + config_digest + "\n";
  out +=
      "alpha,alpha_raw,holder_constant,fit_residual,bound_coverage,"
      "pair_count,bin_count,harnack_ratio,harnack_defined,sup_past,"
      "inf_future,min_value,resolution,center_x,center_y,center_t,radius,"
      "route,alpha_rel_delta,harnack_rel_delta,note\n";
  for (const RegularityReport& r : reports) {
    out += num(r.alpha) + "," + num(r.alpha_raw) + "," +
           num(r.holder_constant) + "," + num(r.fit_residual) + "," +
           num(r.bound_coverage) + "," + std::to_string(r.pair_count) + "," +
           std::to_string(r.bin_count) + "," + num(r.harnack_ratio) + "," +
           (r.harnack_defined ? "1" : "0") + "," + num(r.sup_past) + "," +
           num(r.inf_future) + "," + num(r.min_value) + "," +
           std::to_string(r.resolution) + "," + num(r.cube.center.x[0]) +
           "," + num(r.cube.center.x[1]) + "," + num(r.cube.center.t) + "," +
           num(r.cube.radius) + "," + route_name(r.route) + "," +
           (r.refinement.present ? num(r.refinement.alpha_rel_delta) : "") +
           "," +
           (r.refinement.present ? num(r.refinement.harnack_rel_delta) : "") +
           ",\"" + r.note + "\"\n";
  }
  return out;
}

void write_regularity_csv(const std::string& path,
                          const std::vector<RegularityReport>& reports,
                          const std::string& config_digest) {
  write_text_file(path, regularity_csv(reports, config_digest));
}

ConsistencyReport extension_consistency_check(const ParabolicOperator& op,
                                              const Field& u, double s,
                                              const ParabolicCube& cube) {
  check_s_range(s);
  require_same_grid(u, Field(op.grid()));
  ConsistencyReport rep;
  const Field fluct = subtract_mean(u);
  if (linf_norm(fluct) <= 1e-13 * (std::abs(field_mean(u)) + 1.0)) {
    return rep;  // constants extend to constants: exact zeros
  }

  const Grid& g = op.grid();
  const double lambda_max = std::max(1.0, 2.0 * cube.radius);
  const std::vector<double> coarse_ladder = default_lambda_ladder(lambda_max);
  std::vector<double> fine_ladder;
  for (std::size_t j = 0; j + 1 < coarse_ladder.size(); ++j) {
    fine_ladder.push_back(coarse_ladder[j]);
    fine_ladder.push_back(
        std::sqrt(coarse_ladder[j] * coarse_ladder[j + 1]));
  }
  fine_ladder.push_back(coarse_ladder.back());

  const QuadratureSpec quad = extension_quadrature_default();
  YosidaConfig cfg;
  cfg.sigma = 10.0 * op.norm_estimate();

  // Cube-supported separable test bank: C^inf bump in lambda on the inner
  // 80% of the ladder times a bump-masked random smooth shape.
  auto bump = [](double z) {
    return std::fabs(z) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0;
  };
  auto make_tests = [&](const TwoSidedProfile& p) {
    std::vector<LambdaTestFunction> tests;
    const double edge = 0.8 * std::fabs(p.lambdas.back());
    for (int m = 0; m < 3; ++m) {
      LambdaTestFunction t;
      t.lambda_factor.reserve(p.lambdas.size());
      for (double l : p.lambdas) t.lambda_factor.push_back(bump(l / edge));
      Field shape = smooth_field(g, 2026 + m, 3, 3, false);
      for (int it = 0; it < g.nt; ++it) {
        const double mt =
            bump(periodic_distance(it * g.dt(), cube.center.t, g.Lt) /
                 (cube.radius * cube.radius));
        for (int iy = 0; iy < (g.spatial_dims == 2 ? g.nx : 1); ++iy) {
          double mxy = bump(
              periodic_distance(iy * g.dx(), cube.center.x[1], g.Lx) /
              cube.radius);
          if (g.spatial_dims == 1) mxy = 1.0;
          for (int ix = 0; ix < g.nx; ++ix) {
            const double mx =
                bump(periodic_distance(ix * g.dx(), cube.center.x[0], g.Lx) /
                     cube.radius);
            const std::size_t idx = g.spatial_dims == 1
                                        ? g.index1(ix, it)
                                        : g.index2(ix, iy, it);
            shape[idx] *= mx * mxy * mt;
          }
        }
      }
      t.shape = std::move(shape);
      tests.push_back(std::move(t));
    }
    return tests;
  };

  const ExtensionProfile coarse_profile =
      extension_profile(op, u, s, coarse_ladder, cfg, quad);
  const TwoSidedProfile coarse_two = reflect_even(coarse_profile);
  rep.coarse = weak_residual(coarse_two, op, make_tests(coarse_two));

  const ExtensionProfile fine_profile =
      extension_profile(op, u, s, fine_ladder, cfg, quad);
  const TwoSidedProfile fine_two = reflect_even(fine_profile);
  rep.fine = weak_residual(fine_two, op, make_tests(fine_two));

  // Yosida convergence: rms slice discrepancy between consecutive sigma
  // doublings, evaluated on the shared coarse ladder.
  auto rms_gap = [&](const ExtensionProfile& a, const ExtensionProfile& b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.slices.size(); ++j) {
      const double d = l2_norm(a.slices[j] - b.slices[j]);
      acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(a.slices.size()));
  };
  YosidaConfig cfg2 = cfg, cfg4 = cfg;
  cfg2.sigma = 2.0 * cfg.sigma;
  cfg4.sigma = 4.0 * cfg.sigma;
  const ExtensionProfile p2 =
      extension_profile(op, u, s, coarse_ladder, cfg2, quad);
  const ExtensionProfile p4 =
      extension_profile(op, u, s, coarse_ladder, cfg4, quad);
  rep.discrepancy_base = rms_gap(p2, coarse_profile);
  const double gap2 = rms_gap(p4, p2);
  rep.sigma_doubling_ratio =
      rep.discrepancy_base > 0.0 ? gap2 / rep.discrepancy_base : 0.0;
  return rep;
}

}  // namespace fracpar
