// fracpar: command-line front end for the fractional parabolic toolkit.
//
// fracpar {frac|extend|dtn|kernel|dirichlet|holder|harnack|validate}
//         --config <path> [--set key=value ...] [--threads N]
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
// 4 acceptance failure.  All artifacts land in `out.dir` together with a
// manifest carrying the tool version and the config digest; identical
// configurations produce byte-identical outputs.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fracpar/acceptance.hpp"
#include "fracpar/coefficients.hpp"
#include "fracpar/config.hpp"
#include "fracpar/errors.hpp"
#include "fracpar/extension.hpp"
#include "fracpar/field.hpp"
#include "fracpar/fractional.hpp"
#include "fracpar/grid.hpp"
#include "fracpar/io.hpp"
#include "fracpar/kernels.hpp"
#include "fracpar/operator.hpp"
#include "fracpar/parallel.hpp"
#include "fracpar/quadrature.hpp"
#include "fracpar/regularity.hpp"
#include "fracpar/rng.hpp"
#include "fracpar/semigroup.hpp"
#include "fracpar/version.hpp"

namespace {

using namespace fracpar;

// ---------------------------------------------------------------------------
// Config-driven builders.  Defaults are the documented ones; validate_config
// has already checked the ranges of every present key.

Grid grid_from(const RunConfig& c) {
  return Grid::make(c.get_int("grid.spatial_dims", 1),
                    c.get_int("grid.nx", 32), c.get_int("grid.nt", 32),
                    c.get_double("grid.Lx", 1.0), c.get_double("grid.Lt", 1.0));
}

CoefficientField coeffs_from(const RunConfig& c, const Grid& grid) {
  if (c.has("coeff.file")) {
    CoefficientField A = read_coefficients_fracpar1(c.get("coeff.file", ""));
    if (A.grid != grid) {
      throw ConfigError("coeff.file grid does not match grid.* settings");
    }
    return A;
  }
  return CoefficientField::builtin(grid, c.get("coeff.builtin", "identity"));
}

Field field_from(const RunConfig& c, const Grid& grid) {
  const std::string kind = c.get("field.kind", "smooth");
  const std::uint64_t seed = c.get_uint64("seed", 1);
  if (kind == "constant") {
    Field f(grid);
    const cplx v(c.get_double("field.value", 1.0), 0.0);
    for (cplx& x : f.values) x = v;
    return f;
  }
  if (kind == "smooth") {
    return smooth_field(grid, seed, c.get_int("field.mx", 3),
                        c.get_int("field.mt", 3),
                        c.get_bool("field.mean_free", true));
  }
  if (kind == "banded") {
    return banded_spatial_field(grid, seed, c.get_int("field.klo", 8),
                                c.get_int("field.khi", 12));
  }
  if (kind == "exp-smooth") {
    const Field base = smooth_field(grid, seed, c.get_int("field.mx", 3),
                                    c.get_int("field.mt", 3), false);
    Field f(grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
      f[i] = cplx(std::exp(base[i].real()), 0.0);
    }
    return f;
  }
  if (kind == "file") {
    Field f = read_field_fracpar1(c.get("field.file", ""));
    if (f.grid != grid) {
      throw ConfigError("field.file grid does not match grid.* settings");
    }
    return f;
  }
  throw ConfigError("field.kind must be smooth, banded, exp-smooth, or file");
}

ParabolicOperator op_from(const RunConfig& c, const CoefficientField& A) {
  const TimeDerivativeMode mode = c.get("time.mode", "spectral") == "spectral"
                                      ? TimeDerivativeMode::spectral
                                      : TimeDerivativeMode::factorized;
  return ParabolicOperator(A, mode, c.get_double("solver.tol", 1e-10),
                           c.get_int("solver.max_iter", 500));
}

YosidaConfig yosida_from(const RunConfig& c) {
  YosidaConfig cfg;
  cfg.sigma = c.get_double("yosida.sigma", 0.0);  // 0 = caller-side choice
  cfg.poisson_tail_tol = c.get_double("yosida.tail_tol", 1e-12);
  cfg.max_terms = c.get_int("yosida.max_terms", 4000000);
  return cfg;
}

QuadratureSpec quad_from(const RunConfig& c, QuadratureSpec fallback) {
  QuadratureSpec q = fallback;
  if (c.has("quad.scheme")) {
    const std::string s = c.get("quad.scheme", "");
    if (s == "log_trapezoid") q.scheme = QuadratureScheme::log_trapezoid;
    if (s == "gauss_jacobi") q.scheme = QuadratureScheme::gauss_jacobi;
    if (s == "gauss_laguerre") q.scheme = QuadratureScheme::gauss_laguerre;
  }
  q.node_count = c.get_int("quad.nodes", q.node_count);
  q.lower = c.get_double("quad.lower", q.lower);
  q.upper = c.get_double("quad.upper", q.upper);
  q.target_tol = c.get_double("quad.target_tol", q.target_tol);
  return q;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(std::stod(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

// Output directory plus the reproducibility manifest every command writes.
std::string prepare_out_dir(const RunConfig& c) {
  const std::string dir = c.get("out.dir", "out");
  std::filesystem::create_directories(dir);
  std::string manifest;
  manifest += std::string("tool = ") + kToolName + " " + kVersion + "\n";
  manifest += "config_digest = " + config_digest(c) + "\n";
  manifest += "\n" + canonical_config_text(c);
  write_text_file(dir + "/manifest.txt", manifest);
  return dir;
}

double rel_l2(const Field& a, const Field& ref) {
  Field d = a;
  axpy(cplx(-1.0, 0.0), ref, d);
  const double n = l2_norm(ref);
  return n > 0.0 ? l2_norm(d) / n : l2_norm(d);
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_frac(const RunConfig& c) {
  const Grid grid = grid_from(c);
  const CoefficientField A = coeffs_from(c, grid);
  const ParabolicOperator op = op_from(c, A);
  const Field u = field_from(c, grid);
  const double s = c.get_double("frac.s", 0.5);
  const std::string dir = prepare_out_dir(c);

  std::vector<std::string> routes;
  {
    const std::string text = c.get("frac.routes", "fourier");
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t comma = text.find(',', pos);
      if (comma == std::string::npos) comma = text.size();
      routes.push_back(text.substr(pos, comma - pos));
      pos = comma + 1;
    }
  }

  std::vector<Field> results;
  for (const std::string& route : routes) {
    Field r;
    if (route == "fourier") {
      r = hs_fourier(u, s, A);
    } else if (route == "balakrishnan") {
      r = hs_balakrishnan(op, u, s,
                          quad_from(c, QuadratureSpec::balakrishnan_default()));
    } else if (route == "semigroup") {
      r = hs_semigroup(op, u, s, yosida_from(c),
                       quad_from(c, QuadratureSpec::semigroup_default()));
    } else {
      throw ConfigError("unknown route in frac.routes: " + route);
    }
    write_field_fracpar1(dir + "/hs_" + route + ".f1", r);
    results.push_back(std::move(r));
  }

  // Cross-route error table against the first requested route; a single
  // route leaves the file empty by design.
  std::string csv;
  if (routes.size() > 1) {
    csv = "reference,route,rel_l2_err\n";
    for (std::size_t i = 1; i < routes.size(); ++i) {
      csv += routes[0] + "," + routes[i] + "," +
             format_double(rel_l2(results[i], results[0])) + "\n";
    }
  }
  write_text_file(dir + "/route_errors.csv", csv);
  std::printf("frac: wrote %zu route field(s) to %s\n", routes.size(),
              dir.c_str());
  return 0;
}

int cmd_extend(const RunConfig& c) {
  const Grid grid = grid_from(c);
  const CoefficientField A = coeffs_from(c, grid);
  const ParabolicOperator op = op_from(c, A);
  const Field u = field_from(c, grid);
  const double s = c.get_double("frac.s", 0.5);
  const double lambda_max = c.get_double("extend.lambda_max", 1.0);
  const std::string dir = prepare_out_dir(c);

  std::vector<double> lambdas;
  if (c.has("extend.nlambda")) {
    const int n = c.get_int("extend.nlambda", 32);
    const double lo = lambda_max * 1e-3;
    for (int j = 0; j < n; ++j) {
      lambdas.push_back(lo * std::pow(lambda_max / lo,
                                      double(j) / double(n - 1)));
    }
  } else {
    lambdas = default_lambda_ladder(lambda_max);
  }

  const ExtensionProfile prof =
      extension_profile(op, u, s, lambdas, yosida_from(c),
                        quad_from(c, extension_quadrature_default()));
  write_profile_archive(dir + "/profile", prof, config_digest(c));

  std::string csv = "lambda,slice_l2,slice_linf\n";
  for (std::size_t j = 0; j < prof.lambdas.size(); ++j) {
    csv += format_double(prof.lambdas[j]) + "," +
           format_double(l2_norm(prof.slices[j])) + "," +
           format_double(linf_norm(prof.slices[j])) + "\n";
  }
  write_text_file(dir + "/profile_summary.csv", csv);
  std::printf("extend: wrote %zu profile slices to %s\n", prof.slices.size(),
              dir.c_str());
  return 0;
}

int cmd_dtn(const RunConfig& c) {
  const Grid grid = grid_from(c);
  const CoefficientField A = coeffs_from(c, grid);
  const ParabolicOperator op = op_from(c, A);
  const Field u = field_from(c, grid);
  const std::vector<double> ss = parse_list(c.get("dtn.s_list", "0.5"));
  const std::string dir = prepare_out_dir(c);

  const std::vector<DtnLadder> ladders = dtn_ladder_multi(
      op, u, ss, yosida_from(c), quad_from(c, dtn_quadrature_default()));

  std::string csv = "s,rung,lambda,flux_l2,rel_err_vs_multiplier\n";
  for (std::size_t i = 0; i < ladders.size(); ++i) {
    const DtnLadder& lad = ladders[i];
    // Against the multiplier route when it exists (constant coefficients):
    // rungs and limit approximate c_s H^s u.
    Field ref;
    bool has_ref = A.is_constant();
    if (has_ref) {
      ref = hs_fourier(u, lad.s, A);
      ref *= cplx(cs_constant(lad.s), 0.0);
    }
    for (std::size_t j = 0; j < lad.rungs.size(); ++j) {
      csv += format_double(lad.s) + "," + std::to_string(j) + "," +
             format_double(lad.lambdas[j]) + "," +
             format_double(l2_norm(lad.rungs[j])) + "," +
             (has_ref ? format_double(rel_l2(lad.rungs[j], ref)) : "") + "\n";
    }
    csv += format_double(lad.s) + ",extrapolated,," +
           format_double(l2_norm(lad.extrapolated)) + "," +
           (has_ref ? format_double(rel_l2(lad.extrapolated, ref)) : "") +
           "\n";
    write_field_fracpar1(dir + "/dtn_" + std::to_string(i) + ".f1",
                         lad.extrapolated);
  }
  write_text_file(dir + "/dtn_summary.csv", csv);
  std::printf("dtn: wrote %zu ladder(s) to %s\n", ladders.size(), dir.c_str());
  return 0;
}

int cmd_kernel(const RunConfig& c) {
  const Grid grid = grid_from(c);
  const CoefficientField A = coeffs_from(c, grid);
  const ParabolicOperator op = op_from(c, A);
  const std::string dir = prepare_out_dir(c);

  const int source_ix = c.get_int("kernel.source_ix", grid.nx / 2);
  const int source_iy =
      grid.spatial_dims == 2 ? c.get_int("kernel.source_iy", grid.nx / 2) : 0;
  const int source_it = c.get_int("kernel.source_it", 0);
  const double horizon = c.get_double(
      "kernel.horizon", grid.dt() * double(grid.nt - 1 - source_it));

  const KernelColumn col =
      fundamental_solution_column(op, source_ix, source_iy, source_it, horizon);
  write_kernel_column(dir + "/kernel", col, config_digest(c));

  double mass_defect = 0.0;
  const int last =
      source_it + static_cast<int>(std::lround(horizon / grid.dt()));
  for (int it = source_it; it <= last; ++it) {
    mass_defect = std::max(mass_defect,
                           std::abs(kernel_slice_mass(col, it) - 1.0));
  }
  double min_v = 0.0, max_v = 0.0;
  for (const cplx& v : col.values.values) {
    min_v = std::min(min_v, v.real());
    max_v = std::max(max_v, v.real());
  }
  const GaussianFitReport fit =
      gaussian_bound_fit(col, c.get_double("kernel.fit_tmin", 0.15 * horizon),
                         c.get_double("kernel.fit_tmax", 0.85 * horizon),
                         c.get_double("kernel.radius_factor", 3.5));

  std::string csv = "metric,value\n";
  csv += "slice_mass_max_defect," + format_double(mass_defect) + "\n";
  csv += "min_value," + format_double(min_v) + "\n";
  csv += "max_value," + format_double(max_v) + "\n";
  csv += "total_mass," + format_double(kernel_total_mass(col)) + "\n";
  csv += "gauss_envelope_C," + format_double(fit.C) + "\n";
  csv += "gauss_rate_c," + format_double(fit.c) + "\n";
  csv += "gauss_dominated_fraction," + format_double(fit.dominated_fraction) +
         "\n";
  csv += "gauss_violations," + std::to_string(fit.violations) + "\n";
  csv += "gauss_slices," + std::to_string(fit.slices) + "\n";
  csv += "gauss_points," + std::to_string(fit.points) + "\n";

  if (c.has("kernel.resolvent_order")) {
    const int m = c.get_int("kernel.resolvent_order", 1);
    const double sigma =
        c.get_double("kernel.sigma", 10.0 * op.norm_estimate());
    const KernelColumn rcol =
        resolvent_kernel(op, sigma, m, source_ix, source_iy, source_it);
    write_kernel_column(dir + "/resolvent_kernel", rcol, config_digest(c));
    csv += "resolvent_total_mass," + format_double(kernel_total_mass(rcol)) +
           "\n";
  }
  write_text_file(dir + "/kernel_report.csv", csv);
  std::printf("kernel: wrote column and report to %s\n", dir.c_str());
  return 0;
}

SpaceTimeBox box_from(const RunConfig& c, const Grid& grid) {
  SpaceTimeBox box;
  box.center_x[0] = c.get_double("dirichlet.center_x", 0.5 * grid.Lx);
  box.center_x[1] = c.get_double("dirichlet.center_y", 0.5 * grid.Lx);
  box.half_x[0] = c.get_double("dirichlet.half_x", 0.25 * grid.Lx);
  box.half_x[1] = c.get_double("dirichlet.half_y", 0.25 * grid.Lx);
  box.center_t = c.get_double("dirichlet.center_t", 0.5 * grid.Lt);
  box.half_t = c.get_double("dirichlet.half_t", 0.25 * grid.Lt);
  return box;
}

ParabolicCube cube_from(const RunConfig& c, const Grid& grid) {
  ParabolicCube cube;
  cube.center.x[0] = c.get_double("cube.center_x", 0.5 * grid.Lx);
  cube.center.x[1] = c.get_double("cube.center_y", 0.5 * grid.Lx);
  cube.center.t = c.get_double("cube.center_t", 0.5 * grid.Lt);
  cube.radius = c.get_double("cube.radius", 0.125 * grid.Lx);
  return cube;
}

int cmd_dirichlet(const RunConfig& c) {
  const Grid grid = grid_from(c);
  const CoefficientField A = coeffs_from(c, grid);
  const ParabolicOperator op = op_from(c, A);
  const std::string dir = prepare_out_dir(c);

  NonlocalDirichletProblem prob;
  prob.s = c.get_double("frac.s", 0.5);
  prob.region = box_from(c, grid);
  prob.exterior_data = field_from(c, grid);
  prob.route = route_from_name(c.get("dirichlet.route", "fourier"));

  const Field sol = solve_nonlocal_dirichlet(prob, op);
  write_field_fracpar1(dir + "/solution.f1", sol);

  const std::vector<std::size_t> interior = interior_indices(grid, prob.region);
  double mn = std::numeric_limits<double>::infinity(), mx = -mn;
  for (std::size_t idx : interior) {
    mn = std::min(mn, sol[idx].real());
    mx = std::max(mx, sol[idx].real());
  }
  std::string csv = "metric,value\n";
  csv += "s," + format_double(prob.s) + "\n";
  csv += "route," + std::string(route_name(prob.route)) + "\n";
  csv += "interior_points," + std::to_string(interior.size()) + "\n";
  csv += "exterior_points," +
         std::to_string(grid.size() - interior.size()) + "\n";
  csv += "min_interior," + format_double(mn) + "\n";
  csv += "max_interior," + format_double(mx) + "\n";
  write_text_file(dir + "/dirichlet_report.csv", csv);
  std::printf("dirichlet: wrote solution (%zu interior points) to %s\n",
              interior.size(), dir.c_str());
  return 0;
}

int cmd_holder(const RunConfig& c) {
  const Grid grid = grid_from(c);
  const Field u = field_from(c, grid);
  const std::string dir = prepare_out_dir(c);
  const RegularityReport rep = holder_exponent_estimate(u, cube_from(c, grid));
  write_regularity_csv(dir + "/holder.csv", {rep}, config_digest(c));
  std::printf("holder: alpha=%s (raw %s), constant=%s, pairs=%ld -> %s\n",
              format_double(rep.alpha).c_str(),
              format_double(rep.alpha_raw).c_str(),
              format_double(rep.holder_constant).c_str(),
              static_cast<long>(rep.pair_count), dir.c_str());
  return 0;
}

int cmd_harnack(const RunConfig& c) {
  const Grid grid = grid_from(c);
  const Field u = field_from(c, grid);
  const std::string dir = prepare_out_dir(c);
  const RegularityReport rep = harnack_ratio(u, cube_from(c, grid));
  write_regularity_csv(dir + "/harnack.csv", {rep}, config_digest(c));
  std::printf("harnack: ratio=%s (defined=%d) -> %s\n",
              format_double(rep.harnack_ratio).c_str(),
              rep.harnack_defined ? 1 : 0, dir.c_str());
  return 0;
}

int cmd_validate(const RunConfig& c) {
  const std::string dir = prepare_out_dir(c);
  const AcceptanceSummary summary = run_acceptance();
  for (const CriterionResult& r : summary.results) {
    std::printf("criterion %d (%s): %s [%.2f s]\n  %s\n", r.number,
                r.name.c_str(), r.passed ? "PASS" : "FAIL", r.seconds,
                r.detail.c_str());
  }
  write_text_file(dir + "/acceptance.csv", acceptance_csv(summary));
  std::printf("validate: %s (%zu criteria, %.1f s) -> %s\n",
              summary.all_passed() ? "all passed" : "FAILURES PRESENT",
              summary.results.size(), summary.total_seconds(), dir.c_str());
  return summary.all_passed() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional powers of parabolic operators: multiplier, "
               "resolvent-quadrature, and semigroup routes; extension "
               "profiles; kernels; regularity probes"};
  app.require_subcommand(1);

  struct SubOpts {
    std::string config_path;
    std::vector<std::string> sets;
    int threads = 0;
  };
  const std::vector<std::pair<std::string, std::string>> names = {
      {"frac", "compute H^s u by the requested route(s)"},
      {"extend", "sample the degenerate extension profile U(lambda)"},
      {"dtn", "Dirichlet-to-Neumann flux ladder and extrapolated limit"},
      {"kernel", "fundamental-solution column, mass/positivity/Gaussian fit"},
      {"dirichlet", "solve the nonlocal Dirichlet problem on a box"},
      {"holder", "Holder exponent estimate on a parabolic cube"},
      {"harnack", "Harnack ratio on a parabolic cube"},
      {"validate", "run the acceptance gate and write the summary"},
  };
  std::map<std::string, SubOpts> opts;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, desc] : names) {
    CLI::App* sub = app.add_subcommand(name, desc);
    SubOpts& o = opts[name];
    sub->add_option("--config", o.config_path, "configuration file");
    sub->add_option("--set", o.sets, "override key=value");
    sub->add_option("--threads", o.threads, "cap worker threads");
    subs[name] = sub;
  }

  CLI11_PARSE(app, argc, argv);

  std::string chosen;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) chosen = name;
  }

  try {
    const SubOpts& o = opts[chosen];
    RunConfig cfg;
    if (!o.config_path.empty()) {
      try {
        cfg = load_config_file(o.config_path);
      } catch (const IoError& e) {
        // An unreadable configuration is a configuration problem (exit 2),
        // unlike I/O failures while writing outputs (exit 3).
        throw ConfigError(e.what());
      }
    }
    for (const std::string& kv : o.sets) apply_override(cfg, kv);
    validate_config(cfg);
    if (o.threads > 0) {
      set_thread_limit(o.threads);
    } else if (cfg.has("threads")) {
      set_thread_limit(cfg.get_int("threads", 0));
    }

    if (chosen == "frac") return cmd_frac(cfg);
    if (chosen == "extend") return cmd_extend(cfg);
    if (chosen == "dtn") return cmd_dtn(cfg);
    if (chosen == "kernel") return cmd_kernel(cfg);
    if (chosen == "dirichlet") return cmd_dirichlet(cfg);
    if (chosen == "holder") return cmd_holder(cfg);
    if (chosen == "harnack") return cmd_harnack(cfg);
    if (chosen == "validate") return cmd_validate(cfg);
    std::fprintf(stderr, "fracpar: unknown command\n");
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "fracpar: invalid config: %s\n", e.what());
    return 2;
  } catch (const InvalidArgumentError& e) {
    std::fprintf(stderr, "fracpar: invalid config: %s\n", e.what());
    return 2;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "fracpar: numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fracpar: failure: %s\n", e.what());
    return 3;
  }
}
