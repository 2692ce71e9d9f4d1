#pragma once

#include <vector>

#include "fracpar/operator.hpp"

namespace fracpar {

// Settings for the Yosida realization of S(r) = e^{-rH}: the approximant
// S_sigma(r) = e^{-r H_sigma} with H_sigma = sigma*H*(sigma+H)^{-1} expands
// into the Poisson-weighted series sum_m e^{-mu} mu^m/m! (sigma R_sigma)^m
// with mu = sigma*r, every term of which is a contraction.
struct YosidaConfig {
  double sigma = 0.0;              // approximation parameter; 0 = caller picks
  double poisson_tail_tol = 1e-12; // truncation tolerance, must be in (0, 1e-6]
  long max_terms = 4'000'000;      // hard cap on the series index m

  void validate() const;
};

// Truncation window of the Poisson(mu) weight sequence: indices lo..hi carry
// all but at most the stated outside mass, with weights[m - lo] the exact
// weight e^{-mu} mu^m / m! evaluated by a stable log-space recurrence.
struct PoissonWindow {
  long lo = 0;
  long hi = 0;
  std::vector<double> weights;
  double tail_mass = 0.0;  // exact upper-tail mass dropped beyond hi
};

// Builds the window for mean mu: lo is the two-sided heuristic
// max(0, mu - 12*sqrt(mu+1)) (outside mass far below any supported
// tolerance), hi is the smallest index whose remaining upper-tail mass is
// <= tail_tol, found by exact tail evaluation starting from the heuristic
// bracket mu + 12*sqrt(mu+1).  Throws NumericalError, carrying the achieved
// tail mass, when no admissible hi <= max_terms exists.
PoissonWindow poisson_window(double mu, double tail_tol, long max_terms);

// One Yosida step sigma*(sigma+H)^{-1} u; a contraction up to solver slack.
Field yosida_resolvent_step(const ParabolicOperator& op, const YosidaConfig& cfg,
                            const Field& u);

// S_sigma(r) u via the truncated Poisson series.  r = 0 returns u exactly.
Field semigroup_apply(const ParabolicOperator& op, const YosidaConfig& cfg,
                      double r, const Field& u);

// Evaluates S_sigma(r) u for every r in rs with a single resolvent chain:
// the powers (sigma R_sigma)^m u are computed once and accumulated into each
// request's Poisson window.  Results are in the order of rs.
std::vector<Field> semigroup_apply_batch(const ParabolicOperator& op,
                                         const YosidaConfig& cfg,
                                         const std::vector<double>& rs,
                                         const Field& u);

// A-posteriori error bound r * ||(H_sigma - H) u||_2 on the Yosida
// substitution, with H_sigma u computed as sigma*(sigma+H)^{-1} (H u).
double semigroup_error_bound(const ParabolicOperator& op,
                             const YosidaConfig& cfg, double r, const Field& u);

// Default sigma recommendation max(10/r_min, 10*||H||_est): large enough to
// keep the Yosida error O(1/sigma) small against the shortest requested time,
// short enough to keep the series length mu = sigma*r manageable.
double recommended_sigma(const ParabolicOperator& op, double r_min);

}  // namespace fracpar
