#pragma once

#include <vector>

namespace fracpar {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Generalized Gauss-Laguerre rule: integrates f against tau^alpha e^{-tau} on
// (0, inf) exactly for polynomials of degree < 2n.  alpha > -1.  Built by the
// Golub-Welsch eigenvalue method; the weights sum to Gamma(alpha + 1).
QuadratureRule gauss_laguerre(int n, double alpha);

// Gauss-Jacobi rule on (-1, 1) against (1-x)^a (1+x)^b, a, b > -1.  Weights
// sum to 2^{a+b+1} B(a+1, b+1).
QuadratureRule gauss_jacobi(int n, double a, double b);

// Discrete-matched tail of a geometrically-decaying trapezoid sum: the value
// of h * sum_{k>=1} e^{-a (Y + k h)} plus half the endpoint term, i.e.
// (h/2) coth(a h / 2) e^{-a Y}.  Replacing an analytic remainder integral by
// this expression makes a truncated trapezoid rule on a uniform lattice in
// y = log(lambda) exact for pure-exponential integrands, which removes the
// O(h^2) Euler-Maclaurin endpoint error of plain analytic tails.
double trapezoid_geometric_tail(double a, double h, double Y);

}  // namespace fracpar
