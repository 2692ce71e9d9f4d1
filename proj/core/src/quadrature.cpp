#include "fracpar/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "fracpar/errors.hpp"
#include "fracpar/special.hpp"

namespace fracpar {

namespace {

// Golub-Welsch: eigen-decomposition of the symmetric tridiagonal matrix built
// from the three-term recurrence; nodes are the eigenvalues and each weight is
// mu0 times the squared first component of the normalized eigenvector.
QuadratureRule golub_welsch(const std::vector<double>& diag,
                            const std::vector<double>& offdiag, double mu0) {
  const int n = static_cast<int>(diag.size());
  Eigen::VectorXd d(n), e(n > 1 ? n - 1 : 0);
  for (int i = 0; i < n; ++i) d[i] = diag[i];
  for (int i = 0; i + 1 < n; ++i) e[i] = offdiag[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("quadrature: tridiagonal eigensolve failed");
  }
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()[i];
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_laguerre(int n, double alpha) {
  if (n < 1 || !(alpha > -1.0)) {
    throw InvalidArgumentError("gauss_laguerre: need n >= 1 and alpha > -1");
  }
  std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k * (k + alpha));
  return golub_welsch(diag, off, std::tgamma(alpha + 1.0));
}

QuadratureRule gauss_jacobi(int n, double a, double b) {
  if (n < 1 || !(a > -1.0) || !(b > -1.0)) {
    throw InvalidArgumentError("gauss_jacobi: need n >= 1 and a, b > -1");
  }
  std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
  const double ab = a + b;
  diag[0] = (b - a) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + ab;
    diag[k] = (b * b - a * a) / (t * (t + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double t = 2.0 * k + ab;
    const double num = 4.0 * k * (k + a) * (k + b) * (k + ab);
    off[k - 1] = std::sqrt(num / (t * t * (t * t - 1.0)));
  }
  const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(a + 1.0) *
                     std::tgamma(b + 1.0) / std::tgamma(ab + 2.0);
  return golub_welsch(diag, off, mu0);
}

double trapezoid_geometric_tail(double a, double h, double Y) {
  return 0.5 * h / std::tanh(0.5 * a * h) * std::exp(-a * Y);
}

}  // namespace fracpar
