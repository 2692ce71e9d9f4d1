#include "fracpar/gmres.hpp"

#include <cmath>
#include <vector>

namespace fracpar {

namespace {

using cplx = std::complex<double>;

double vec_norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx vec_dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

}  // namespace

GmresResult gmres_solve(std::size_t n, const LinearMap& A, const LinearMap& Minv,
                        const cplx* b, cplx* x, const GmresOptions& opts) {
  GmresResult result;
  const int restart = std::max(1, opts.restart);

  std::vector<cplx> r(n), tmp(n), z(n);
  double bnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) bnorm += std::norm(b[i]);
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) {
    for (std::size_t i = 0; i < n; ++i) x[i] = cplx(0.0);
    result.converged = true;
    return result;
  }
  const double target = opts.tol * bnorm;

  auto true_residual = [&]() {
    A(x, tmp.data());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = b[i] - tmp[i];
      s += std::norm(r[i]);
    }
    return std::sqrt(s);
  };

  double rnorm = true_residual();
  int total_iters = 0;

  while (rnorm > target && total_iters < opts.max_iter) {
    // Arnoldi basis for the right-preconditioned operator A M^{-1}.
    std::vector<std::vector<cplx>> V;
    V.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / rnorm;

    const int m = restart;
    std::vector<std::vector<cplx>> H(m + 1, std::vector<cplx>(m, cplx(0.0)));
    std::vector<cplx> cs(m), sn(m), g(m + 1, cplx(0.0));
    g[0] = rnorm;

    int k = 0;
    for (; k < m && total_iters < opts.max_iter; ++k, ++total_iters) {
      if (Minv) {
        Minv(V[k].data(), z.data());
      } else {
        z = V[k];
      }
      V.emplace_back(n);
      A(z.data(), V[k + 1].data());

      // Modified Gram-Schmidt.
      for (int j = 0; j <= k; ++j) {
        cplx h = vec_dot(V[k + 1], V[j]);
        H[j][k] = h;
        for (std::size_t i = 0; i < n; ++i) V[k + 1][i] -= h * V[j][i];
      }
      double hnorm = vec_norm(V[k + 1]);
      H[k + 1][k] = hnorm;
      if (hnorm > 0.0) {
        for (std::size_t i = 0; i < n; ++i) V[k + 1][i] /= hnorm;
      }

      // Apply accumulated Givens rotations, then create a new one.
      for (int j = 0; j < k; ++j) {
        cplx t = std::conj(cs[j]) * H[j][k] + std::conj(sn[j]) * H[j + 1][k];
        H[j + 1][k] = -sn[j] * H[j][k] + cs[j] * H[j + 1][k];
        H[j][k] = t;
      }
      double denom = std::sqrt(std::norm(H[k][k]) + std::norm(H[k + 1][k]));
      if (denom == 0.0) {
        cs[k] = 1.0;
        sn[k] = 0.0;
      } else {
        cs[k] = H[k][k] / denom;
        sn[k] = H[k + 1][k] / denom;
      }
      H[k][k] = std::conj(cs[k]) * H[k][k] + std::conj(sn[k]) * H[k + 1][k];
      H[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = std::conj(cs[k]) * g[k];

      if (std::abs(g[k + 1]) <= target) {
        ++k;
        ++total_iters;
        break;
      }
    }

    // Back-substitution for the Krylov coefficients.
    std::vector<cplx> y(k, cplx(0.0));
    for (int i = k - 1; i >= 0; --i) {
      cplx s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
      y[i] = (H[i][i] != cplx(0.0)) ? s / H[i][i] : cplx(0.0);
    }
    // x += M^{-1} (V y)
    std::fill(tmp.begin(), tmp.end(), cplx(0.0));
    for (int j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < n; ++i) tmp[i] += y[j] * V[j][i];
    }
    if (Minv) {
      Minv(tmp.data(), z.data());
    } else {
      z = tmp;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] += z[i];

    rnorm = true_residual();
    if (k == 0) break;  // stagnation guard
  }

  result.iterations = total_iters;
  result.residual = rnorm / bnorm;
  result.converged = rnorm <= target * (1.0 + 1e-12) ||
                     result.residual <= opts.tol;
  return result;
}

}  // namespace fracpar
