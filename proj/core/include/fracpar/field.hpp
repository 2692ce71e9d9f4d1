#pragma once

#include <complex>
#include <vector>

#include "fracpar/grid.hpp"

namespace fracpar {

using cplx = std::complex<double>;

// Complex scalar samples on a Grid; the discrete stand-in for an element of
// L^2 of the space-time torus.  Values are laid out row-major with x fastest
// and t slowest.  Fields behave as immutable values in the numerical routines:
// operations return fresh fields instead of mutating inputs.
struct Field {
  Grid grid;
  std::vector<cplx> values;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), values(g.size(), cplx(0.0)) {}
  Field(const Grid& g, std::vector<cplx> v);

  std::size_t size() const { return values.size(); }
  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }

  bool all_finite() const;
};

void require_same_grid(const Field& u, const Field& v);
void require_finite(const Field& u, const char* where);

// Riemann-sum inner product and norm: conjugation on the second slot, every
// sample weighted by the cell measure dx^n * dt.  Reductions use a fixed
// pairwise summation order, so results are reproducible and thread-count
// independent.
double l2_norm(const Field& u);
cplx l2_inner(const Field& u, const Field& v);
double linf_norm(const Field& u);

cplx field_mean(const Field& u);              // average value = P0 projection
Field subtract_mean(const Field& u);

// Elementwise helpers.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(cplx a, const Field& u);
Field& operator+=(Field& a, const Field& b);
Field& operator-=(Field& a, const Field& b);
Field& operator*=(Field& a, cplx c);
void axpy(cplx a, const Field& x, Field& y);  // y += a*x

namespace detail {
// Deterministic pairwise sum over a contiguous range of doubles.
double pairwise_sum(const double* p, std::size_t n);
cplx pairwise_sum_cplx(const cplx* p, std::size_t n);
}  // namespace detail

}  // namespace fracpar
