#include "fracpar/field.hpp"

#include <cmath>
#include <string>

namespace fracpar {
namespace detail {

double pairwise_sum(const double* p, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(p, h) + pairwise_sum(p + h, n - h);
}

cplx pairwise_sum_cplx(const cplx* p, std::size_t n) {
  if (n <= 8) {
    cplx s(0.0);
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum_cplx(p, h) + pairwise_sum_cplx(p + h, n - h);
}

namespace {

template <typename F>
double pairwise_map_sum(std::size_t lo, std::size_t hi, const F& f) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_map_sum(lo, mid, f) + pairwise_map_sum(mid, hi, f);
}

template <typename F>
cplx pairwise_map_sum_cplx(std::size_t lo, std::size_t hi, const F& f) {
  if (hi - lo <= 8) {
    cplx s(0.0);
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_map_sum_cplx(lo, mid, f) + pairwise_map_sum_cplx(mid, hi, f);
}

}  // namespace
}  // namespace detail

Field::Field(const Grid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.size()) {
    throw InvalidArgumentError("Field: value count " +
                               std::to_string(values.size()) +
                               " does not match grid size " +
                               std::to_string(g.size()));
  }
}

bool Field::all_finite() const {
  for (const cplx& z : values) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

void require_same_grid(const Field& u, const Field& v) {
  if (!(u.grid == v.grid)) {
    throw GridMismatchError("fields live on different grids");
  }
}

void require_finite(const Field& u, const char* where) {
  if (!u.all_finite()) {
    throw InvalidArgumentError(std::string(where) +
                               ": input field contains NaN or Inf");
  }
}

double l2_norm(const Field& u) {
  double s = detail::pairwise_map_sum(0, u.size(), [&](std::size_t i) {
    return std::norm(u.values[i]);
  });
  return std::sqrt(s * u.grid.cell_measure());
}

cplx l2_inner(const Field& u, const Field& v) {
  require_same_grid(u, v);
  cplx s = detail::pairwise_map_sum_cplx(0, u.size(), [&](std::size_t i) {
    return u.values[i] * std::conj(v.values[i]);
  });
  return s * u.grid.cell_measure();
}

double linf_norm(const Field& u) {
  double m = 0.0;
  for (const cplx& z : u.values) m = std::max(m, std::abs(z));
  return m;
}

cplx field_mean(const Field& u) {
  cplx s = detail::pairwise_sum_cplx(u.values.data(), u.size());
  return s / static_cast<double>(u.size());
}

Field subtract_mean(const Field& u) {
  cplx m = field_mean(u);
  Field out = u;
  for (cplx& z : out.values) z -= m;
  return out;
}

Field operator+(const Field& a, const Field& b) {
  require_same_grid(a, b);
  Field out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += b.values[i];
  return out;
}

Field operator-(const Field& a, const Field& b) {
  require_same_grid(a, b);
  Field out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] -= b.values[i];
  return out;
}

Field operator*(cplx a, const Field& u) {
  Field out = u;
  for (cplx& z : out.values) z *= a;
  return out;
}

Field& operator+=(Field& a, const Field& b) {
  require_same_grid(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) a.values[i] += b.values[i];
  return a;
}

Field& operator-=(Field& a, const Field& b) {
  require_same_grid(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) a.values[i] -= b.values[i];
  return a;
}

Field& operator*=(Field& a, cplx c) {
  for (cplx& z : a.values) z *= c;
  return a;
}

void axpy(cplx a, const Field& x, Field& y) {
  require_same_grid(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) y.values[i] += a * x.values[i];
}

}  // namespace fracpar
