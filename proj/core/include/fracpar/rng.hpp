#pragma once

#include <cstdint>

#include "fracpar/field.hpp"

namespace fracpar {

// Documented 64-bit linear congruential generator.  Seeded runs must be
// reproducible bit-exactly across implementations and languages, so the
// recurrence and the float mapping are part of the external contract:
//   state <- state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
//   unit  <- (state >> 11) * 2^-53
// Complex coefficients draw the real part first, then the imaginary part,
// each scaled to (-1, 1).
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ = state_ * 6364136223846793005ull + 1442695040888963407ull;
    return state_;
  }
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  cplx coeff() {
    double re = 2.0 * unit() - 1.0;
    double im = 2.0 * unit() - 1.0;
    return cplx(re, im);
  }

 private:
  std::uint64_t state_;
};

// Band-limited random field.  Modes are visited in a fixed documented order
// (kx outer ascending from -mx to mx, then ky for n = 2, then kt innermost),
// every mode consumes exactly two generator draws whether or not its
// coefficient is kept, and the coefficient of mode k is
// coeff / (1 + |k_x|^2 + |k_t|^2).  `mean_free` zeroes the constant mode;
// `spatial_only` zeroes every mode with k_t != 0.
Field smooth_field(const Grid& grid, std::uint64_t seed, int mx, int mt,
                   bool mean_free = true, bool spatial_only = false);

// Equal-amplitude spatial band: modes kx in -khi..-klo then klo..khi, kt = 0.
// One-dimensional grids only.
Field banded_spatial_field(const Grid& grid, std::uint64_t seed, int klo,
                           int khi);

}  // namespace fracpar
