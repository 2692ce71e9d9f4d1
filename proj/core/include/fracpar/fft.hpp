#pragma once

#include "fracpar/field.hpp"

namespace fracpar {

// Full-rank complex DFT over all grid axes (t slowest, x fastest), matching
// the Field layout.  The forward transform is unnormalized with exponent
// e^{-i...}; the inverse is normalized by 1/size, so inverse(forward(u)) = u.
// A coefficient hat_u[k] produced by the forward transform is the amplitude of
// the synthesis exponential e^{+i(xi.x + tau t)} of mode k.
//
// Plans are cached per (grid shape, direction) behind a mutex and executed
// with the new-array interface, so concurrent transforms on distinct buffers
// are safe.  in and out must be distinct buffers of grid.size() entries.
void fft_forward(const Grid& grid, const cplx* in, cplx* out);
void fft_inverse(const Grid& grid, const cplx* in, cplx* out);

std::vector<cplx> fft_forward(const Field& u);
Field fft_inverse(const Grid& grid, const std::vector<cplx>& spectrum);

}  // namespace fracpar
