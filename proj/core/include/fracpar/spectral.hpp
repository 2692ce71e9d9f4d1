#pragma once

#include <functional>

#include "fracpar/field.hpp"

namespace fracpar {

// Discrete frequencies and symbols.  Index k on an axis of m points carries
// the signed wave number k or k-m (whichever has magnitude <= m/2); the
// Nyquist index k = m/2 is assigned the POSITIVE frequency.  That choice makes
// sign(tau) = +1 at Nyquist, so the half-derivative/Hilbert factorization of
// the time derivative below is exact on every mode.
std::vector<double> tau_values(const Grid& grid);   // length nt: 2*pi*k~/Lt
std::vector<double> xi_values(const Grid& grid);    // length nx: 2*pi*k~/Lx

// Symbol of the flux-form second-difference stencil on one spatial axis:
// g(k) = 2(1 - cos(xi dx))/dx^2.  It equals |forward-difference symbol|^2,
// which the square-root comparisons rely on.
std::vector<double> flux_symbol(const Grid& grid);  // length nx

// Multiplies every Fourier coefficient by m(g_total, tau), where g_total sums
// the stencil symbol over the spatial axes of the mode.
Field apply_symbol(const Field& u,
                   const std::function<cplx(double g, double tau)>& m);
// Same, acting in place on an already-transformed coefficient array.
void apply_symbol_spectrum(const Grid& grid, cplx* spectrum,
                           const std::function<cplx(double g, double tau)>& m);

// Fractional half-derivative in time: multiplier |tau|^{1/2} (sign-free).
Field half_time_derivative(const Field& u);

// Periodic Hilbert transform in time.  Convention: with coefficients taken in
// the analysis convention u^(tau) = integral of u e^{+i tau t} dt, the symbol
// is the classical -i sign(tau).  On the amplitudes of the synthesis
// exponentials e^{+i tau t} produced by fft_forward, that is +i sign(tau),
// which is what this function applies.  The convention is pinned down by the
// requirement that half_time_derivative(hilbert_transform_t(
// half_time_derivative(u))) reproduce time_derivative(u) exactly on every
// mode, including Nyquist (whose frequency is taken positive).
Field hilbert_transform_t(const Field& u);

// Exact spectral time derivative (multiplier i*tau).
Field time_derivative(const Field& u);

// Forward-difference gradient, one component per spatial axis:
// (u(x + dx e_a) - u(x))/dx with periodic wrap.
std::vector<Field> gradient_forward(const Field& u);

// sqrt(||u||^2 + sum_a ||D+_a u||^2 + ||D_t^{1/2} u||^2).
double energy_norm(const Field& u);

// Graph-type norm of order s in (0,1):
// sqrt(||u||^2 + ||F^{-1}((g + i tau)^{s/2} F u)||^2) with the principal
// branch and the stencil symbol g as the spatial part, so scale comparisons
// with the discrete gradient and operator are exact on the lattice.
double parabolic_sobolev_norm(const Field& u, double s);

}  // namespace fracpar
