#pragma once

#include <span>
#include <vector>

#include "ans/field.hpp"

namespace ans::reference {

/// Independent slow-path implementations used as oracles by the verification
/// suites. Nothing here shares code with the production transforms or norms.

/// O(N^2) discrete Fourier analysis with the library convention
/// coeff(m) = (1/N) sum_x f(x) e^{-i xi_m . x}.
SpectralField dft_forward(std::span<const double> phys, const Grid& g);
std::vector<cplx> dft_inverse(const SpectralField& f);

/// Convolution of coefficient lists over the integer lattice (no wrap):
/// (a * b)(m) = sum_q a(q) b(m - q), entries outside the lattice are zero.
SpectralField convolve(const SpectralField& a, const SpectralField& b);

/// Nested-loop mixed-norm quadrature on physical samples.
double mixed_norm_quadrature(std::span<const cplx> phys, const Grid& g,
                             double p_h, double q_v);

/// Rectangle-rule inner product of physical samples (real parts).
double inner_product_quadrature(std::span<const cplx> a,
                                std::span<const cplx> b, const Grid& g);

}  // namespace ans::reference
