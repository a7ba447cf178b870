#pragma once

#include <span>
#include <vector>

#include "ans/field.hpp"

namespace ans {

/// Discrete Fourier analysis with the convention
///   coeff(m) = (1/(n1 n2 n3)) sum_x f(x) e^{-i xi_m . x},
/// so that Parseval reads  sum_x |f|^2 dvol = vol(box) * sum_m |coeff|^2.
SpectralField forward_transform(std::span<const double> physical,
                                const Grid& grid);
SpectralField forward_transform(std::span<const cplx> physical,
                                const Grid& grid);

/// Synthesis f(x) = sum_m coeff(m) e^{+i xi_m . x}.
void inverse_transform(const SpectralField& f, std::span<cplx> physical);
std::vector<cplx> inverse_transform(const SpectralField& f);

/// Synthesis keeping the real part only (valid for conjugate-symmetric data).
void inverse_transform_real(const SpectralField& f, std::span<double> physical);
std::vector<double> inverse_transform_real(const SpectralField& f);

/// Raw unnormalized transforms on caller buffers, used by hot loops.
/// `forward_raw` leaves the 1/N scaling to the caller.
void forward_raw(std::span<const cplx> in, std::span<cplx> out, const Grid& grid);
void backward_raw(std::span<const cplx> in, std::span<cplx> out, const Grid& grid);

/// Half-spectrum transforms for conjugate-symmetric (real-physical) data.
/// The compact layout keeps modes m3 in [0, n3/2], n3/2+1 entries per
/// (i1, i2) row. Both are unnormalized; backward_raw_c2r destroys its input
/// (multi-dimensional FFTW c2r has no preserving variant).
std::size_t half_spectrum_size(const Grid& g);
void forward_raw_r2c(std::span<const double> in, std::span<cplx> half_out,
                     const Grid& grid);
void backward_raw_c2r(std::span<cplx> half_in, std::span<double> out,
                      const Grid& grid);

}  // namespace ans
