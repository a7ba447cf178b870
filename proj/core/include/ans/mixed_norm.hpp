#pragma once

#include <limits>
#include <span>

#include "ans/field.hpp"

namespace ans {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Anisotropic mixed norm L^{p_h}_h(L^{q_v}_v): the inner norm is taken over
/// x3 first, the outer over x_h, with the rectangle rule on the uniform grid.
/// Pass `inf` for sup norms. Requires p_h, q_v >= 1.
double mixed_norm(const SpectralField& f, double p_h, double q_v);
double mixed_norm_physical(std::span<const double> phys, const Grid& g,
                           double p_h, double q_v);
double mixed_norm_physical(std::span<const cplx> phys, const Grid& g,
                           double p_h, double q_v);

/// L^2 norm evaluated spectrally via Parseval.
double l2_norm(const SpectralField& f);
double l2_norm(const VectorField& v);

/// Plain horizontal L^q norm of a 2-D field (n3 == 1) or of the i3 = 0 slice
/// of an x3-independent field.
double horizontal_lq_norm(const SpectralField& f, double q);

}  // namespace ans
