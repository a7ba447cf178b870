#pragma once

#include <span>
#include <utility>

#include "ans/heat_flow.hpp"

namespace ans {

/// Pseudo-spectral convection u . grad a: transform to physical space, form
/// u_j d_j a_i pointwise, transform back, dealias. Exact for inputs supported
/// in the 2/3 region.
VectorField convect(const VectorField& u, const VectorField& a);

/// || u_F . grad u_F ||_{L^1_T(B^{0,1/2})} = int_0^T sum_j 2^{j/2}
/// ||Delta^v_j (u_F . grad u_F)||_{L^2} dt, accumulated by trapezoid on the
/// given snapshot grid (exponential tail added when `add_tail`).
double forcing_norm_L1T_B012(const VectorField& u0, const BesovParams& params,
                             const DyadicDecomposition& dec,
                             std::span<const double> times,
                             bool add_tail = false);
/// Overload integrating to T (T = inf uses the decay-resolved grid).
double forcing_norm_L1T_B012(const VectorField& u0, const BesovParams& params,
                             const DyadicDecomposition& dec, double T);

struct EFunctionalReport {
  double besov_part = 0.0;
  double forcing_part = 0.0;
  double total = 0.0;
  double T = 0.0;
};

/// [a]_{E^p_T} = ||a||_{B^{-1+2/p,1/2}_p} + ||a_F . grad a_F||_{L^1_T(B^{0,1/2})}.
EFunctionalReport e_functional(const VectorField& u0, const BesovParams& params,
                               const DyadicDecomposition& dec, double T);

/// Vertical Bony split of Delta^v_j(u^h . grad_h a) into the low-high
/// paraproduct (|j - j'| window) and the high-low/remainder sums. Their sum
/// reconstructs Delta^v_j of the dealiased product.
std::pair<VectorField, VectorField> bony_vertical_split(
    const VectorField& u, const VectorField& a, int j,
    const DyadicDecomposition& dec, int remainder_width = 3);

/// F_j(T) = int_0^T | int Delta^v_j(u . grad a) Delta^v_j a dx | dt on aligned
/// snapshot sequences.
double trilinear_Fj(std::span<const VectorField> u, std::span<const double> u_times,
                    std::span<const VectorField> a, std::span<const double> a_times,
                    int j, const DyadicDecomposition& dec);
/// Frozen-field variant: T * | <Delta^v_j(u . grad a), Delta^v_j a> |.
double trilinear_Fj_frozen(const VectorField& u, const VectorField& a, int j,
                           double T, const DyadicDecomposition& dec);

/// G_j(T) = int_0^T | int Delta^v_j(a . grad u_F) Delta^v_j b dx | dt.
double trilinear_Gj(std::span<const VectorField> a, std::span<const double> a_times,
                    std::span<const VectorField> b, std::span<const double> b_times,
                    std::span<const VectorField> uF, std::span<const double> uF_times,
                    int j, const DyadicDecomposition& dec);
double trilinear_Gj_frozen(const VectorField& a, const VectorField& b,
                           const VectorField& uF, int j, double T,
                           const DyadicDecomposition& dec);

}  // namespace ans
