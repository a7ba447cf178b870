#pragma once

#include <array>
#include <vector>

#include "ans/field.hpp"

namespace ans {

/// Per-axis wavenumber tables in storage order.
struct WavenumberTables {
  std::vector<double> xi1, xi2, xi3;
  explicit WavenumberTables(const Grid& g);
};

/// Spectral derivative: coeff(m) *= i * xi_{m,axis}. axis in {1,2,3}.
SpectralField partial_derivative(const SpectralField& f, int axis);

/// Zero all coefficients with |m_i| > n_i/3 on any axis (2/3 rule).
SpectralField dealias(const SpectralField& f);
void dealias_inplace(SpectralField& f);
VectorField dealias(const VectorField& v);
void dealias_inplace(VectorField& v);
bool keeps_mode_dealiased(const Grid& g, int i1, int i2, int i3);

SpectralField divergence(const VectorField& v);

/// Max over modes of |xi . u(xi)| / max(1, |u(xi)|).
double divergence_residual(const VectorField& v);

/// Orthogonal projection onto divergence-free fields,
/// u_i -> u_i - xi_i xi_j u_j / |xi|^2; the mean mode passes through.
VectorField leray_project(const VectorField& v);
void leray_project_inplace(VectorField& v);

/// L^2 inner product <f, g> = vol * sum_m f(m) conj(g(m)) (real part).
double inner_product_l2(const SpectralField& f, const SpectralField& g);
double inner_product_l2(const VectorField& f, const VectorField& g);

}  // namespace ans
