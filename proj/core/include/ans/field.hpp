#pragma once

#include <complex>
#include <cstdlib>
#include <new>
#include <vector>

#include "ans/grid.hpp"

namespace ans {

using cplx = std::complex<double>;

/// 64-byte aligned allocator so coefficient arrays are FFT-friendly.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t alignment = 64;

  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) {}

  T* allocate(std::size_t n) {
    if (n == 0) return nullptr;
    void* p = ::operator new(n * sizeof(T), std::align_val_t(alignment));
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept {
    ::operator delete(p, std::align_val_t(alignment));
  }
  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const {
    return true;
  }
};

template <typename T>
using aligned_vector = std::vector<T, AlignedAllocator<T>>;

/// One scalar field as complex Fourier amplitudes on a periodic grid.
/// coeff(m) = (1/N) sum_x f(x) e^{-i xi_m . x}; real physical data implies
/// conjugate symmetry coeff(-m) = conj(coeff(m)).
struct SpectralField {
  Grid grid;
  aligned_vector<cplx> coeffs;

  SpectralField() = default;
  explicit SpectralField(const Grid& g) : grid(g), coeffs(g.size()) {}

  cplx& at(int i1, int i2, int i3) { return coeffs[grid.index(i1, i2, i3)]; }
  const cplx& at(int i1, int i2, int i3) const {
    return coeffs[grid.index(i1, i2, i3)];
  }
  /// Accessor by integer mode (negative indices wrap).
  cplx& mode(int m1, int m2, int m3) {
    return coeffs[grid.index(Grid::storage_of(m1, grid.n1),
                             Grid::storage_of(m2, grid.n2),
                             Grid::storage_of(m3, grid.n3))];
  }
  const cplx& mode(int m1, int m2, int m3) const {
    return const_cast<SpectralField*>(this)->mode(m1, m2, m3);
  }

  void set_zero() { std::fill(coeffs.begin(), coeffs.end(), cplx(0.0)); }

  SpectralField& operator+=(const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
  }
  SpectralField& operator*=(double c) {
    for (auto& v : coeffs) v *= c;
    return *this;
  }

  /// Max deviation from conjugate symmetry, relative to the max amplitude.
  double conjugate_symmetry_residual() const;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double c, SpectralField a);

/// Three spectral components on a shared grid.
struct VectorField {
  SpectralField u1, u2, u3;
  bool divergence_free = false;

  VectorField() = default;
  explicit VectorField(const Grid& g) : u1(g), u2(g), u3(g) {}

  const Grid& grid() const { return u1.grid; }
  SpectralField& comp(int i) { return i == 0 ? u1 : (i == 1 ? u2 : u3); }
  const SpectralField& comp(int i) const {
    return i == 0 ? u1 : (i == 1 ? u2 : u3);
  }

  void set_zero() {
    u1.set_zero();
    u2.set_zero();
    u3.set_zero();
  }

  VectorField& operator+=(const VectorField& o) {
    u1 += o.u1;
    u2 += o.u2;
    u3 += o.u3;
    return *this;
  }
  VectorField& operator-=(const VectorField& o) {
    u1 -= o.u1;
    u2 -= o.u2;
    u3 -= o.u3;
    return *this;
  }
  VectorField& operator*=(double c) {
    u1 *= c;
    u2 *= c;
    u3 *= c;
    return *this;
  }
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double c, VectorField a);

}  // namespace ans
