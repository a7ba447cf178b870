#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

namespace ans {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Uniform periodic grid. Wavenumbers along axis i are (2*pi/L_i) * m with
/// m in {-n_i/2, ..., n_i/2 - 1}. Storage puts the third index fastest.
/// n3 == 1 is allowed and means a purely horizontal (2-D) field.
struct Grid {
  int n1 = 0, n2 = 0, n3 = 0;
  double L1 = two_pi, L2 = two_pi, L3 = two_pi;

  Grid() = default;
  Grid(int n1_, int n2_, int n3_, double L1_ = two_pi, double L2_ = two_pi,
       double L3_ = two_pi)
      : n1(n1_), n2(n2_), n3(n3_), L1(L1_), L2(L2_), L3(L3_) {
    validate();
  }

  static Grid cubic(int n, double L = two_pi) { return Grid(n, n, n, L, L, L); }
  static Grid horizontal(int n1, int n2, double L1 = two_pi,
                         double L2 = two_pi) {
    return Grid(n1, n2, 1, L1, L2, two_pi);
  }

  void validate() const {
    auto check_axis = [](int n) {
      if (n == 1) return;
      if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("grid axis must be even and >= 8 (or 1)");
    };
    check_axis(n1);
    check_axis(n2);
    check_axis(n3);
    if (L1 <= 0 || L2 <= 0 || L3 <= 0)
      throw std::invalid_argument("box lengths must be positive");
  }

  std::size_t size() const {
    return static_cast<std::size_t>(n1) * n2 * n3;
  }
  bool is_2d() const { return n3 == 1; }

  std::size_t index(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i1) * n2 + i2) * n3 + i3;
  }

  /// Integer mode from storage index: i < n/2 -> i, otherwise i - n.
  static int mode_of(int i, int n) { return 2 * i < n ? i : i - n; }
  static int storage_of(int m, int n) { return m >= 0 ? m : m + n; }

  double dk1() const { return two_pi / L1; }
  double dk2() const { return two_pi / L2; }
  double dk3() const { return two_pi / L3; }

  double xi1(int i1) const { return mode_of(i1, n1) * dk1(); }
  double xi2(int i2) const { return mode_of(i2, n2) * dk2(); }
  double xi3(int i3) const { return n3 == 1 ? 0.0 : mode_of(i3, n3) * dk3(); }

  double xi_h(int i1, int i2) const { return std::hypot(xi1(i1), xi2(i2)); }

  double volume() const { return L1 * L2 * L3; }
  double cell_volume() const { return volume() / static_cast<double>(size()); }
  double dx1() const { return L1 / n1; }
  double dx2() const { return L2 / n2; }
  double dx3() const { return L3 / n3; }
  double x1(int i1) const { return i1 * dx1(); }
  double x2(int i2) const { return i2 * dx2(); }
  double x3(int i3) const { return i3 * dx3(); }

  /// Largest |xi_h| over the full mode lattice (includes the Nyquist row).
  double max_xi_h() const {
    return std::hypot((n1 / 2) * dk1(), (n2 / 2) * dk2());
  }
  double max_xi3() const { return n3 == 1 ? 0.0 : (n3 / 2) * dk3(); }
  double max_xi() const { return std::hypot(max_xi_h(), max_xi3()); }
  /// Smallest nonzero |xi_h| (resp. |xi_3|) on the lattice.
  double min_xi_h() const { return std::min(dk1(), dk2()); }
  double min_xi3() const { return n3 == 1 ? 0.0 : dk3(); }

  bool operator==(const Grid&) const = default;
};

}  // namespace ans
