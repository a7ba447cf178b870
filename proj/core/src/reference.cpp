#include "ans/reference.hpp"

#include <cmath>
#include <stdexcept>

namespace ans::reference {

SpectralField dft_forward(std::span<const double> phys, const Grid& g) {
  if (phys.size() != g.size())
    throw std::invalid_argument("sample array does not match grid dimensions");
  SpectralField f(g);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (int j1 = 0; j1 < g.n1; ++j1)
    for (int j2 = 0; j2 < g.n2; ++j2)
      for (int j3 = 0; j3 < g.n3; ++j3) {
        cplx acc = 0.0;
        for (int i1 = 0; i1 < g.n1; ++i1)
          for (int i2 = 0; i2 < g.n2; ++i2)
            for (int i3 = 0; i3 < g.n3; ++i3) {
              double phase = g.xi1(j1) * g.x1(i1) + g.xi2(j2) * g.x2(i2) +
                             g.xi3(j3) * g.x3(i3);
              acc += phys[g.index(i1, i2, i3)] *
                     cplx(std::cos(phase), -std::sin(phase));
            }
        f.at(j1, j2, j3) = acc * scale;
      }
  return f;
}

std::vector<cplx> dft_inverse(const SpectralField& f) {
  const Grid& g = f.grid;
  std::vector<cplx> phys(g.size());
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      for (int i3 = 0; i3 < g.n3; ++i3) {
        cplx acc = 0.0;
        for (int j1 = 0; j1 < g.n1; ++j1)
          for (int j2 = 0; j2 < g.n2; ++j2)
            for (int j3 = 0; j3 < g.n3; ++j3) {
              double phase = g.xi1(j1) * g.x1(i1) + g.xi2(j2) * g.x2(i2) +
                             g.xi3(j3) * g.x3(i3);
              acc += f.at(j1, j2, j3) * cplx(std::cos(phase), std::sin(phase));
            }
        phys[g.index(i1, i2, i3)] = acc;
      }
  return phys;
}

SpectralField convolve(const SpectralField& a, const SpectralField& b) {
  const Grid& g = a.grid;
  if (!(g == b.grid)) throw std::invalid_argument("grid mismatch in convolve");
  auto lo = [](int n) { return n == 1 ? 0 : -n / 2; };
  auto hi = [](int n) { return n == 1 ? 0 : n / 2 - 1; };
  SpectralField out(g);
  for (int m1 = lo(g.n1); m1 <= hi(g.n1); ++m1)
    for (int m2 = lo(g.n2); m2 <= hi(g.n2); ++m2)
      for (int m3 = lo(g.n3); m3 <= hi(g.n3); ++m3) {
        cplx acc = 0.0;
        for (int q1 = lo(g.n1); q1 <= hi(g.n1); ++q1) {
          int r1 = m1 - q1;
          if (r1 < lo(g.n1) || r1 > hi(g.n1)) continue;
          for (int q2 = lo(g.n2); q2 <= hi(g.n2); ++q2) {
            int r2 = m2 - q2;
            if (r2 < lo(g.n2) || r2 > hi(g.n2)) continue;
            for (int q3 = lo(g.n3); q3 <= hi(g.n3); ++q3) {
              int r3 = m3 - q3;
              if (r3 < lo(g.n3) || r3 > hi(g.n3)) continue;
              acc += a.mode(q1, q2, q3) * b.mode(r1, r2, r3);
            }
          }
        }
        out.mode(m1, m2, m3) = acc;
      }
  return out;
}

double mixed_norm_quadrature(std::span<const cplx> phys, const Grid& g,
                             double p_h, double q_v) {
  const double dx3 = g.dx3();
  const double dxh = g.dx1() * g.dx2();
  double outer = 0.0;
  bool p_inf = std::isinf(p_h), q_inf = std::isinf(q_v);
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      double inner = 0.0;
      for (int i3 = 0; i3 < g.n3; ++i3) {
        double v = std::abs(phys[g.index(i1, i2, i3)]);
        inner = q_inf ? std::max(inner, v) : inner + std::pow(v, q_v) * dx3;
      }
      double col = q_inf ? inner : std::pow(inner, 1.0 / q_v);
      outer = p_inf ? std::max(outer, col) : outer + std::pow(col, p_h) * dxh;
    }
  return p_inf ? outer : std::pow(outer, 1.0 / p_h);
}

double inner_product_quadrature(std::span<const cplx> a,
                                std::span<const cplx> b, const Grid& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real();
  return s * g.cell_volume();
}

}  // namespace ans::reference
