#include "ans/operators.hpp"

#include <stdexcept>

namespace ans {

WavenumberTables::WavenumberTables(const Grid& g) {
  xi1.resize(g.n1);
  xi2.resize(g.n2);
  xi3.resize(g.n3);
  for (int i = 0; i < g.n1; ++i) xi1[i] = g.xi1(i);
  for (int i = 0; i < g.n2; ++i) xi2[i] = g.xi2(i);
  for (int i = 0; i < g.n3; ++i) xi3[i] = g.xi3(i);
}

SpectralField partial_derivative(const SpectralField& f, int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("axis must be 1, 2 or 3");
  const Grid& g = f.grid;
  WavenumberTables k(g);
  SpectralField out(g);
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        double xi = axis == 1 ? k.xi1[i1] : (axis == 2 ? k.xi2[i2] : k.xi3[i3]);
        out.coeffs[idx] = cplx(0.0, xi) * f.coeffs[idx];
      }
  return out;
}

bool keeps_mode_dealiased(const Grid& g, int i1, int i2, int i3) {
  int m1 = Grid::mode_of(i1, g.n1);
  int m2 = Grid::mode_of(i2, g.n2);
  int m3 = Grid::mode_of(i3, g.n3);
  return 3 * std::abs(m1) <= g.n1 && 3 * std::abs(m2) <= g.n2 &&
         (g.n3 == 1 || 3 * std::abs(m3) <= g.n3);
}

void dealias_inplace(SpectralField& f) {
  const Grid& g = f.grid;
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1) {
    bool keep1 = 3 * std::abs(Grid::mode_of(i1, g.n1)) <= g.n1;
    for (int i2 = 0; i2 < g.n2; ++i2) {
      bool keep12 = keep1 && 3 * std::abs(Grid::mode_of(i2, g.n2)) <= g.n2;
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        bool keep = keep12 && (g.n3 == 1 ||
                               3 * std::abs(Grid::mode_of(i3, g.n3)) <= g.n3);
        if (!keep) f.coeffs[idx] = cplx(0.0);
      }
    }
  }
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  dealias_inplace(out);
  return out;
}

void dealias_inplace(VectorField& v) {
  dealias_inplace(v.u1);
  dealias_inplace(v.u2);
  dealias_inplace(v.u3);
}

VectorField dealias(const VectorField& v) {
  VectorField out = v;
  dealias_inplace(out);
  return out;
}

SpectralField divergence(const VectorField& v) {
  const Grid& g = v.grid();
  WavenumberTables k(g);
  SpectralField out(g);
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        cplx s = k.xi1[i1] * v.u1.coeffs[idx] + k.xi2[i2] * v.u2.coeffs[idx] +
                 k.xi3[i3] * v.u3.coeffs[idx];
        out.coeffs[idx] = cplx(0.0, 1.0) * s;
      }
  return out;
}

double divergence_residual(const VectorField& v) {
  const Grid& g = v.grid();
  WavenumberTables k(g);
  double worst = 0.0;
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        cplx a = v.u1.coeffs[idx], b = v.u2.coeffs[idx], c = v.u3.coeffs[idx];
        double dot = std::abs(k.xi1[i1] * a + k.xi2[i2] * b + k.xi3[i3] * c);
        double amp = std::sqrt(std::norm(a) + std::norm(b) + std::norm(c));
        worst = std::max(worst, dot / std::max(1.0, amp));
      }
  return worst;
}

void leray_project_inplace(VectorField& v) {
  const Grid& g = v.grid();
  WavenumberTables k(g);
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        double x1 = k.xi1[i1], x2 = k.xi2[i2], x3 = k.xi3[i3];
        double q = x1 * x1 + x2 * x2 + x3 * x3;
        if (q == 0.0) continue;
        cplx dot = (x1 * v.u1.coeffs[idx] + x2 * v.u2.coeffs[idx] +
                    x3 * v.u3.coeffs[idx]) /
                   q;
        v.u1.coeffs[idx] -= x1 * dot;
        v.u2.coeffs[idx] -= x2 * dot;
        v.u3.coeffs[idx] -= x3 * dot;
      }
  v.divergence_free = true;
}

VectorField leray_project(const VectorField& v) {
  VectorField out = v;
  leray_project_inplace(out);
  return out;
}

double inner_product_l2(const SpectralField& f, const SpectralField& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    s += f.coeffs[i].real() * g.coeffs[i].real() +
         f.coeffs[i].imag() * g.coeffs[i].imag();
  return s * f.grid.volume();
}

double inner_product_l2(const VectorField& f, const VectorField& g) {
  return inner_product_l2(f.u1, g.u1) + inner_product_l2(f.u2, g.u2) +
         inner_product_l2(f.u3, g.u3);
}

}  // namespace ans
