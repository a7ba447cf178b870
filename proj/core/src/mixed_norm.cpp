#include "ans/mixed_norm.hpp"

#include <cmath>
#include <stdexcept>

#include "ans/transform.hpp"

namespace ans {
namespace {

void check_exponents(double p_h, double q_v) {
  if (!(p_h >= 1.0) || !(q_v >= 1.0))
    throw std::invalid_argument("mixed norm exponents must be >= 1");
}

template <typename Abs>
double mixed_norm_impl(const Grid& g, double p_h, double q_v, Abs value) {
  check_exponents(p_h, q_v);
  const double dx3 = g.dx3();
  const double dxh = g.dx1() * g.dx2();
  const bool p_inf = std::isinf(p_h);
  const bool q_inf = std::isinf(q_v);

  double outer = 0.0;  // sum or max over x_h
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      double inner = 0.0;
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        double a = value(idx);
        if (q_inf)
          inner = std::max(inner, a);
        else
          inner += std::pow(a, q_v) * dx3;
      }
      double col = q_inf ? inner : std::pow(inner, 1.0 / q_v);
      if (p_inf)
        outer = std::max(outer, col);
      else
        outer += std::pow(col, p_h) * dxh;
    }
  return p_inf ? outer : std::pow(outer, 1.0 / p_h);
}

}  // namespace

double mixed_norm_physical(std::span<const double> phys, const Grid& g,
                           double p_h, double q_v) {
  if (phys.size() != g.size())
    throw std::invalid_argument("sample array does not match grid dimensions");
  return mixed_norm_impl(g, p_h, q_v,
                         [&](std::size_t i) { return std::abs(phys[i]); });
}

double mixed_norm_physical(std::span<const cplx> phys, const Grid& g,
                           double p_h, double q_v) {
  if (phys.size() != g.size())
    throw std::invalid_argument("sample array does not match grid dimensions");
  return mixed_norm_impl(g, p_h, q_v,
                         [&](std::size_t i) { return std::abs(phys[i]); });
}

double mixed_norm(const SpectralField& f, double p_h, double q_v) {
  check_exponents(p_h, q_v);
  auto phys = inverse_transform(f);
  return mixed_norm_physical(std::span<const cplx>(phys), f.grid, p_h, q_v);
}

double l2_norm(const SpectralField& f) {
  double s = 0.0;
  for (const auto& c : f.coeffs) s += std::norm(c);
  return std::sqrt(s * f.grid.volume());
}

double l2_norm(const VectorField& v) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c)
    for (const auto& z : v.comp(c).coeffs) s += std::norm(z);
  return std::sqrt(s * v.grid().volume());
}

double horizontal_lq_norm(const SpectralField& f, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  const Grid& g = f.grid;
  auto phys = inverse_transform(f);
  const double dxh = g.dx1() * g.dx2();
  double acc = 0.0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      double a = std::abs(phys[g.index(i1, i2, 0)]);
      if (std::isinf(q))
        acc = std::max(acc, a);
      else
        acc += std::pow(a, q) * dxh;
    }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

}  // namespace ans
