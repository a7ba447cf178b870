#pragma once

#include <functional>
#include <random>
#include <vector>

#include "ans/experiments.hpp"
#include "ans/mixed_norm.hpp"
#include "ans/operators.hpp"
#include "ans/transform.hpp"

namespace ans::testutil {

inline std::vector<double> sample(const Grid& g,
                                  const std::function<double(double, double,
                                                             double)>& f) {
  std::vector<double> out(g.size());
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      for (int i3 = 0; i3 < g.n3; ++i3)
        out[g.index(i1, i2, i3)] = f(g.x1(i1), g.x2(i2), g.x3(i3));
  return out;
}

inline SpectralField field_of(const Grid& g,
                              const std::function<double(double, double,
                                                         double)>& f) {
  auto phys = sample(g, f);
  return forward_transform(std::span<const double>(phys), g);
}

inline std::vector<double> random_physical(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(g.size());
  for (auto& v : out)
    v = (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 0.5;
  return out;
}

inline double max_coeff(const SpectralField& f) {
  double m = 0.0;
  for (const auto& c : f.coeffs) m = std::max(m, std::abs(c));
  return m;
}

inline double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    m = std::max(m, std::abs(a.coeffs[i] - b.coeffs[i]));
  return m;
}

inline double max_coeff_diff(const VectorField& a, const VectorField& b) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c)
    m = std::max(m, max_coeff_diff(a.comp(c), b.comp(c)));
  return m;
}

/// Random hh-type data whose populated (k, l) bands carry roughly equal
/// weight against the 2^{(1-2/p)k} 2^{-l/2} profile of the static norm, so
/// per-band decay ratios are comparable across bands.
inline VectorField gen_band_equalized_hh(const Grid& g,
                                         const DyadicDecomposition& dec,
                                         std::uint64_t seed, double p,
                                         int k_lo, int k_hi, int l_lo,
                                         int l_hi) {
  VectorField sum(g);
  std::uint64_t s = seed;
  for (int l = l_lo; l <= l_hi; ++l)
    for (int k = std::max(l - 1, k_lo); k <= k_hi; ++k) {
      double ch = std::ldexp(1.0, k), cv = std::ldexp(1.0, l);
      BandWindow h{4.0 / 3.0 * ch, 1.5 * ch}, v{4.0 / 3.0 * cv, 1.5 * cv};
      VectorField piece = gen_random_bandlimited(g, ++s, h, v, 1.0);
      BandMatrix B = band_mixed_norms(piece, dec, p);
      double b = B.at(k, l);
      if (b <= 0.0) continue;
      double target = std::exp2((1.0 - 2.0 / p) * k) * std::exp2(-0.5 * l);
      piece *= target / b;
      sum += piece;
    }
  sum.divergence_free = true;
  return sum;
}

}  // namespace ans::testutil
