#include "ans/nonlinear.hpp"

#include <cmath>
#include <stdexcept>

#include "ans/mixed_norm.hpp"
#include "ans/operators.hpp"
#include "ans/transform.hpp"

namespace ans {

VectorField convect(const VectorField& u, const VectorField& a) {
  const Grid& g = u.grid();
  if (!(g == a.grid())) throw std::invalid_argument("grid mismatch in convect");

  std::array<std::vector<cplx>, 3> uphys;
  for (int c = 0; c < 3; ++c) uphys[c] = inverse_transform(u.comp(c));

  VectorField out(g);
  aligned_vector<cplx> prod(g.size());
  std::vector<cplx> dphys(g.size());
  for (int i = 0; i < 3; ++i) {
    std::fill(prod.begin(), prod.end(), cplx(0.0));
    for (int jax = 1; jax <= 3; ++jax) {
      SpectralField da = partial_derivative(a.comp(i), jax);
      inverse_transform(da, dphys);
      const auto& uj = uphys[jax - 1];
      for (std::size_t x = 0; x < prod.size(); ++x)
        prod[x] += uj[x].real() * dphys[x].real();
    }
    out.comp(i) = forward_transform(std::span<const cplx>(prod), g);
  }
  dealias_inplace(out);
  return out;
}

double forcing_norm_L1T_B012(const VectorField& u0, const BesovParams& params,
                             const DyadicDecomposition& dec,
                             std::span<const double> times, bool add_tail) {
  params.validate();
  if (u0.divergence_free == false && divergence_residual(u0) > 1e-8)
    throw std::invalid_argument("forcing norm requires divergence-free data");
  VectorField hh = dec.split_hh_ll(u0).first;

  std::vector<double> s(times.size(), 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    VectorField uf = semigroup(hh, times[i], params.nu_h, params.nu_3);
    VectorField f = convect(uf, uf);
    s[i] = besov_b012(f, dec);
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i)
    integral += 0.5 * (s[i - 1] + s[i]) * (times[i] - times[i - 1]);
  std::size_t n = s.size();
  if (add_tail && n >= 2 && s[n - 1] > 0.0 && s[n - 2] > s[n - 1]) {
    double rate = std::log(s[n - 2] / s[n - 1]) / (times[n - 1] - times[n - 2]);
    if (rate > 0.0) integral += s[n - 1] / rate;
  }
  return integral;
}

double forcing_norm_L1T_B012(const VectorField& u0, const BesovParams& params,
                             const DyadicDecomposition& dec, double T) {
  VectorField hh = dec.split_hh_ll(u0).first;
  std::vector<double> times =
      decay_time_grid(hh, params.nu_h, params.nu_3);
  if (std::isfinite(T)) {
    std::vector<double> capped{0.0};
    for (double t : times)
      if (t > 0.0 && t < T) capped.push_back(t);
    capped.push_back(T);
    return forcing_norm_L1T_B012(u0, params, dec, capped, false);
  }
  return forcing_norm_L1T_B012(u0, params, dec, times, true);
}

EFunctionalReport e_functional(const VectorField& u0, const BesovParams& params,
                               const DyadicDecomposition& dec, double T) {
  EFunctionalReport rep;
  rep.T = T;
  rep.besov_part = besov_static(u0, dec, params);
  rep.forcing_part = forcing_norm_L1T_B012(u0, params, dec, T);
  rep.total = rep.besov_part + rep.forcing_part;
  return rep;
}

namespace {

/// dealias(u^h . grad_h a) for prepared factors.
VectorField horizontal_transport(const VectorField& u, const VectorField& a) {
  const Grid& g = u.grid();
  std::array<std::vector<cplx>, 2> uphys = {inverse_transform(u.u1),
                                            inverse_transform(u.u2)};
  VectorField out(g);
  aligned_vector<cplx> prod(g.size());
  std::vector<cplx> dphys(g.size());
  for (int i = 0; i < 3; ++i) {
    std::fill(prod.begin(), prod.end(), cplx(0.0));
    for (int jax = 1; jax <= 2; ++jax) {
      SpectralField da = partial_derivative(a.comp(i), jax);
      inverse_transform(da, dphys);
      const auto& uj = uphys[jax - 1];
      for (std::size_t x = 0; x < prod.size(); ++x)
        prod[x] += uj[x].real() * dphys[x].real();
    }
    out.comp(i) = forward_transform(std::span<const cplx>(prod), g);
  }
  dealias_inplace(out);
  return out;
}

}  // namespace

std::pair<VectorField, VectorField> bony_vertical_split(
    const VectorField& u, const VectorField& a, int j,
    const DyadicDecomposition& dec, int remainder_width) {
  const Grid& g = u.grid();
  if (!(g == a.grid()))
    throw std::invalid_argument("grid mismatch in bony_vertical_split");
  const int m = dec.l_min();

  VectorField lowhigh(g), highlow(g);
  for (int jp = std::max(m, j - 5); jp <= std::min(dec.l_max(), j + 5); ++jp) {
    VectorField su = dec.s_v(u, jp - 1);
    VectorField da = dec.delta_v(a, jp);
    lowhigh += horizontal_transport(su, da);
  }
  for (int jp = std::max(m, j - remainder_width); jp <= dec.l_max(); ++jp) {
    VectorField du = dec.delta_v(u, jp);
    VectorField sa = dec.s_v(a, jp + 2);
    highlow += horizontal_transport(du, sa);
  }
  // Torus residue: content below the lowest vertical shell on both factors.
  {
    VectorField su = dec.s_v(u, m);
    VectorField sa = dec.s_v(a, m);
    highlow += horizontal_transport(su, sa);
  }
  VectorField lh(g), hl(g);
  for (int c = 0; c < 3; ++c) {
    lh.comp(c) = dec.delta_v(lowhigh.comp(c), j);
    hl.comp(c) = dec.delta_v(highlow.comp(c), j);
  }
  return {std::move(lh), std::move(hl)};
}

namespace {

void check_aligned(std::span<const double> ta, std::span<const double> tb) {
  if (ta.size() != tb.size())
    throw std::invalid_argument("misaligned time grids");
  for (std::size_t i = 0; i < ta.size(); ++i)
    if (std::abs(ta[i] - tb[i]) > 1e-12 * std::max(1.0, std::abs(ta[i])))
      throw std::invalid_argument("misaligned time grids");
}

double trilinear_value(const VectorField& u, const VectorField& a,
                       const VectorField& b, int j,
                       const DyadicDecomposition& dec) {
  VectorField conv = convect(u, a);
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    SpectralField dj = dec.delta_v(conv.comp(c), j);
    SpectralField bj = dec.delta_v(b.comp(c), j);
    s += inner_product_l2(dj, bj);
  }
  return std::abs(s);
}

}  // namespace

double trilinear_Fj(std::span<const VectorField> u,
                    std::span<const double> u_times,
                    std::span<const VectorField> a,
                    std::span<const double> a_times, int j,
                    const DyadicDecomposition& dec) {
  check_aligned(u_times, a_times);
  std::vector<double> v(u_times.size());
  for (std::size_t i = 0; i < u_times.size(); ++i)
    v[i] = trilinear_value(u[i], a[i], a[i], j, dec);
  double integral = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i)
    integral += 0.5 * (v[i - 1] + v[i]) * (u_times[i] - u_times[i - 1]);
  return integral;
}

double trilinear_Fj_frozen(const VectorField& u, const VectorField& a, int j,
                           double T, const DyadicDecomposition& dec) {
  return T * trilinear_value(u, a, a, j, dec);
}

double trilinear_Gj(std::span<const VectorField> a,
                    std::span<const double> a_times,
                    std::span<const VectorField> b,
                    std::span<const double> b_times,
                    std::span<const VectorField> uF,
                    std::span<const double> uF_times, int j,
                    const DyadicDecomposition& dec) {
  check_aligned(a_times, b_times);
  check_aligned(a_times, uF_times);
  std::vector<double> v(a_times.size());
  for (std::size_t i = 0; i < a_times.size(); ++i)
    v[i] = trilinear_value(a[i], uF[i], b[i], j, dec);
  double integral = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i)
    integral += 0.5 * (v[i - 1] + v[i]) * (a_times[i] - a_times[i - 1]);
  return integral;
}

double trilinear_Gj_frozen(const VectorField& a, const VectorField& b,
                           const VectorField& uF, int j, double T,
                           const DyadicDecomposition& dec) {
  return T * trilinear_value(a, uF, b, j, dec);
}

}  // namespace ans
