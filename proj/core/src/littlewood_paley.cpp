#include "ans/littlewood_paley.hpp"

#include <cmath>

namespace ans {

double PartitionFunction::chi(double tau) {
  if (tau <= 1.5) return 1.0;
  if (tau >= support_hi) return 0.0;
  auto h = [](double x) { return std::exp(-1.0 / x); };
  double a = h(support_hi - tau);
  double b = h(tau - 1.5);
  return a / (a + b);
}

double PartitionFunction::lowpass(double tau, int k) const {
  return chi(std::ldexp(tau, -(k - 1)));
}

double PartitionFunction::partial_sum(double tau, int j_lo, int j_hi) const {
  double s = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) s += (*this)(std::ldexp(tau, -j));
  return s;
}

PartitionFunction make_partition() { return PartitionFunction{}; }

namespace {

// Largest k with 2^k <= x (x > 0).
int floor_log2(double x) {
  int k = static_cast<int>(std::floor(std::log2(x)));
  while (std::ldexp(1.0, k + 1) <= x) ++k;
  while (std::ldexp(1.0, k) > x) --k;
  return k;
}
// Smallest k with 2^k >= x (x > 0).
int ceil_log2(double x) {
  int k = static_cast<int>(std::ceil(std::log2(x)));
  while (std::ldexp(1.0, k - 1) >= x) --k;
  while (std::ldexp(1.0, k) < x) ++k;
  return k;
}

}  // namespace

DyadicDecomposition::DyadicDecomposition(const Grid& g, PartitionFunction pf)
    : grid_(g), pf_(pf) {
  const int n1 = g.n1, n2 = g.n2, n3 = g.n3;

  xi_h_.resize(static_cast<std::size_t>(n1) * n2);
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2)
      xi_h_[static_cast<std::size_t>(i1) * n2 + i2] = g.xi_h(i1, i2);
  xi3_abs_.resize(n3);
  for (int i3 = 0; i3 < n3; ++i3) xi3_abs_[i3] = std::abs(g.xi3(i3));

  // Band ranges: lowest band carries the smallest nonzero frequency with the
  // residue below it entirely inside the matching low-pass; the top band is
  // chosen so bands up to it reconstruct every lattice frequency exactly.
  kh_min_ = floor_log2(0.75 * g.min_xi_h());
  kh_max_ = ceil_log2((2.0 / 3.0) * g.max_xi_h());
  if (g.n3 > 1) {
    lv_min_ = floor_log2(0.75 * g.min_xi3());
    lv_max_ = ceil_log2((2.0 / 3.0) * g.max_xi3());
  } else {
    lv_min_ = 0;
    lv_max_ = -1;
  }
  double min_xi_iso = std::min(g.min_xi_h(), g.n3 > 1 ? g.min_xi3() : g.min_xi_h());
  ki_min_ = floor_log2(0.75 * min_xi_iso);
  ki_max_ = ceil_log2((2.0 / 3.0) * g.max_xi());

  masks_h_.resize(kh_max_ - kh_min_ + 1);
  for (int k = kh_min_; k <= kh_max_; ++k) {
    auto& m = masks_h_[k - kh_min_];
    m.resize(xi_h_.size());
    for (std::size_t i = 0; i < xi_h_.size(); ++i)
      m[i] = pf_(std::ldexp(xi_h_[i], -k));
  }
  if (has_vertical()) {
    masks_v_.resize(lv_max_ - lv_min_ + 1);
    for (int l = lv_min_; l <= lv_max_; ++l) {
      auto& m = masks_v_[l - lv_min_];
      m.resize(n3);
      for (int i3 = 0; i3 < n3; ++i3) m[i3] = pf_(std::ldexp(xi3_abs_[i3], -l));
    }
  }

  lp_h_lo_ = std::min(kh_min_, has_vertical() ? lv_min_ : kh_min_) - 1;
  int lp_h_hi = std::max(kh_max_, has_vertical() ? lv_max_ : kh_max_) + 2;
  lowpass_h_.resize(lp_h_hi - lp_h_lo_ + 1);
  for (int k = lp_h_lo_; k <= lp_h_hi; ++k) {
    auto& m = lowpass_h_[k - lp_h_lo_];
    m.resize(xi_h_.size());
    for (std::size_t i = 0; i < xi_h_.size(); ++i)
      m[i] = pf_.lowpass(xi_h_[i], k);
  }
  if (has_vertical()) {
    lp_v_lo_ = std::min(lv_min_, 0) - 1;
    int lp_v_hi = lv_max_ + 3;
    lowpass_v_.resize(lp_v_hi - lp_v_lo_ + 1);
    for (int l = lp_v_lo_; l <= lp_v_hi; ++l) {
      auto& m = lowpass_v_[l - lp_v_lo_];
      m.resize(n3);
      for (int i3 = 0; i3 < n3; ++i3) m[i3] = pf_.lowpass(xi3_abs_[i3], l);
    }
  }

  h_pairs_.resize(xi_h_.size());
  for (std::size_t i = 0; i < xi_h_.size(); ++i)
    h_pairs_[i] = pair_for(xi_h_[i], kh_min_, kh_max_);
  v_pairs_.resize(n3);
  for (int i3 = 0; i3 < n3; ++i3)
    v_pairs_[i3] = has_vertical() ? pair_for(xi3_abs_[i3], lv_min_, lv_max_)
                                  : WeightPair{};
}

DyadicDecomposition::WeightPair DyadicDecomposition::pair_for(double xi,
                                                              int k_lo,
                                                              int k_hi) const {
  WeightPair p;
  if (xi <= 0.0) return p;
  for (int k = k_lo; k <= k_hi; ++k) {
    double w = pf_(std::ldexp(xi, -k));
    if (w > 0.0) {
      if (p.k0 == no_band) {
        p.k0 = k;
        p.w0 = w;
      } else {
        p.k1 = k;
        p.w1 = w;
      }
    }
  }
  return p;
}

double DyadicDecomposition::mask_h(int k, std::size_t ih) const {
  if (k < kh_min_ || k > kh_max_) return 0.0;
  return masks_h_[k - kh_min_][ih];
}

double DyadicDecomposition::mask_v(int l, int i3) const {
  if (!has_vertical() || l < lv_min_ || l > lv_max_) return 0.0;
  return masks_v_[l - lv_min_][i3];
}

double DyadicDecomposition::lowpass_h(int k, std::size_t ih) const {
  int hi = lp_h_lo_ + static_cast<int>(lowpass_h_.size()) - 1;
  if (k >= lp_h_lo_ && k <= hi) return lowpass_h_[k - lp_h_lo_][ih];
  return pf_.lowpass(xi_h_[ih], k);
}

double DyadicDecomposition::lowpass_v(int l, int i3) const {
  if (has_vertical()) {
    int hi = lp_v_lo_ + static_cast<int>(lowpass_v_.size()) - 1;
    if (l >= lp_v_lo_ && l <= hi) return lowpass_v_[l - lp_v_lo_][i3];
  }
  return pf_.lowpass(xi3_abs_[i3], l);
}

namespace {

template <typename Mul>
SpectralField apply_multiplier(const SpectralField& a, Mul&& mul) {
  const Grid& g = a.grid;
  SpectralField out(g);
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      std::size_t ih = static_cast<std::size_t>(i1) * g.n2 + i2;
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx)
        out.coeffs[idx] = mul(ih, i3) * a.coeffs[idx];
    }
  return out;
}

}  // namespace

SpectralField DyadicDecomposition::delta_h(const SpectralField& a, int k) const {
  if (k < kh_min_ || k > kh_max_) {
    SpectralField z(a.grid);
    return z;
  }
  const auto& m = masks_h_[k - kh_min_];
  return apply_multiplier(a, [&](std::size_t ih, int) { return m[ih]; });
}

SpectralField DyadicDecomposition::delta_v(const SpectralField& a, int l) const {
  if (!has_vertical() || l < lv_min_ || l > lv_max_) {
    SpectralField z(a.grid);
    return z;
  }
  const auto& m = masks_v_[l - lv_min_];
  return apply_multiplier(a, [&](std::size_t, int i3) { return m[i3]; });
}

SpectralField DyadicDecomposition::delta_iso(const SpectralField& a, int k) const {
  if (k < ki_min_ || k > ki_max_) {
    SpectralField z(a.grid);
    return z;
  }
  return apply_multiplier(a, [&](std::size_t ih, int i3) {
    double xi = std::hypot(xi_h_[ih], xi3_abs_[i3]);
    return pf_(std::ldexp(xi, -k));
  });
}

SpectralField DyadicDecomposition::s_h(const SpectralField& a, int k) const {
  return apply_multiplier(
      a, [&](std::size_t ih, int) { return lowpass_h(k, ih); });
}

SpectralField DyadicDecomposition::s_v(const SpectralField& a, int l) const {
  return apply_multiplier(a,
                          [&](std::size_t, int i3) { return lowpass_v(l, i3); });
}

SpectralField DyadicDecomposition::delta_vi(const SpectralField& a, int j) const {
  if (j >= 0) return delta_v(a, j);
  if (j == -1) return s_v(a, 0);
  SpectralField z(a.grid);
  return z;
}

VectorField DyadicDecomposition::delta_h(const VectorField& a, int k) const {
  VectorField out;
  out.u1 = delta_h(a.u1, k);
  out.u2 = delta_h(a.u2, k);
  out.u3 = delta_h(a.u3, k);
  out.divergence_free = a.divergence_free;
  return out;
}

VectorField DyadicDecomposition::delta_v(const VectorField& a, int l) const {
  VectorField out;
  out.u1 = delta_v(a.u1, l);
  out.u2 = delta_v(a.u2, l);
  out.u3 = delta_v(a.u3, l);
  out.divergence_free = a.divergence_free;
  return out;
}

VectorField DyadicDecomposition::s_h(const VectorField& a, int k) const {
  VectorField out;
  out.u1 = s_h(a.u1, k);
  out.u2 = s_h(a.u2, k);
  out.u3 = s_h(a.u3, k);
  out.divergence_free = a.divergence_free;
  return out;
}

VectorField DyadicDecomposition::s_v(const VectorField& a, int l) const {
  VectorField out;
  out.u1 = s_v(a.u1, l);
  out.u2 = s_v(a.u2, l);
  out.u3 = s_v(a.u3, l);
  out.divergence_free = a.divergence_free;
  return out;
}

SpectralField DyadicDecomposition::ll_part(const SpectralField& a) const {
  return apply_multiplier(a, [&](std::size_t ih, int i3) {
    const WeightPair& vp = v_pairs_[i3];
    double m = 0.0;
    if (vp.k0 != no_band) m += vp.w0 * lowpass_h(vp.k0 - 1, ih);
    if (vp.k1 != no_band) m += vp.w1 * lowpass_h(vp.k1 - 1, ih);
    return m;
  });
}

SpectralField DyadicDecomposition::hh_part(const SpectralField& a) const {
  SpectralField ll = ll_part(a);
  SpectralField out = a;
  out -= ll;
  return out;
}

std::pair<VectorField, VectorField> DyadicDecomposition::split_hh_ll(
    const VectorField& u0) const {
  VectorField ll;
  ll.u1 = ll_part(u0.u1);
  ll.u2 = ll_part(u0.u2);
  ll.u3 = ll_part(u0.u3);
  ll.divergence_free = u0.divergence_free;
  VectorField hh = u0;
  hh -= ll;
  hh.divergence_free = u0.divergence_free;
  return {std::move(hh), std::move(ll)};
}

}  // namespace ans
