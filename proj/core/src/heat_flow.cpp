#include "ans/heat_flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ans/mixed_norm.hpp"
#include "ans/operators.hpp"
#include "ans/transform.hpp"

namespace ans {

void HeatFlowParams::validate() const {
  if (!(nu_h > 0.0)) throw std::invalid_argument("nu_h must be positive");
  if (!(nu_3 >= 0.0)) throw std::invalid_argument("nu_3 must be nonnegative");
  if (times.empty()) throw std::invalid_argument("time grid is empty");
  if (times.front() < 0.0) throw std::invalid_argument("times must be >= 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("times must be strictly increasing");
}

SpectralField semigroup(const SpectralField& a, double t, double nu_h,
                        double nu_3) {
  if (t < 0.0) throw std::invalid_argument("semigroup requires t >= 0");
  const Grid& g = a.grid;
  WavenumberTables k(g);
  SpectralField out(g);
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      double xh2 = k.xi1[i1] * k.xi1[i1] + k.xi2[i2] * k.xi2[i2];
      std::size_t idx = (static_cast<std::size_t>(i1) * g.n2 + i2) * g.n3;
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        double lam = nu_h * xh2 + nu_3 * k.xi3[i3] * k.xi3[i3];
        out.coeffs[idx] = std::exp(-lam * t) * a.coeffs[idx];
      }
    }
  return out;
}

VectorField semigroup(const VectorField& a, double t, double nu_h,
                      double nu_3) {
  VectorField out;
  out.u1 = semigroup(a.u1, t, nu_h, nu_3);
  out.u2 = semigroup(a.u2, t, nu_h, nu_3);
  out.u3 = semigroup(a.u3, t, nu_h, nu_3);
  out.divergence_free = a.divergence_free;
  return out;
}

HeatFlow::HeatFlow(const VectorField& u0, HeatFlowParams params,
                   const DyadicDecomposition& dec)
    : params_(std::move(params)) {
  params_.validate();
  hh0_ = dec.split_hh_ll(u0).first;
}

VectorField HeatFlow::snapshot(std::size_t i) const {
  return at(params_.times.at(i));
}

VectorField HeatFlow::at(double t) const {
  return semigroup(hh0_, t, params_.nu_h, params_.nu_3);
}

HeatFlow make_uF(const VectorField& u0, HeatFlowParams params,
                 const DyadicDecomposition& dec) {
  return HeatFlow(u0, std::move(params), dec);
}

std::vector<double> decay_time_grid(const VectorField& a, double nu_h,
                                    double nu_3, int points_per_doubling,
                                    double efolds) {
  const Grid& g = a.grid();
  WavenumberTables k(g);
  double peak = 0.0;
  for (int c = 0; c < 3; ++c)
    for (const auto& z : a.comp(c).coeffs) peak = std::max(peak, std::abs(z));
  double rate_min = 0.0, rate_max = 0.0;
  if (peak > 0.0) {
    rate_min = std::numeric_limits<double>::infinity();
    std::size_t idx = 0;
    for (int i1 = 0; i1 < g.n1; ++i1)
      for (int i2 = 0; i2 < g.n2; ++i2) {
        double xh2 = k.xi1[i1] * k.xi1[i1] + k.xi2[i2] * k.xi2[i2];
        for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
          double amp = std::abs(a.u1.coeffs[idx]) + std::abs(a.u2.coeffs[idx]) +
                       std::abs(a.u3.coeffs[idx]);
          if (amp < 1e-14 * peak) continue;
          double lam = nu_h * xh2 + nu_3 * k.xi3[i3] * k.xi3[i3];
          if (lam > 0.0) {
            rate_min = std::min(rate_min, lam);
            rate_max = std::max(rate_max, lam);
          }
        }
      }
    if (!std::isfinite(rate_min)) rate_min = rate_max = 0.0;
  }
  if (rate_max <= 0.0) return {0.0, 1.0};

  double t_hi = efolds / rate_min;
  double t_lo = 0.05 / rate_max;
  std::vector<double> times{0.0};
  double ratio = std::pow(2.0, 1.0 / points_per_doubling);
  for (double t = t_lo; t < t_hi; t *= ratio) times.push_back(t);
  times.push_back(t_hi);
  return times;
}

namespace {

/// Trapezoid of v^q over the grid plus an exponential-tail correction fitted
/// from the last two samples.
double lq_time_norm(const std::vector<double>& times,
                    const std::vector<double>& v, double q, bool add_tail) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    double a = std::pow(v[i - 1], q), b = std::pow(v[i], q);
    integral += 0.5 * (a + b) * (times[i] - times[i - 1]);
  }
  std::size_t n = v.size();
  if (add_tail && n >= 2 && v[n - 1] > 0.0 && v[n - 2] > v[n - 1]) {
    double rate =
        std::log(v[n - 2] / v[n - 1]) / (times[n - 1] - times[n - 2]);
    if (rate > 0.0) integral += std::pow(v[n - 1], q) / (q * rate);
  }
  return std::pow(integral, 1.0 / q);
}

}  // namespace

DecayReport verify_heat_decay(const VectorField& u0,
                                 const HeatFlowParams& params,
                                 const DyadicDecomposition& dec, double q,
                                 double p) {
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  if (!(p >= 2.0)) throw std::invalid_argument("p must be >= 2");
  HeatFlow flow(u0, params, dec);
  const auto& times = flow.times();

  // Band time series of ||Delta^h_k Delta^v_l u_F(t)||_{L^p_h(L^2_v)}.
  BandMatrix first = band_mixed_norms(flow.snapshot(0), dec, p);
  double peak = 0.0;
  for (int k = first.k_lo(); k <= first.k_hi(); ++k)
    for (int l = first.l_lo(); l <= first.l_hi(); ++l)
      peak = std::max(peak, first.at(k, l));

  std::vector<BandMatrix> series;
  series.reserve(times.size());
  series.push_back(first);
  for (std::size_t i = 1; i < times.size(); ++i)
    series.push_back(band_mixed_norms(flow.snapshot(i), dec, p));

  DecayReport rep;
  rep.q = q;
  rep.p = p;
  rep.vertical_branch_skipped = (params.nu_3 == 0.0);
  if (peak == 0.0) return rep;
  for (int l = first.l_lo(); l <= first.l_hi(); ++l)
    for (int k = std::max(l - 1, first.k_lo()); k <= first.k_hi(); ++k) {
      if (first.at(k, l) < 1e-8 * peak) continue;  // unpopulated band
      std::vector<double> v(times.size());
      for (std::size_t i = 0; i < times.size(); ++i) v[i] = series[i].at(k, l);
      double lhs = lq_time_norm(times, v, q, /*add_tail=*/true);
      double hor = std::pow(params.nu_h, -1.0 / q) * std::exp2(-2.0 * k / q);
      double ver = params.nu_3 > 0.0
                       ? std::pow(params.nu_3, -1.0 / q) * std::exp2(-2.0 * l / q)
                       : std::numeric_limits<double>::infinity();
      double bound = std::exp2((1.0 - 2.0 / p) * k) * std::exp2(-0.5 * l) *
                     std::min(hor, ver);
      rep.rows.push_back({k, l, lhs, bound, lhs / bound});
    }

  if (!rep.rows.empty()) {
    std::vector<double> ratios;
    for (const auto& r : rep.rows) ratios.push_back(r.ratio);
    std::sort(ratios.begin(), ratios.end());
    rep.min_ratio = ratios.front();
    rep.max_ratio = ratios.back();
    rep.median_ratio = ratios[ratios.size() / 2];
  }
  return rep;
}

LinfL2Report verify_linf_l2_decay(const VectorField& u0,
                                    const HeatFlowParams& params,
                                    const DyadicDecomposition& dec, double p) {
  HeatFlow flow(u0, params, dec);
  const auto& times = flow.times();
  const Grid& g = dec.grid();

  int l_lo = dec.l_min(), l_hi = dec.l_max();
  std::vector<std::vector<double>> band_series(
      std::max(0, l_hi - l_lo + 1), std::vector<double>(times.size(), 0.0));
  std::vector<double> sup_series(times.size(), 0.0);

  std::vector<double> mag(g.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    VectorField uf = flow.snapshot(i);
    for (int j = l_lo; j <= l_hi; ++j) {
      VectorField band = dec.delta_v(uf, j);
      double n1 = mixed_norm(band.u1, inf, 2.0);
      double n2 = mixed_norm(band.u2, inf, 2.0);
      double n3 = mixed_norm(band.u3, inf, 2.0);
      band_series[j - l_lo][i] = std::sqrt(n1 * n1 + n2 * n2 + n3 * n3);
    }
    auto p1 = inverse_transform(uf.u1);
    auto p2 = inverse_transform(uf.u2);
    auto p3 = inverse_transform(uf.u3);
    double m = 0.0;
    for (std::size_t x = 0; x < mag.size(); ++x)
      m = std::max(m, std::sqrt(std::norm(p1[x]) + std::norm(p2[x]) +
                                std::norm(p3[x])));
    sup_series[i] = m;
  }

  LinfL2Report rep;
  double peak = 0.0;
  for (int j = l_lo; j <= l_hi; ++j)
    peak = std::max(peak, band_series[j - l_lo][0]);
  for (int j = l_lo; peak > 0.0 && j <= l_hi; ++j) {
    if (band_series[j - l_lo][0] < 1e-8 * peak) continue;
    double lhs = lq_time_norm(times, band_series[j - l_lo], 2.0, true);
    double bound = std::pow(params.nu_h, -0.5) * std::exp2(-0.5 * j);
    rep.rows.push_back({j, lhs, bound, lhs / bound});
    rep.ratio_sum += lhs / bound;
  }
  rep.scalar_lhs = lq_time_norm(times, sup_series, 2.0, true);
  BesovParams bp{p, params.nu_h, params.nu_3};
  double b = besov_static(u0, dec, bp);
  rep.scalar_fitted_C =
      b > 0.0 ? rep.scalar_lhs / (std::pow(params.nu_h, -0.5) * b) : 0.0;
  return rep;
}

}  // namespace ans
