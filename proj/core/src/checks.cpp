#include "ans/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ans/mixed_norm.hpp"
#include "ans/operators.hpp"
#include "ans/reference.hpp"
#include "ans/transform.hpp"

namespace ans {
namespace {

double rel_err(double got, double want, double scale) {
  return std::abs(got - want) / std::max(scale, 1e-300);
}

double max_over_median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  double med = v[v.size() / 2];
  return med > 0.0 ? v.back() / med : 0.0;
}

}  // namespace

CheckResult check_partition_unity(const PartitionFunction& pf, int J) {
  double worst = 0.0;
  const double lo = std::ldexp(1.0, -J + 2), hi = std::ldexp(1.0, J - 2);
  const int samples = 400;
  for (int i = 0; i <= samples; ++i) {
    double tau = lo * std::pow(hi / lo, static_cast<double>(i) / samples);
    worst = std::max(worst, std::abs(pf.partial_sum(tau, -J, J) - 1.0));
  }
  CheckResult r{"partition_unity", worst <= 1e-10, worst, 1e-10,
                "max |sum phi - 1| over the annulus"};
  return r;
}

CheckResult check_divergence_preservation(const Grid& g, std::uint64_t seed) {
  double cap = (std::min({g.n1, g.n2, g.n3}) / 3) * two_pi / g.L1;
  BandWindow win{1.0, std::max(2.0, 0.4 * cap)};
  VectorField u0 = gen_random_bandlimited(g, seed, win, win, 1e-2);
  SolverConfig cfg;
  cfg.grid = g;
  cfg.nu_h = 0.1;
  cfg.nu_3 = 0.01;
  cfg.dt = 1e-3;
  cfg.T = 0.05;
  cfg.record_every = 10;
  SolveResult sol = solve_u(u0, cfg);
  double worst = sol.record.max_div_residual;
  return {"divergence_residual", !sol.record.blew_up && worst <= 1e-8, worst,
          1e-8, "max over recorded steps of a short nonlinear run"};
}

CheckResult check_besov_scale_invariance(const Grid& g, std::uint64_t seed) {
  // Window chosen so frequencies stay representable after doubling.
  int n_min = std::min({g.n1, g.n2, g.n3});
  double b = 0.44 * (n_min / 2) * (two_pi / g.L1);
  BandWindow win{b / 1.6, b};
  SpectralField f = gen_random_scalar(g, seed, win, win, 1.0);

  Grid half(g.n1, g.n2, g.n3, g.L1 / 2, g.L2 / 2, g.L3 / 2);
  SpectralField f2(half);
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    f2.coeffs[i] = 2.0 * f.coeffs[i];

  DyadicDecomposition dec(g), dec2(half);
  double worst = 0.0;
  for (double p : {2.0, 4.0}) {
    BesovParams params{p, 1.0, 0.0};
    double n1 = besov_static(f, dec, params);
    double n2 = besov_static(f2, dec2, params);
    worst = std::max(worst, std::abs(n2 / n1 - 1.0));
  }
  return {"besov_scale_invariance", worst <= 0.01, worst, 0.01,
          "max |ratio - 1| under the dyadic rescale, p in {2, 4}"};
}

CheckResult check_bernstein(const Grid& g, std::uint64_t seed, int corpus) {
  DyadicDecomposition dec(g);
  double dealias_h =
      std::min((g.n1 / 3) * g.dk1(), (g.n2 / 3) * g.dk2());
  double dealias_v = (g.n3 / 3) * g.dk3();

  std::vector<int> ks, ls;
  for (int k = std::max(2, dec.k_min()); k <= dec.k_max(); ++k)
    if (PartitionFunction::support_hi * std::ldexp(1.0, k) <= dealias_h)
      ks.push_back(k);
  if (ks.empty()) ks.push_back(std::max(dec.k_min() + 2, 1));
  for (int l = std::max(2, dec.l_min()); l <= dec.l_max(); ++l)
    if (PartitionFunction::support_hi * std::ldexp(1.0, l) <= dealias_v)
      ls.push_back(l);
  if (ls.empty()) ls.push_back(std::max(dec.l_min() + 2, 1));

  BandWindow all_h{0.5, g.max_xi_h()}, all_v{0.0, g.max_xi3()};
  double h_min = inf, h_max = 0.0, v_min = inf, v_max = 0.0;
  std::vector<double> mag(g.size());
  auto grad_ratio = [&](const SpectralField& band, int axes, double scale) {
    // axes = 2: horizontal magnitude |grad_h|; axes = 1: |d3|.
    std::vector<cplx> d1 = inverse_transform(partial_derivative(band, axes == 2 ? 1 : 3));
    if (axes == 2) {
      std::vector<cplx> d2 = inverse_transform(partial_derivative(band, 2));
      for (std::size_t i = 0; i < mag.size(); ++i)
        mag[i] = std::hypot(d1[i].real(), d2[i].real());
    } else {
      for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(d1[i].real());
    }
    double num = mixed_norm_physical(std::span<const double>(mag), band.grid,
                                     4.0, 2.0);
    double den = scale * mixed_norm(band, 4.0, 2.0);
    return den > 0.0 ? num / den : 0.0;
  };

  for (int i = 0; i < corpus; ++i) {
    SpectralField f =
        gen_random_scalar(g, seed + 1000 + i, all_h, all_v, 1.0);
    int k = ks[i % ks.size()];
    SpectralField bh = dec.delta_h(f, k);
    double rh = grad_ratio(bh, 2, std::ldexp(1.0, k));
    if (rh > 0.0) {
      h_min = std::min(h_min, rh);
      h_max = std::max(h_max, rh);
    }
    int l = ls[i % ls.size()];
    SpectralField bv = dec.delta_v(f, l);
    double rv = grad_ratio(bv, 1, std::ldexp(1.0, l));
    if (rv > 0.0) {
      v_min = std::min(v_min, rv);
      v_max = std::max(v_max, rv);
    }
  }
  double spread = std::max(h_max / h_min, v_max / v_min);
  return {"bernstein_stability", spread <= 10.0, spread, 10.0,
          "corpus max/min of the derivative ratios, shells k=" +
              std::to_string(ks.front()) + ".." + std::to_string(ks.back())};
}

CheckResult check_embeddings(const Grid& g, std::uint64_t seed, int corpus) {
  DyadicDecomposition dec(g);
  double cap = (std::min({g.n1, g.n2, g.n3}) / 3) * (two_pi / g.L1);
  BandWindow win{1.0, std::max(2.0, 0.8 * cap)};

  std::vector<double> c1[3], c2[3];
  const double ps[3] = {2.0, 4.0, 8.0};
  for (int i = 0; i < corpus; ++i) {
    VectorField v = gen_random_bandlimited(g, seed + 77 * i + 5, win, win, 1.0);
    double b012 = besov_b012(v, dec);
    double binf2 = b_neg1_inf_q(v, dec, 2.0);
    for (int ip = 0; ip < 3; ++ip) {
      BesovParams params{ps[ip], 1.0, 0.0};
      double bp = besov_static(v, dec, params);
      if (b012 > 0.0) c1[ip].push_back(bp / b012);
      if (bp > 0.0) c2[ip].push_back(binf2 / bp);
    }
  }
  double worst = 0.0;
  for (int ip = 0; ip < 3; ++ip)
    worst = std::max({worst, max_over_median(c1[ip]), max_over_median(c2[ip])});
  return {"embedding_chain", worst <= 5.0, worst, 5.0,
          "worst max/median of fitted constants, p in {2,4,8}, corpus " +
              std::to_string(corpus)};
}

std::vector<CheckResult> check_oracles(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Grid g = Grid::cubic(8);

  // FFT vs direct DFT, and the analysis/synthesis round trip.
  {
    std::vector<double> phys(g.size());
    std::mt19937_64 rng(seed);
    for (auto& v : phys)
      v = (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 0.5;
    SpectralField fast = forward_transform(std::span<const double>(phys), g);
    SpectralField slow = reference::dft_forward(phys, g);
    double scale = 0.0;
    for (const auto& c : slow.coeffs) scale = std::max(scale, std::abs(c));
    double worst = 0.0;
    for (std::size_t i = 0; i < fast.coeffs.size(); ++i)
      worst = std::max(worst,
                       std::abs(fast.coeffs[i] - slow.coeffs[i]) / scale);
    auto round = inverse_transform_real(fast);
    double worst_rt = 0.0, pscale = 0.0;
    for (double v : phys) pscale = std::max(pscale, std::abs(v));
    for (std::size_t i = 0; i < phys.size(); ++i)
      worst_rt = std::max(worst_rt, std::abs(round[i] - phys[i]) / pscale);
    worst = std::max(worst, worst_rt);
    out.push_back({"oracle_fft_vs_dft", worst <= 1e-12, worst, 1e-12,
                   "8^3 coefficients and round trip"});
  }

  // Dealiased pseudo-spectral product vs direct convolution.
  {
    BandWindow win{0.5, 2.0};
    SpectralField a = dealias(gen_random_scalar(g, seed + 1, win, win, 1.0));
    SpectralField b = dealias(gen_random_scalar(g, seed + 2, win, win, 1.0));
    auto pa = inverse_transform(a);
    auto pb = inverse_transform(b);
    aligned_vector<cplx> prod(g.size());
    for (std::size_t i = 0; i < prod.size(); ++i)
      prod[i] = pa[i].real() * pb[i].real();
    SpectralField fast =
        dealias(forward_transform(std::span<const cplx>(prod), g));
    SpectralField slow = dealias(reference::convolve(a, b));
    double scale = 0.0, worst = 0.0;
    for (const auto& c : slow.coeffs) scale = std::max(scale, std::abs(c));
    for (std::size_t i = 0; i < fast.coeffs.size(); ++i)
      worst = std::max(worst,
                       std::abs(fast.coeffs[i] - slow.coeffs[i]) / scale);
    out.push_back({"oracle_dealiased_product", worst <= 1e-10, worst, 1e-10,
                   "8^3 dealiased product vs lattice convolution"});
  }

  // Mixed norms vs nested-loop quadrature.
  {
    BandWindow win{0.5, 3.0};
    SpectralField f = gen_random_scalar(g, seed + 3, win, win, 1.0);
    auto phys = inverse_transform(f);
    double worst = 0.0;
    const double cases[4][2] = {{2, 2}, {4, 2}, {inf, 2}, {3, inf}};
    for (const auto& c : cases) {
      double got = mixed_norm(f, c[0], c[1]);
      double want = reference::mixed_norm_quadrature(
          std::span<const cplx>(phys), g, c[0], c[1]);
      worst = std::max(worst, rel_err(got, want, want));
    }
    out.push_back({"oracle_mixed_norm", worst <= 1e-12, worst, 1e-12,
                   "(p,q) in {(2,2),(4,2),(inf,2),(3,inf)}"});
  }

  // Frozen-field trilinear F_j vs direct quadrature.
  {
    DyadicDecomposition dec(g);
    BandWindow win{0.5, 2.0};
    VectorField u = gen_random_bandlimited(g, seed + 4, win, win, 1.0);
    VectorField a = gen_random_bandlimited(g, seed + 5, win, win, 1.0);
    int j = 0;
    double got = trilinear_Fj_frozen(u, a, j, 1.0, dec);

    // Oracle: convolution convection, masked, inner product by quadrature of
    // direct inverse transforms.
    VectorField conv(g);
    for (int i = 0; i < 3; ++i) {
      SpectralField acc(g);
      for (int jax = 1; jax <= 3; ++jax) {
        SpectralField da = partial_derivative(a.comp(i), jax);
        acc += reference::convolve(u.comp(jax - 1), da);
      }
      conv.comp(i) = dealias(acc);
    }
    double want = 0.0;
    for (int c = 0; c < 3; ++c) {
      auto dj = reference::dft_inverse(dec.delta_v(conv.comp(c), j));
      auto aj = reference::dft_inverse(dec.delta_v(a.comp(c), j));
      want += reference::inner_product_quadrature(dj, aj, g);
    }
    want = std::abs(want);
    double worst = rel_err(got, want, std::max(want, got));
    out.push_back({"oracle_trilinear_Fj", worst <= 1e-8, worst, 1e-8,
                   "frozen fields, j = 0, 8^3"});
  }
  return out;
}

namespace {

VectorField band_equalized_hh(const Grid& g, const DyadicDecomposition& dec,
                              std::uint64_t seed, double p, int k_lo, int k_hi,
                              int l_lo, int l_hi) {
  VectorField sum(g);
  std::uint64_t s = seed;
  for (int l = l_lo; l <= l_hi; ++l)
    for (int k = std::max(l - 1, k_lo); k <= k_hi; ++k) {
      double ch = std::ldexp(1.0, k), cv = std::ldexp(1.0, l);
      // Flat-top cores keep the content of every band at the same relative
      // position, so the per-band decay rates are comparable.
      BandWindow h{4.0 / 3.0 * ch, 1.5 * ch}, v{4.0 / 3.0 * cv, 1.5 * cv};
      VectorField piece = gen_random_bandlimited(g, ++s, h, v, 1.0);
      BandMatrix B = band_mixed_norms(piece, dec, p);
      double b = B.at(k, l);
      if (b <= 0.0) continue;
      piece *= std::exp2((1.0 - 2.0 / p) * k) * std::exp2(-0.5 * l) / b;
      sum += piece;
    }
  sum.divergence_free = true;
  return sum;
}

}  // namespace

CheckResult check_heat_decay(const Grid& g, std::uint64_t seed,
                             std::vector<DecayRow>* rows, double* q_out) {
  DyadicDecomposition dec(g);
  double cap = (std::min({g.n1, g.n2, g.n3}) / 3) * (two_pi / g.L1);
  int k_hi = std::max(1, static_cast<int>(std::floor(std::log2(cap))) - 1);
  int l_hi = std::max(1, k_hi - 1);
  VectorField u = band_equalized_hh(g, dec, seed, 4.0, 1, k_hi, 1, l_hi);
  VectorField hh = dec.split_hh_ll(u).first;

  bool pass = true;
  double worst_spread = 0.0;
  for (double q : {1.0, 2.0}) {
    HeatFlowParams params{0.2, 0.02, decay_time_grid(hh, 0.2, 0.02)};
    DecayReport rep = verify_heat_decay(u, params, dec, q, 4.0);
    bool ok = !rep.rows.empty() && rep.spread() <= 10.0 &&
              rep.max_ratio <= 5.0 * rep.median_ratio;
    pass = pass && ok;
    worst_spread = std::max(worst_spread, rep.spread());
    if (rows && q == 2.0) {
      *rows = rep.rows;
      if (q_out) *q_out = q;
    }
  }
  return {"heat_decay_bounds", pass, worst_spread, 10.0,
          "band ratio spread, q in {1,2}, shells up to k=" +
              std::to_string(k_hi)};
}

CheckResult check_linf_l2(const Grid& g, std::uint64_t seed) {
  DyadicDecomposition dec(g);
  double cap = (std::min({g.n1, g.n2, g.n3}) / 3) * (two_pi / g.L1);
  int k_hi = std::max(1, static_cast<int>(std::floor(std::log2(cap))) - 1);
  std::vector<double> fitted;
  for (int i = 0; i < 5; ++i) {
    VectorField u = band_equalized_hh(g, dec, seed + 100 * i, 4.0, 1, k_hi, 1,
                                      std::max(1, k_hi - 1));
    VectorField hh = dec.split_hh_ll(u).first;
    HeatFlowParams params{0.2, 0.0, decay_time_grid(hh, 0.2, 0.0)};
    LinfL2Report rep = verify_linf_l2_decay(u, params, dec, 4.0);
    if (!std::isfinite(rep.ratio_sum))
      return {"linf_l2_decay", false, inf, 5.0, "non-summable ratios"};
    fitted.push_back(rep.scalar_fitted_C);
  }
  double lo = *std::min_element(fitted.begin(), fitted.end());
  double hi = *std::max_element(fitted.begin(), fitted.end());
  double spread = lo > 0.0 ? hi / lo : inf;
  return {"linf_l2_decay", spread <= 5.0, spread, 5.0,
          "corpus max/min of the fitted scalar constant"};
}

CheckResult check_forcing_quadratic(const Grid& g, std::uint64_t seed) {
  DyadicDecomposition dec(g);
  double cap = (std::min({g.n1, g.n2, g.n3}) / 3) * (two_pi / g.L1);
  BandWindow win{1.0, std::max(2.0, 0.6 * cap)};
  double worst = 0.0;
  for (double p : {2.0, 4.0}) {
    BesovParams params{p, 0.3, 0.0};
    std::vector<double> fitted;
    for (int i = 0; i < 6; ++i) {
      VectorField u = gen_random_bandlimited(g, seed + 31 * i, win, win, 1.0);
      EFunctionalReport e = e_functional(u, params, dec, inf);
      if (e.besov_part > 0.0)
        fitted.push_back(e.forcing_part * params.nu_h /
                         (e.besov_part * e.besov_part));
    }
    worst = std::max(worst, max_over_median(fitted));
  }
  return {"forcing_quadratic_bound", worst <= 5.0, worst, 5.0,
          "max/median of fitted nu_h * forcing / besov^2, p in {2,4}"};
}

std::vector<TrilinearDiagnosticRow> trilinear_diagnostics(const Grid& g,
                                                          std::uint64_t seed,
                                                          double nu_h, double p,
                                                          double T) {
  auto dec = std::make_shared<DyadicDecomposition>(g);
  double cap = (std::min({g.n1, g.n2, g.n3}) / 3) * (two_pi / g.L1);
  BandWindow win{1.0, std::max(2.0, 0.6 * cap)};
  VectorField a = gen_random_bandlimited(g, seed, win, win, 1.0);
  VectorField u = gen_random_bandlimited(g, seed + 1, win, win, 1.0);

  // ||a||_{B^{0,1/2}(T)} of a frozen field (piecewise-constant accumulator).
  NormAccumulator acc(dec, {2.0, nu_h, 0.0});
  acc.update(0.0, a, true);
  acc.update(T, a, true);
  double a_norm = acc.b012_time_norm();

  double qt = 2.0 * p / (p - 1.0);
  double u_norm = 0.0;
  for (int j = dec->l_min(); j <= dec->l_max(); ++j) {
    double band = 0.0;
    for (int c = 0; c < 3; ++c) {
      double m = mixed_norm(dec->delta_v(u.comp(c), j), 2.0 * p, 2.0);
      band += m * m;
    }
    u_norm += std::exp2(0.5 * j) * std::pow(T, 1.0 / qt) * std::sqrt(band);
  }

  std::vector<TrilinearDiagnosticRow> rows;
  for (int j = dec->l_min(); j <= dec->l_max(); ++j) {
    TrilinearDiagnosticRow row;
    row.j = j;
    row.Fj = trilinear_Fj_frozen(u, a, j, T, *dec);
    row.Gj = trilinear_Gj_frozen(a, a, u, j, T, *dec);
    row.bound_rhs = std::exp2(-static_cast<double>(j)) *
                    std::pow(nu_h, -0.5 - 0.5 / p) * a_norm * a_norm * u_norm;
    row.fitted_C = row.bound_rhs > 0.0 ? row.Fj / row.bound_rhs : 0.0;
    rows.push_back(row);
  }
  return rows;
}

CheckSuiteResult run_checks(const Grid& g, std::uint64_t seed) {
  CheckSuiteResult suite;
  suite.results.push_back(check_partition_unity(PartitionFunction{}));
  suite.results.push_back(check_divergence_preservation(g, seed));
  suite.results.push_back(check_besov_scale_invariance(g, seed + 1));
  suite.results.push_back(check_bernstein(g, seed + 2));
  suite.results.push_back(check_embeddings(g, seed + 3));
  suite.results.push_back(check_heat_decay(g, seed + 5));
  suite.results.push_back(check_linf_l2(g, seed + 6));
  suite.results.push_back(check_forcing_quadratic(g, seed + 7));
  for (auto& r : check_oracles(seed + 4)) suite.results.push_back(std::move(r));
  return suite;
}

}  // namespace ans
