#include "doctest.h"

#include "ans/heat_flow.hpp"
#include "test_util.hpp"

using namespace ans;
using namespace ans::testutil;

TEST_CASE("semigroup scales a pure mode by the exact viscous factor") {
  Grid g = Grid::cubic(16);
  SpectralField a(g);
  a.mode(1, 0, 2) = cplx(1.0, 0.5);
  a.mode(-1, 0, -2) = std::conj(a.mode(1, 0, 2));
  SpectralField b = semigroup(a, 1.0, 0.1, 0.01);
  double factor = std::exp(-(0.1 * 1.0 + 0.01 * 4.0));
  CHECK(std::abs(b.mode(1, 0, 2) - factor * a.mode(1, 0, 2)) < 1e-15);
}

TEST_CASE("semigroup at t = 0 is the identity and composes in t") {
  Grid g = Grid::cubic(16);
  auto phys = random_physical(g, 4);
  SpectralField a = forward_transform(std::span<const double>(phys), g);
  CHECK(max_coeff_diff(semigroup(a, 0.0, 0.3, 0.2), a) == 0.0);
  SpectralField two_steps = semigroup(semigroup(a, 0.4, 0.3, 0.2), 0.6, 0.3, 0.2);
  SpectralField one_step = semigroup(a, 1.0, 0.3, 0.2);
  CHECK(max_coeff_diff(two_steps, one_step) / max_coeff(one_step) < 1e-12);
  CHECK_THROWS_AS(semigroup(a, -0.1, 0.3, 0.2), std::invalid_argument);
}

TEST_CASE("make_uF of ll-only data is identically zero") {
  Grid g = Grid::cubic(32);
  // Spectrum at xi_h = 0 with nonzero xi3: entirely low-horizontal.
  SpectralField f(g);
  f.mode(0, 0, 3) = cplx(0.0, 1.0);
  f.mode(0, 0, -3) = cplx(0.0, -1.0);
  VectorField u(g);
  u.u1 = f;
  u.divergence_free = true;
  DyadicDecomposition dec(g);
  HeatFlow flow(u, {0.1, 0.01, {0.0, 0.5, 1.0}}, dec);
  for (std::size_t i = 0; i < flow.size(); ++i)
    CHECK(l2_norm(flow.snapshot(i)) < 1e-12);
}

TEST_CASE("make_uF: the t = 0 snapshot is the hh part, and snapshots stay "
          "divergence-free") {
  Grid g = Grid::cubic(32);
  BandWindow win{1.0, 9.0};
  VectorField u = gen_random_bandlimited(g, 17, win, win, 1.0);
  DyadicDecomposition dec(g);
  HeatFlow flow = make_uF(u, {0.1, 0.01, {0.0, 0.3}}, dec);
  CHECK(max_coeff_diff(flow.snapshot(0), dec.split_hh_ll(u).first) == 0.0);
  CHECK(divergence_residual(flow.snapshot(1)) <= 1e-10);
}

TEST_CASE("single-band hh data decays with the exact exponential factor") {
  Grid g = Grid::cubic(32);
  SpectralField f(g);
  f.mode(4, 0, 2) = cplx(0.3, -0.7);
  f.mode(-4, 0, -2) = std::conj(f.mode(4, 0, 2));
  VectorField u(g);
  u.u2 = f;  // xi.u = xi2 u2 = 0
  u.divergence_free = true;
  DyadicDecomposition dec(g);
  double nu_h = 0.1, nu_3 = 0.02, t = 0.8;
  HeatFlow flow(u, {nu_h, nu_3, {0.0, t}}, dec);
  double want = std::exp(-(nu_h * 16.0 + nu_3 * 4.0) * t) *
                l2_norm(flow.snapshot(0));
  CHECK(l2_norm(flow.snapshot(1)) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("u_F commutes with the band projectors") {
  Grid g = Grid::cubic(32);
  BandWindow win{1.0, 9.0};
  VectorField u = gen_random_bandlimited(g, 19, win, win, 1.0);
  DyadicDecomposition dec(g);
  double nu_h = 0.2, nu_3 = 0.05, t = 0.4;
  HeatFlow flow(u, {nu_h, nu_3, {0.0, t}}, dec);
  VectorField left = dec.delta_h(dec.delta_v(flow.snapshot(1), 1), 2);
  VectorField right =
      semigroup(dec.delta_h(dec.delta_v(flow.hh0(), 1), 2), t, nu_h, nu_3);
  CHECK(max_coeff_diff(left, right) / std::max(max_coeff(right.u1), 1e-300) <
        1e-12);
}

TEST_CASE("L2 norm of u_F is non-increasing along the flow") {
  Grid g = Grid::cubic(32);
  BandWindow win{1.0, 9.0};
  VectorField u = gen_random_bandlimited(g, 23, win, win, 1.0);
  DyadicDecomposition dec(g);
  std::vector<double> times{0.0, 0.1, 0.25, 0.5, 1.0, 2.0};
  HeatFlow flow(u, {0.1, 0.0, times}, dec);
  double prev = l2_norm(flow.snapshot(0));
  for (std::size_t i = 1; i < times.size(); ++i) {
    double cur = l2_norm(flow.snapshot(i));
    CHECK(cur <= prev * (1.0 + 1e-14));
    prev = cur;
  }
}

TEST_CASE("decay check: single mode matches the closed-form time integral") {
  Grid g = Grid::cubic(32);
  const int k0 = 2, l0 = 1;  // |xi_h| = 4 = 2^2, |xi_3| = 2 = 2^1
  SpectralField f(g);
  f.mode(4, 0, 2) = cplx(0.5, 0.0);
  f.mode(-4, 0, -2) = cplx(0.5, 0.0);
  VectorField u(g);
  u.u2 = f;
  u.divergence_free = true;
  double nu_h = 0.3, nu_3 = 0.1;
  DyadicDecomposition dec(g);
  HeatFlowParams params{nu_h, nu_3,
                        decay_time_grid(dec.split_hh_ll(u).first, nu_h, nu_3,
                                        16)};
  DecayReport rep = verify_heat_decay(u, params, dec, 1.0, 4.0);

  double lam = nu_h * 16.0 + nu_3 * 4.0;
  BandMatrix B = band_mixed_norms(dec.split_hh_ll(u).first, dec, 4.0);
  double want = B.at(k0, l0) / lam;  // int_0^inf e^{-lam t} dt = 1/lam
  bool found = false;
  for (const auto& row : rep.rows)
    if (row.k == k0 && row.l == l0) {
      found = true;
      CHECK(row.lhs == doctest::Approx(want).epsilon(0.01));
      // 1/lam <= min(nu_h^{-1} 2^{-2k}, nu_3^{-1} 2^{-2l}) up to band width
      double min_bound = std::min(1.0 / (nu_h * 16.0), 1.0 / (nu_3 * 4.0));
      CHECK(1.0 / lam <= min_bound * (1.0 + 1e-12));
    }
  CHECK(found);
}

TEST_CASE("decay check with nu_3 = 0 skips the vertical branch") {
  Grid g = Grid::cubic(32);
  DyadicDecomposition dec(g);
  VectorField u = gen_band_equalized_hh(g, dec, 31, 4.0, 1, 3, 0, 2);
  HeatFlowParams params{0.2, 0.0,
                        decay_time_grid(dec.split_hh_ll(u).first, 0.2, 0.0)};
  DecayReport rep = verify_heat_decay(u, params, dec, 1.0, 4.0);
  CHECK(rep.vertical_branch_skipped);
  CHECK(!rep.rows.empty());
  for (const auto& row : rep.rows) CHECK(std::isfinite(row.ratio));
}

TEST_CASE("decay check: band-equalized data keeps the ratio spread small") {
  Grid g = Grid::cubic(32);
  DyadicDecomposition dec(g);
  VectorField u = gen_band_equalized_hh(g, dec, 37, 4.0, 1, 3, 0, 2);
  for (double q : {1.0, 2.0}) {
    HeatFlowParams params{0.2, 0.02,
                          decay_time_grid(dec.split_hh_ll(u).first, 0.2, 0.02)};
    DecayReport rep = verify_heat_decay(u, params, dec, q, 4.0);
    REQUIRE(rep.rows.size() >= 4);
    CHECK(rep.spread() <= 10.0);
    CHECK(rep.max_ratio <= 5.0 * rep.median_ratio);
  }
}

TEST_CASE("time-quadrature refinement changes band statistics by under 1%") {
  Grid g = Grid::cubic(32);
  DyadicDecomposition dec(g);
  VectorField u = gen_band_equalized_hh(g, dec, 41, 4.0, 1, 3, 0, 2);
  VectorField hh = dec.split_hh_ll(u).first;
  HeatFlowParams coarse{0.2, 0.02, decay_time_grid(hh, 0.2, 0.02, 8)};
  HeatFlowParams fine{0.2, 0.02, decay_time_grid(hh, 0.2, 0.02, 16)};
  DecayReport rc = verify_heat_decay(u, coarse, dec, 2.0, 4.0);
  DecayReport rf = verify_heat_decay(u, fine, dec, 2.0, 4.0);
  REQUIRE(rc.rows.size() == rf.rows.size());
  for (std::size_t i = 0; i < rc.rows.size(); ++i)
    CHECK(std::abs(rc.rows[i].lhs / rf.rows[i].lhs - 1.0) <= 0.01);
}

TEST_CASE("Linf-L2 check: zero data, closed-form band, corpus stability") {
  Grid g = Grid::cubic(32);
  DyadicDecomposition dec(g);

  VectorField zero(g);
  zero.divergence_free = true;
  HeatFlowParams pz{0.2, 0.0, {0.0, 1.0}};
  LinfL2Report rz = verify_linf_l2_decay(zero, pz, dec, 4.0);
  CHECK(rz.rows.empty());
  CHECK(rz.scalar_lhs == 0.0);

  std::vector<double> fitted;
  for (int i = 0; i < 5; ++i) {
    VectorField u = gen_band_equalized_hh(g, dec, 600 + i, 4.0, 1, 3, 0, 2);
    VectorField hh = dec.split_hh_ll(u).first;
    HeatFlowParams params{0.2, 0.0, decay_time_grid(hh, 0.2, 0.0)};
    LinfL2Report rep = verify_linf_l2_decay(u, params, dec, 4.0);
    CHECK(!rep.rows.empty());
    CHECK(std::isfinite(rep.ratio_sum));
    fitted.push_back(rep.scalar_fitted_C);
  }
  double lo = *std::min_element(fitted.begin(), fitted.end());
  double hi = *std::max_element(fitted.begin(), fitted.end());
  CHECK(hi / lo <= 5.0);
}
