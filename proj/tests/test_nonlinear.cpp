#include "doctest.h"

#include "ans/nonlinear.hpp"
#include "ans/reference.hpp"
#include "test_util.hpp"

using namespace ans;
using namespace ans::testutil;

namespace {

VectorField shear(const Grid& g) {
  VectorField u(g);
  u.u2 = field_of(g, [](double x1, double, double) { return std::sin(x1); });
  u.divergence_free = true;
  return u;
}

}  // namespace

TEST_CASE("convection of a shear flow by itself vanishes") {
  Grid g = Grid::cubic(16);
  VectorField u = shear(g);
  VectorField c = convect(u, u);
  CHECK(max_coeff_diff(c, VectorField(g)) < 1e-15);
}

TEST_CASE("convection of a constant field vanishes") {
  Grid g = Grid::cubic(16);
  BandWindow win{1.0, 4.0};
  VectorField u = gen_random_bandlimited(g, 3, win, win, 1.0);
  VectorField a(g);
  a.u1.mode(0, 0, 0) = 2.0;
  a.u2.mode(0, 0, 0) = -1.0;
  VectorField c = convect(u, a);
  CHECK(max_coeff_diff(c, VectorField(g)) < 1e-14);
}

TEST_CASE("convection matches the spectral convolution oracle at 8^3") {
  Grid g = Grid::cubic(8);
  BandWindow win{0.5, 2.0};
  VectorField u = gen_random_bandlimited(g, 5, win, win, 1.0);
  VectorField a = gen_random_bandlimited(g, 6, win, win, 1.0);
  VectorField fast = convect(u, a);
  VectorField slow(g);
  for (int i = 0; i < 3; ++i) {
    SpectralField acc(g);
    for (int jax = 1; jax <= 3; ++jax)
      acc += reference::convolve(u.comp(jax - 1),
                                 partial_derivative(a.comp(i), jax));
    slow.comp(i) = dealias(acc);
  }
  double scale = std::max({max_coeff(slow.u1), max_coeff(slow.u2),
                           max_coeff(slow.u3)});
  CHECK(max_coeff_diff(fast, slow) / scale < 1e-10);
}

TEST_CASE("convection is bilinear") {
  Grid g = Grid::cubic(16);
  BandWindow win{1.0, 4.0};
  VectorField u = gen_random_bandlimited(g, 7, win, win, 1.0);
  VectorField a = gen_random_bandlimited(g, 8, win, win, 1.0);
  VectorField b = gen_random_bandlimited(g, 9, win, win, 1.0);

  VectorField lhs = convect(3.0 * u, a);
  VectorField rhs = 3.0 * convect(u, a);
  double scale = max_coeff(rhs.u1) + max_coeff(rhs.u2) + max_coeff(rhs.u3);
  CHECK(max_coeff_diff(lhs, rhs) / scale < 1e-12);

  VectorField sum = convect(u, a + b);
  VectorField parts = convect(u, a) + convect(u, b);
  CHECK(max_coeff_diff(sum, parts) / scale < 1e-12);
}

TEST_CASE("divergence-free convection is skew-symmetric after dealiasing") {
  Grid g = Grid::cubic(16);
  BandWindow win{1.0, 4.0};
  VectorField u = gen_random_bandlimited(g, 11, win, win, 1.0);
  VectorField a = gen_random_bandlimited(g, 12, win, win, 1.0);
  double pairing = inner_product_l2(convect(u, a), a);
  double scale = l2_norm(convect(u, a)) * l2_norm(a);
  CHECK(std::abs(pairing) / scale <= 1e-8);
}

TEST_CASE("forcing norm vanishes when the hh part or nonlinearity vanishes") {
  Grid g = Grid::cubic(32);
  DyadicDecomposition dec(g);
  BesovParams params{4.0, 0.2, 0.0};

  SpectralField f(g);
  f.mode(0, 0, 3) = cplx(0.0, 1.0);
  f.mode(0, 0, -3) = cplx(0.0, -1.0);
  VectorField ll_only(g);
  ll_only.u1 = f;
  ll_only.divergence_free = true;
  CHECK(forcing_norm_L1T_B012(ll_only, params, dec, 2.0) == 0.0);

  // A pure shear is entirely hh but its self-convection is identically zero.
  CHECK(forcing_norm_L1T_B012(shear(g), params, dec, 2.0) < 1e-14);
}

TEST_CASE("E-functional: zero data and exact homogeneity degrees") {
  Grid g = Grid::cubic(32);
  DyadicDecomposition dec(g);
  BesovParams params{4.0, 0.3, 0.05};

  VectorField zero(g);
  zero.divergence_free = true;
  EFunctionalReport rz = e_functional(zero, params, dec, 1.0);
  CHECK(rz.besov_part == 0.0);
  CHECK(rz.forcing_part == 0.0);
  CHECK(rz.total == 0.0);

  BandWindow win{1.0, 8.0};
  VectorField u = gen_random_bandlimited(g, 13, win, win, 1.0);
  EFunctionalReport base = e_functional(u, params, dec, 1.0);
  CHECK(base.total == base.besov_part + base.forcing_part);
  for (double c : {2.0, 1.0 / 3.0}) {
    VectorField cu = u;
    cu *= c;
    EFunctionalReport scaled = e_functional(cu, params, dec, 1.0);
    CHECK(scaled.besov_part ==
          doctest::Approx(c * base.besov_part).epsilon(1e-12));
    CHECK(scaled.forcing_part ==
          doctest::Approx(c * c * base.forcing_part).epsilon(1e-12));
  }
}

TEST_CASE("quadratic forcing regime: fitted constant is stable, p in [2,4]") {
  Grid g = Grid::cubic(24);
  DyadicDecomposition dec(g);
  for (double p : {2.0, 4.0}) {
    BesovParams params{p, 0.3, 0.0};
    std::vector<double> fitted;
    for (int i = 0; i < 6; ++i) {
      BandWindow win{1.0, 6.0};
      VectorField u = gen_random_bandlimited(g, 900 + i, win, win, 1.0);
      EFunctionalReport e = e_functional(u, params, dec, inf);
      if (e.besov_part > 0.0)
        fitted.push_back(e.forcing_part * params.nu_h /
                         (e.besov_part * e.besov_part));
    }
    REQUIRE(fitted.size() >= 5);
    std::sort(fitted.begin(), fitted.end());
    CHECK(fitted.back() / fitted[fitted.size() / 2] <= 5.0);
  }
}

TEST_CASE("Bony vertical split reconstructs the localized product") {
  Grid g = Grid::cubic(32);
  DyadicDecomposition dec(g);
  BandWindow win{1.0, 8.0};
  VectorField u = gen_random_bandlimited(g, 15, win, win, 1.0);
  VectorField a = gen_random_bandlimited(g, 16, win, win, 1.0);

  // Reference: Delta^v_j of the dealiased full horizontal transport.
  VectorField full(g);
  {
    std::array<std::vector<cplx>, 2> up = {inverse_transform(u.u1),
                                           inverse_transform(u.u2)};
    for (int i = 0; i < 3; ++i) {
      aligned_vector<cplx> prod(g.size());
      for (int jax = 1; jax <= 2; ++jax) {
        auto dp = inverse_transform(partial_derivative(a.comp(i), jax));
        for (std::size_t x = 0; x < prod.size(); ++x)
          prod[x] += up[jax - 1][x].real() * dp[x].real();
      }
      full.comp(i) = dealias(forward_transform(std::span<const cplx>(prod), g));
    }
  }

  for (int j : {dec.l_min(), 0, 2}) {
    auto [lh, hl] = bony_vertical_split(u, a, j, dec);
    VectorField sum = lh;
    sum += hl;
    VectorField want;
    want.u1 = dec.delta_v(full.u1, j);
    want.u2 = dec.delta_v(full.u2, j);
    want.u3 = dec.delta_v(full.u3, j);
    double scale =
        std::max({max_coeff(want.u1), max_coeff(want.u2), max_coeff(want.u3),
                  1e-300});
    CHECK(max_coeff_diff(sum, want) / scale < 1e-8);
  }
}

TEST_CASE("Bony split: low-pass u against a high band has no remainder") {
  Grid g = Grid::cubic(32);
  DyadicDecomposition dec(g);
  BandWindow low_v{0.0, 1.0}, hi_v{6.0, 9.0}, h{1.0, 8.0};
  VectorField u = gen_random_bandlimited(g, 17, h, low_v, 1.0);
  VectorField a = gen_random_bandlimited(g, 18, h, hi_v, 1.0);
  int j = 3;
  auto [lh, hl] = bony_vertical_split(u, a, j, dec);
  double lh_norm = l2_norm(lh);
  CHECK(l2_norm(hl) <= 1e-8 * std::max(lh_norm, 1e-300) + 1e-12);
}

TEST_CASE("Bony split of zero u gives two zero pieces") {
  Grid g = Grid::cubic(16);
  DyadicDecomposition dec(g);
  BandWindow win{1.0, 4.0};
  VectorField a = gen_random_bandlimited(g, 19, win, win, 1.0);
  VectorField zero(g);
  auto [lh, hl] = bony_vertical_split(zero, a, 1, dec);
  CHECK(l2_norm(lh) == 0.0);
  CHECK(l2_norm(hl) == 0.0);
}

TEST_CASE("trilinear F_j: zero slots and the frozen-field oracle") {
  Grid g = Grid::cubic(8);
  DyadicDecomposition dec(g);
  BandWindow win{0.5, 2.0};
  VectorField u = gen_random_bandlimited(g, 20, win, win, 1.0);
  VectorField a = gen_random_bandlimited(g, 21, win, win, 1.0);
  VectorField zero(g);

  CHECK(trilinear_Fj_frozen(u, zero, 0, 1.0, dec) == 0.0);
  CHECK(trilinear_Fj_frozen(zero, a, 0, 1.0, dec) == 0.0);

  const double T = 2.5;
  int j = 0;
  double got = trilinear_Fj_frozen(u, a, j, T, dec);
  VectorField conv(g);
  for (int i = 0; i < 3; ++i) {
    SpectralField acc(g);
    for (int jax = 1; jax <= 3; ++jax)
      acc += reference::convolve(u.comp(jax - 1),
                                 partial_derivative(a.comp(i), jax));
    conv.comp(i) = dealias(acc);
  }
  double want = 0.0;
  for (int c = 0; c < 3; ++c) {
    auto dj = reference::dft_inverse(dec.delta_v(conv.comp(c), j));
    auto aj = reference::dft_inverse(dec.delta_v(a.comp(c), j));
    want += reference::inner_product_quadrature(dj, aj, g);
  }
  want = T * std::abs(want);
  CHECK(std::abs(got - want) / std::max(want, got) < 1e-8);

  // A frozen sequence integrates to the same value.
  std::vector<VectorField> us{u, u, u}, as{a, a, a};
  std::vector<double> ts{0.0, 1.25, 2.5};
  CHECK(trilinear_Fj(us, ts, as, ts, j, dec) ==
        doctest::Approx(got).epsilon(1e-12));
}

TEST_CASE("trilinear G_j mirrors F_j and rejects misaligned grids") {
  Grid g = Grid::cubic(8);
  DyadicDecomposition dec(g);
  BandWindow win{0.5, 2.0};
  VectorField a = gen_random_bandlimited(g, 22, win, win, 1.0);
  VectorField b = gen_random_bandlimited(g, 23, win, win, 1.0);
  VectorField uf = gen_random_bandlimited(g, 24, win, win, 1.0);
  VectorField zero(g);

  CHECK(trilinear_Gj_frozen(zero, b, uf, 0, 1.0, dec) == 0.0);
  CHECK(trilinear_Gj_frozen(a, zero, uf, 0, 1.0, dec) == 0.0);
  double frozen = trilinear_Gj_frozen(a, b, uf, 0, 2.0, dec);
  std::vector<VectorField> as{a, a}, bs{b, b}, ufs{uf, uf};
  std::vector<double> ts{0.0, 2.0}, bad{0.0, 1.0};
  CHECK(trilinear_Gj(as, ts, bs, ts, ufs, ts, 0, dec) ==
        doctest::Approx(frozen).epsilon(1e-12));
  CHECK_THROWS_AS(trilinear_Gj(as, ts, bs, bad, ufs, ts, 0, dec),
                  std::invalid_argument);
}

TEST_CASE("trilinear aggregate bound: fitted constant is stable under rescaling") {
  Grid g = Grid::cubic(32);
  DyadicDecomposition dec(g);
  double nu_h = 0.4, p = 4.0, T = 0.5;
  double b = 0.44 * (g.n1 / 2);
  BandWindow win{b / 1.8, b};
  VectorField a = gen_random_bandlimited(g, 25, win, win, 1.0);
  VectorField u = gen_random_bandlimited(g, 26, win, win, 1.0);

  auto fitted_C = [&](const VectorField& av, const VectorField& uv,
                      const Grid& grid, double horizon) {
    DyadicDecomposition d(grid);
    // Sum_j 2^j F_j over the resolvable vertical bands (frozen fields).
    double lhs = 0.0;
    for (int j = d.l_min(); j <= d.l_max(); ++j)
      lhs += std::exp2(j) * trilinear_Fj_frozen(uv, av, j, horizon, d);
    // ||a||_{B^{0,1/2}(T)} for a frozen field.
    auto decp = std::make_shared<DyadicDecomposition>(grid);
    NormAccumulator acc(decp, {2.0, nu_h, 0.0});
    acc.update(0.0, av, true);
    acc.update(horizon, av, true);
    double a_norm = acc.b012_time_norm();
    // ||u||_{~L^{2p/(p-1)}_T(~L^{2p}_h(B^{1/2}_v))} for a frozen field.
    double qt = 2.0 * p / (p - 1.0);
    double u_norm = 0.0;
    for (int j = d.l_min(); j <= d.l_max(); ++j) {
      double band = 0.0;
      for (int c = 0; c < 3; ++c) {
        double m = mixed_norm(d.delta_v(uv.comp(c), j), 2.0 * p, 2.0);
        band += m * m;
      }
      u_norm += std::exp2(0.5 * j) * std::pow(horizon, 1.0 / qt) *
                std::sqrt(band);
    }
    double rhs = std::pow(nu_h, -0.5 - 0.5 / p) * a_norm * a_norm * u_norm;
    return lhs / rhs;
  };

  double c1 = fitted_C(a, u, g, T);

  Grid half(g.n1, g.n2, g.n3, g.L1 / 2, g.L2 / 2, g.L3 / 2);
  auto rescale = [&](const VectorField& v) {
    VectorField out(half);
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < v.comp(c).coeffs.size(); ++i)
        out.comp(c).coeffs[i] = 2.0 * v.comp(c).coeffs[i];
    out.divergence_free = v.divergence_free;
    return out;
  };
  double c2 = fitted_C(rescale(a), rescale(u), half, T / 4.0);
  CHECK(c2 / c1 <= 5.0);
  CHECK(c1 / c2 <= 5.0);
}
