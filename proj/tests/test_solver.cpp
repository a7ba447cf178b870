#include "doctest.h"

#include "ans/reference.hpp"
#include "ans/solver.hpp"
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

SolverConfig small_config(const Grid& g) {
  SolverConfig cfg;
  cfg.grid = g;
  cfg.nu_h = 0.1;
  cfg.nu_3 = 0.01;
  cfg.dt = 1e-3;
  cfg.T = 0.1;
  cfg.record_every = 10;
  return cfg;
}

}  // namespace

TEST_CASE("Friedrichs projector masks follow the indicator definitions") {
  Grid g = Grid::cubic(32);
  double n = 8.0;
  FriedrichsMasks m = friedrichs_projectors(g, n);

  CHECK(!m.pn(10.0 * 10.0));                 // |xi| > n annihilated
  CHECK(!m.p1n(10.0 * 10.0, 2.0));
  CHECK(m.p2n(0.0));                          // |xi3| < 1/n slab survives P_2n
  CHECK(m.pn((n / 2) * (n / 2)));             // mode (n/2, 0, 0)
  CHECK(!m.p1n((n / 2) * (n / 2), 0.0));      // xi3 = 0 < 1/n
  CHECK(m.p2n(0.0));
  CHECK(m.p1n(4.0, 1.0));                     // |xi| = 2 <= n, |xi3| = 1 >= 1/n

  SpectralField f(g);
  f.mode(9, 0, 0) = 1.0;
  f.mode(-9, 0, 0) = 1.0;
  f.mode(1, 0, 1) = cplx(0.0, 2.0);
  f.mode(-1, 0, -1) = cplx(0.0, -2.0);
  VectorField v(g);
  v.u2 = f;
  VectorField pv = apply_pn(v, m);
  CHECK(pv.u2.mode(9, 0, 0) == cplx(0.0));      // |xi| = 9 > 8
  CHECK(pv.u2.mode(1, 0, 1) == f.mode(1, 0, 1));
  VectorField pv2 = apply_pn(pv, m);             // idempotent
  CHECK(max_coeff_diff(pv, pv2) == 0.0);

  CHECK_THROWS_AS(friedrichs_projectors(g, 1000.0), std::invalid_argument);
}

TEST_CASE("rhs_w: zero inputs and pure-shear u_F give a zero right-hand side") {
  Grid g = Grid::cubic(16);
  SolverConfig cfg = small_config(g);
  FriedrichsMasks m = friedrichs_projectors(g, 5.0);
  VectorField zero(g);
  zero.divergence_free = true;
  CHECK(l2_norm(rhs_w(zero, zero, m, cfg)) == 0.0);
  CHECK(l2_norm(rhs_w(zero, shear(g), m, cfg)) < 1e-15);
}

TEST_CASE("rhs_w matches a term-by-term convolution oracle at 8^3") {
  Grid g = Grid::cubic(8);
  SolverConfig cfg = small_config(g);
  FriedrichsMasks m = friedrichs_projectors(g, 2.0);
  BandWindow win{0.5, 2.0};
  VectorField w = apply_pn(gen_random_bandlimited(g, 31, win, win, 1.0), m);
  VectorField uf = gen_random_bandlimited(g, 32, win, win, 1.0);
  VectorField got = rhs_w(w, uf, m, cfg);

  // Oracle: every quadratic form via lattice convolutions, then the masks and
  // multipliers of the regularized system applied mode by mode.
  VectorField v = w;
  v += uf;
  SpectralField S[3][3], Q[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      S[i][j] = reference::convolve(v.comp(i), v.comp(j));
      Q[i][j] = reference::convolve(uf.comp(i), uf.comp(j));
    }
  VectorField want(g);
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      for (int i3 = 0; i3 < g.n3; ++i3) {
        if (!keeps_mode_dealiased(g, i1, i2, i3)) continue;
        double x[3] = {g.xi1(i1), g.xi2(i2), g.xi3(i3)};
        double q = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        if (!m.pn(q)) continue;
        bool slab = m.p2n(std::abs(x[2]));
        cplx sS[3], sQ[3];
        for (int i = 0; i < 3; ++i) {
          sS[i] = sQ[i] = 0.0;
          for (int j = 0; j < 3; ++j) {
            const SpectralField& Sij = i <= j ? S[i][j] : S[j][i];
            const SpectralField& Qij = i <= j ? Q[i][j] : Q[j][i];
            sS[i] += x[j] * Sij.at(i1, i2, i3);
            sQ[i] += x[j] * Qij.at(i1, i2, i3);
          }
        }
        cplx qqS = x[0] * sS[0] + x[1] * sS[1] + x[2] * sS[2];
        cplx qqQ = x[0] * sQ[0] + x[1] * sQ[1] + x[2] * sQ[2];
        for (int i = 0; i < 3; ++i) {
          cplx val = -(sS[i] - sQ[i]) - (slab ? 0.0 : 1.0) * sQ[i];
          if (q > 0.0) val += x[i] * (qqS - (slab ? 1.0 : 0.0) * qqQ) / q;
          want.comp(i).at(i1, i2, i3) = cplx(0.0, 1.0) * val;
        }
      }
  double scale = std::max({max_coeff(want.u1), max_coeff(want.u2),
                           max_coeff(want.u3)});
  CHECK(max_coeff_diff(got, want) / scale < 1e-9);
  CHECK(divergence_residual(got) < 1e-10);
}

TEST_CASE("rhs_w rejects states outside the Friedrichs ball") {
  Grid g = Grid::cubic(16);
  SolverConfig cfg = small_config(g);
  FriedrichsMasks m = friedrichs_projectors(g, 2.0);
  SpectralField f(g);
  f.mode(4, 0, 0) = 1.0;
  f.mode(-4, 0, 0) = 1.0;
  VectorField w(g);
  w.u2 = f;
  CHECK_THROWS_AS(rhs_w(w, VectorField(g), m, cfg), std::invalid_argument);
}

TEST_CASE("integrating-factor step with zero nonlinearity is exact decay") {
  Grid g = Grid::cubic(16);
  double nu_h = 0.3, nu_3 = 0.07, dt = 0.01;
  IfRk4Stepper stepper(g, nu_h, nu_3, dt);
  BandWindow win{1.0, 4.0};
  VectorField u = gen_random_bandlimited(g, 41, win, win, 1.0);
  VectorField u0 = u;
  IfRk4Stepper::Nonlinearity zero = [](const VectorField&, int,
                                       VectorField& out) { out.set_zero(); };
  const int nsteps = 50;
  for (int i = 0; i < nsteps; ++i) stepper.step(u, zero);
  VectorField want = semigroup(u0, nsteps * dt, nu_h, nu_3);
  CHECK(max_coeff_diff(u, want) / max_coeff(want.u2) < 1e-12);
}

TEST_CASE("nonlinear convergence is fourth order in dt") {
  Grid g = Grid::cubic(16);
  SolverConfig cfg;
  cfg.grid = g;
  cfg.nu_h = 0.05;
  cfg.nu_3 = 0.01;
  cfg.T = 0.32;
  BandWindow win{1.0, 4.0};
  VectorField u0 = gen_random_bandlimited(g, 43, win, win, 5.0);

  auto final_state = [&](double dt) {
    SolverConfig c = cfg;
    c.dt = dt;
    c.record_every = 1 << 20;
    return solve_u(u0, c).final_state;
  };
  VectorField ref = final_state(5e-4);
  auto err = [&](const VectorField& v) {
    VectorField d = v;
    d -= ref;
    return l2_norm(d);
  };
  double e1 = err(final_state(1.6e-2));
  double e2 = err(final_state(8e-3));
  double ratio = e1 / e2;
  CHECK(ratio > 10.0);
  CHECK(ratio < 26.0);
}

TEST_CASE("solve_u reproduces the exact shear decay") {
  Grid g = Grid::cubic(32);
  SolverConfig cfg;
  cfg.grid = g;
  cfg.nu_h = 0.1;
  cfg.nu_3 = 0.01;
  cfg.dt = 1e-3;
  cfg.T = 0.5;
  cfg.record_every = 100;
  cfg.keep_snapshots = true;
  SolveResult sol = solve_u(shear(g), cfg);
  REQUIRE(!sol.record.blew_up);
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.snapshots.size(); ++i) {
    double t = sol.snapshot_times[i];
    VectorField want = shear(g);
    want *= std::exp(-cfg.nu_h * t);
    VectorField diff = sol.snapshots[i];
    diff -= want;
    worst = std::max(worst, l2_norm(diff) / l2_norm(want));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("solve_u satisfies the discrete energy identity on small data") {
  Grid g = Grid::cubic(32);
  SolverConfig cfg;
  cfg.grid = g;
  cfg.nu_h = 0.1;
  cfg.nu_3 = 0.01;
  cfg.dt = 1e-3;
  cfg.T = 0.5;
  cfg.record_every = 100;
  BandWindow win{1.0, 8.0};
  VectorField u0 = gen_random_bandlimited(g, 47, win, win, 1e-2);
  SolveResult sol = solve_u(u0, cfg);
  REQUIRE(!sol.record.blew_up);
  CHECK(sol.record.energy_identity_residual() <= 1e-6);
  CHECK(sol.record.max_div_residual <= 1e-8);
}

TEST_CASE("solve_u of zero data stays zero") {
  Grid g = Grid::cubic(16);
  SolverConfig cfg = small_config(g);
  VectorField zero(g);
  zero.divergence_free = true;
  SolveResult sol = solve_u(zero, cfg);
  CHECK(l2_norm(sol.final_state) == 0.0);
  CHECK(sol.accumulator.b012_time_norm() == 0.0);
  CHECK(sol.accumulator.besov_time_norm() == 0.0);
}

TEST_CASE("solve_u rejects data with divergence") {
  Grid g = Grid::cubic(16);
  SolverConfig cfg = small_config(g);
  VectorField bad(g);
  bad.u1 = field_of(g, [](double x1, double, double) { return std::sin(x1); });
  CHECK_THROWS_AS(solve_u(bad, cfg), std::invalid_argument);
}

TEST_CASE("accumulated time-norm statistics are monotone in time") {
  Grid g = Grid::cubic(16);
  SolverConfig cfg = small_config(g);
  cfg.T = 0.05;
  cfg.record_every = 5;
  cfg.p = 4.0;
  BandWindow win{1.0, 4.0};
  VectorField u0 = gen_random_bandlimited(g, 53, win, win, 0.1);
  SolveResult sol = solve_u(u0, cfg);
  for (std::size_t i = 1; i < sol.record.b012_accum.size(); ++i) {
    CHECK(sol.record.b012_accum[i] >= sol.record.b012_accum[i - 1] - 1e-12);
    CHECK(sol.record.besov_accum[i] >= sol.record.besov_accum[i - 1] - 1e-12);
  }
  CHECK(sol.accumulator.elapsed() == doctest::Approx(cfg.T));
}

TEST_CASE("solve_w: zero data stays zero, shear forcing stays inert") {
  Grid g = Grid::cubic(16);
  SolverConfig cfg = small_config(g);
  cfg.n_cutoff = 5.0;
  VectorField zero(g);
  zero.divergence_free = true;
  SolveResult sz = solve_w(zero, cfg);
  CHECK(l2_norm(sz.final_state) == 0.0);
  CHECK(sz.accumulator.b012_time_norm() == 0.0);

  // Shear data is all-hh with vanishing self-interaction: w stays zero.
  SolveResult ss = solve_w(shear(g), cfg);
  CHECK(l2_norm(ss.final_state) < 1e-13);
}

TEST_CASE("solve_w keeps w inside the Friedrichs ball and divergence-free") {
  Grid g = Grid::cubic(16);
  SolverConfig cfg = small_config(g);
  cfg.n_cutoff = 4.0;
  cfg.T = 0.05;
  BandWindow win{1.0, 4.0};
  VectorField u0 = gen_random_bandlimited(g, 59, win, win, 0.5);
  SolveResult sol = solve_w(u0, cfg);
  REQUIRE(!sol.record.blew_up);
  FriedrichsMasks m = friedrichs_projectors(g, cfg.n_cutoff);
  CHECK(support_residual_outside_ball(sol.final_state, m) == 0.0);
  CHECK(sol.record.max_div_residual <= 1e-8);
}

TEST_CASE("halving dt moves the accumulated time norms by well under 0.1%") {
  Grid g = Grid::cubic(16);
  SolverConfig cfg;
  cfg.grid = g;
  cfg.nu_h = 0.1;
  cfg.nu_3 = 0.01;
  cfg.T = 0.2;
  cfg.p = 4.0;
  cfg.record_every = 1 << 20;
  BandWindow win{1.0, 4.0};
  VectorField u0 = gen_random_bandlimited(g, 61, win, win, 0.05);
  cfg.dt = 2e-3;
  SolveResult coarse = solve_u(u0, cfg);
  cfg.dt = 1e-3;
  SolveResult fine = solve_u(u0, cfg);
  double rel_b = std::abs(coarse.accumulator.b012_time_norm() /
                              fine.accumulator.b012_time_norm() -
                          1.0);
  double rel_p = std::abs(coarse.accumulator.besov_time_norm() /
                              fine.accumulator.besov_time_norm() -
                          1.0);
  CHECK(rel_b <= 1e-3);
  CHECK(rel_p <= 1e-3);
}

TEST_CASE("blow-up detection flags runaway states") {
  Grid g = Grid::cubic(16);
  SolverConfig cfg = small_config(g);
  cfg.blowup_threshold = 1e-6;  // absurdly low: triggers immediately
  BandWindow win{1.0, 4.0};
  VectorField u0 = gen_random_bandlimited(g, 67, win, win, 1.0);
  SolveResult sol = solve_u(u0, cfg);
  CHECK(sol.record.blew_up);
}

TEST_CASE("continuous dependence: identical data gives ratio one, bitwise") {
  Grid g = Grid::cubic(16);
  SolverConfig cfg = small_config(g);
  cfg.T = 0.02;
  BandWindow win{1.0, 4.0};
  VectorField u0 = gen_random_bandlimited(g, 71, win, win, 0.1);
  ContinuousDependenceReport rep = continuous_dependence_run(u0, u0, cfg);
  CHECK(rep.delta0_norm == 0.0);
  for (double r : rep.ratio) CHECK(r == 1.0);
}

TEST_CASE("continuous dependence refuses nu_3 = 0") {
  Grid g = Grid::cubic(16);
  SolverConfig cfg = small_config(g);
  cfg.nu_3 = 0.0;
  BandWindow win{1.0, 4.0};
  VectorField u0 = gen_random_bandlimited(g, 73, win, win, 0.1);
  CHECK_THROWS_WITH_AS(continuous_dependence_run(u0, u0, cfg),
                       doctest::Contains("nu_3 > 0"), std::invalid_argument);
}

TEST_CASE("continuous dependence: linear-regime ratio is amplitude-stable") {
  Grid g = Grid::cubic(16);
  SolverConfig cfg = small_config(g);
  cfg.T = 0.1;
  cfg.record_every = 20;
  BandWindow win{1.0, 4.0};
  VectorField u0 = gen_random_bandlimited(g, 79, win, win, 0.2);
  VectorField dir = gen_random_bandlimited(g, 83, win, win, 1.0);

  auto perturbed = [&](double s) {
    VectorField v = dir;
    v *= s * l2_norm(u0) / l2_norm(dir);
    v += u0;
    return v;
  };
  ContinuousDependenceReport r1 =
      continuous_dependence_run(u0, perturbed(1e-4), cfg);
  ContinuousDependenceReport r2 =
      continuous_dependence_run(u0, perturbed(5e-5), cfg);
  CHECK(std::isfinite(r1.sup_ratio));
  CHECK(std::abs(r1.sup_ratio / r2.sup_ratio - 1.0) <= 0.1);
  CHECK(r1.exponent_ingredient > 0.0);
}
