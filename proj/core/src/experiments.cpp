#include "ans/experiments.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "ans/mixed_norm.hpp"
#include "ans/operators.hpp"

namespace ans {
namespace {

int snapped_carrier(double epsilon, const Grid& g) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  int m = static_cast<int>(std::llround((1.0 / epsilon) / g.dk1()));
  return std::max(m, 1);
}

double ring_hi(double scale) { return PartitionFunction::support_hi * scale; }

}  // namespace

namespace {

/// Largest lattice frequency strictly inside an open support bound.
double last_occupied(double top, double dk) {
  return std::floor((top - 1e-12 * std::max(top, 1.0)) / dk) * dk;
}

}  // namespace

void OscillatoryDataSpec::validate(const Grid& g) const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(q_exponent >= 2.0))
    throw std::invalid_argument("q exponent must be >= 2");
  int mK = snapped_carrier(epsilon, g);
  double K = mK * g.dk1();
  double max_xi1 = (g.n1 / 3) * g.dk1();  // dealiased bound along x1
  if (last_occupied(K + ring_hi(ring_scale_h), g.dk1()) > max_xi1)
    throw std::invalid_argument(
        "1/epsilon is not resolvable on this grid (carrier plus profile ring "
        "exceeds the dealiased band)");
  if (g.n3 == 1 ||
      last_occupied(ring_hi(ring_scale_v), g.dk3()) > (g.n3 / 3) * g.dk3())
    throw std::invalid_argument("vertical profile ring is not resolvable");
}

OscillatoryData gen_oscillatory(const OscillatoryDataSpec& spec,
                                const Grid& g) {
  spec.validate(g);
  PartitionFunction pf;
  const int mK = snapped_carrier(spec.epsilon, g);
  const double K = mK * g.dk1();
  const double eps = 1.0 / K;
  const double amp =
      spec.amplitude * std::pow(eps, -1.0 + 2.0 / spec.q_exponent);

  OscillatoryData out;
  out.u0 = VectorField(g);
  out.epsilon_snapped = eps;
  out.carrier_mode = mK;

  // Profile spectrum psi(xi) = pf(|xi_h|/sh) pf(|xi_3|/sv), evaluated at the
  // carrier-shifted horizontal frequency. sin is the real modulation
  // (psi(xi - K e1) - psi(xi + K e1)) / (2i), so the assembled coefficients
  // are real and conjugate-symmetric.
  auto psi = [&](double x1, double x2, double x3) {
    return pf(std::hypot(x1, x2) / spec.ring_scale_h) *
           pf(std::abs(x3) / spec.ring_scale_v);
  };
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1) {
    double x1 = g.xi1(i1);
    for (int i2 = 0; i2 < g.n2; ++i2) {
      double x2 = g.xi2(i2);
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        double x3 = g.xi3(i3);
        double bracket = psi(x1 - K, x2, x3) - psi(x1 + K, x2, x3);
        if (bracket == 0.0) continue;
        out.u0.u2.coeffs[idx] = -amp * 0.5 * x3 * bracket;
        out.u0.u3.coeffs[idx] = amp * 0.5 * x2 * bracket;
      }
    }
  }
  out.u0.divergence_free = true;
  return out;
}

ModulatedProfile gen_modulated_profile_2d(double epsilon, const Grid& g,
                                          double ring_scale) {
  if (g.n3 != 1)
    throw std::invalid_argument("modulated profile requires a 2-D grid");
  PartitionFunction pf;
  const int mK = snapped_carrier(epsilon, g);
  const double K = mK * g.dk1();
  double max_xi1 = (g.n1 / 3) * g.dk1();
  if (last_occupied(K + ring_hi(ring_scale), g.dk1()) > max_xi1)
    throw std::invalid_argument("1/epsilon is not resolvable on this grid");

  ModulatedProfile out{SpectralField(g), 1.0 / K, mK};
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1) {
    double x1 = g.xi1(i1);
    for (int i2 = 0; i2 < g.n2; ++i2, ++idx) {
      double x2 = g.xi2(i2);
      out.field.coeffs[idx] = pf(std::hypot(x1 - K, x2) / ring_scale);
    }
  }
  return out;
}

namespace {

/// Deterministic standard normals: Box-Muller on explicit mt19937_64 draws.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}
  double next() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(two_pi * u2);
    have_ = true;
    return r * std::cos(two_pi * u2);
  }
  cplx next_complex() {
    double re = next();
    double im = next();
    return {re, im};
  }

 private:
  double uniform() {
    // in (0, 1]: avoids log(0)
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
  }
  std::mt19937_64 rng_;
  bool have_ = false;
  double spare_ = 0.0;
};

bool in_half_space(int m1, int m2, int m3) {
  if (m1 != 0) return m1 > 0;
  if (m2 != 0) return m2 > 0;
  return m3 > 0;
}

}  // namespace

SpectralField gen_random_scalar(const Grid& g, std::uint64_t seed,
                                const BandWindow& h, const BandWindow& v,
                                double amplitude) {
  GaussianStream gauss(seed);
  SpectralField f(g);
  for (int i1 = 0; i1 < g.n1; ++i1) {
    int m1 = Grid::mode_of(i1, g.n1);
    for (int i2 = 0; i2 < g.n2; ++i2) {
      int m2 = Grid::mode_of(i2, g.n2);
      double xh = g.xi_h(i1, i2);
      for (int i3 = 0; i3 < g.n3; ++i3) {
        int m3 = g.n3 == 1 ? 0 : Grid::mode_of(i3, g.n3);
        if (!in_half_space(m1, m2, m3)) continue;
        if (!h.contains(xh) || !v.contains(std::abs(g.xi3(i3)))) continue;
        cplx z = amplitude * gauss.next_complex();
        f.mode(m1, m2, m3) = z;
        f.mode(-m1, -m2, -m3) = std::conj(z);
      }
    }
  }
  return f;
}

VectorField gen_random_bandlimited(const Grid& g, std::uint64_t seed,
                                   const BandWindow& h, const BandWindow& v,
                                   double amplitude) {
  VectorField u(g);
  u.u1 = gen_random_scalar(g, seed * 6364136223846793005ull + 1, h, v, 1.0);
  u.u2 = gen_random_scalar(g, seed * 6364136223846793005ull + 2, h, v, 1.0);
  u.u3 = gen_random_scalar(g, seed * 6364136223846793005ull + 3, h, v, 1.0);
  leray_project_inplace(u);
  dealias_inplace(u);
  double n = l2_norm(u);
  if (n > 0.0) u *= amplitude / n;
  return u;
}

SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_loglog needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  SlopeFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

EpsilonSweepResult run_epsilon_sweep(const EpsilonSweepConfig& cfg) {
  if (cfg.epsilons.size() < 4)
    throw std::invalid_argument("epsilon sweep needs at least 4 dyadic values");
  EpsilonSweepResult res;
  DyadicDecomposition dec2(cfg.grid2d);
  DyadicDecomposition dec3(cfg.grid3d);
  BesovParams params{cfg.p, cfg.nu_h, cfg.nu_3};
  BesovParams params4{4.0, cfg.nu_h, cfg.nu_3};

  for (double eps : cfg.epsilons) {
    EpsilonSweepRow row;
    row.eps_nominal = eps;

    ModulatedProfile prof = gen_modulated_profile_2d(eps, cfg.grid2d);
    row.eps_2d = prof.epsilon_snapped;
    ScalingNorms lo =
        scaling_norms_2d(prof.field, dec2, cfg.sigma_lo, cfg.alpha_lo, cfg.q);
    ScalingNorms hi =
        scaling_norms_2d(prof.field, dec2, cfg.sigma_hi, cfg.alpha_hi, cfg.q);
    row.tilde_B_lo = lo.tilde_B;
    row.dot_B1_lo = lo.dot_B1;
    row.dot_Binf_lo = lo.dot_Binf;
    row.tilde_B_hi = hi.tilde_B;
    row.dot_B1_hi = hi.dot_B1;
    row.dot_Binf_hi = hi.dot_Binf;

    OscillatoryDataSpec spec;
    spec.epsilon = eps;
    spec.q_exponent = cfg.q_data;
    spec.ring_scale_h = cfg.ring_scale_h;
    spec.ring_scale_v = cfg.ring_scale_v;
    spec.amplitude = cfg.amplitude;
    OscillatoryData data = gen_oscillatory(spec, cfg.grid3d);
    row.eps_3d = data.epsilon_snapped;
    row.besov_b_half_p4 = besov_static(data.u0, dec3, params4);
    EFunctionalReport e = e_functional(data.u0, params, dec3, inf);
    row.e_besov = e.besov_part;
    row.e_forcing = e.forcing_part;
    row.e_total = e.total;
    res.rows.push_back(row);
  }

  std::vector<double> eps2, eps3, v;
  for (const auto& r : res.rows) eps2.push_back(r.eps_2d);
  for (const auto& r : res.rows) eps3.push_back(r.eps_3d);
  auto slope2 = [&](auto get) {
    v.clear();
    for (const auto& r : res.rows) v.push_back(get(r));
    return fit_loglog(eps2, v).slope;
  };
  auto slope3 = [&](auto get) {
    v.clear();
    for (const auto& r : res.rows) v.push_back(get(r));
    return fit_loglog(eps3, v).slope;
  };
  res.slope_dot_B1_lo = slope2([](const auto& r) { return r.dot_B1_lo; });
  res.slope_dot_B1_hi = slope2([](const auto& r) { return r.dot_B1_hi; });
  res.slope_dot_Binf_lo = slope2([](const auto& r) { return r.dot_Binf_lo; });
  res.slope_dot_Binf_hi = slope2([](const auto& r) { return r.dot_Binf_hi; });
  res.slope_e_total = slope3([](const auto& r) { return r.e_total; });
  res.slope_e_forcing = slope3([](const auto& r) { return r.e_forcing; });

  double bmin = inf, bmax = 0.0;
  for (const auto& r : res.rows) {
    bmin = std::min(bmin, r.besov_b_half_p4);
    bmax = std::max(bmax, r.besov_b_half_p4);
  }
  res.besov_b_half_variation = bmin > 0.0 ? bmax / bmin - 1.0 : 0.0;
  return res;
}

std::vector<SmallnessRow> run_smallness_study(const SmallnessConfig& cfg) {
  std::vector<SmallnessRow> rows;
  DyadicDecomposition dec(cfg.grid);
  BesovParams params{cfg.p, cfg.nu_h, cfg.nu_3};

  OscillatoryDataSpec spec;
  spec.epsilon = cfg.epsilon;
  spec.q_exponent = cfg.q_data;
  OscillatoryData osc = gen_oscillatory(spec, cfg.grid);
  VectorField base = osc.u0;
  if (cfg.ll_fraction > 0.0) {
    BandWindow h{0.0, 1.4}, v{2.5, 6.0};
    VectorField ll = gen_random_bandlimited(
        cfg.grid, cfg.seed, h, v, cfg.ll_fraction * l2_norm(osc.u0));
    base += ll;
  }

  SolverConfig scfg;
  scfg.grid = cfg.grid;
  scfg.nu_h = cfg.nu_h;
  scfg.nu_3 = cfg.nu_3;
  scfg.dt = cfg.dt;
  scfg.T = cfg.T;
  scfg.n_cutoff = cfg.n_cutoff;
  scfg.p = cfg.p;
  scfg.record_every = cfg.record_every;

  for (double amp : cfg.amplitudes) {
    SmallnessRow row;
    row.amplitude = amp;
    VectorField u0 = base;
    u0 *= amp;
    if (amp == 0.0) {
      row.ratio = 0.0;
      rows.push_back(row);
      continue;
    }
    EFunctionalReport e = e_functional(u0, params, dec, cfg.T);
    row.e_total = e.total;
    SolveResult sol = solve_w(u0, scfg);
    row.blew_up = sol.record.blew_up;
    row.w_b012T = sol.accumulator.b012_time_norm();
    row.ratio = e.total > 0.0 ? row.w_b012T / e.total : 0.0;
    rows.push_back(row);
  }
  double baseline = 0.0;
  for (const auto& r : rows)
    if (r.ratio > 0.0) {
      baseline = r.ratio;
      break;
    }
  for (auto& r : rows)
    r.flagged = r.blew_up || (baseline > 0.0 && r.ratio > 10.0 * baseline);
  return rows;
}

}  // namespace ans
