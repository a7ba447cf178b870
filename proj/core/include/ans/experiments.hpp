#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ans/nonlinear.hpp"
#include "ans/solver.hpp"

namespace ans {

/// Oscillatory family u_0^{eps,q} = eps^{-1+2/q} sin(x1/eps)
/// (0, -d3(phi0 phi1), d2(phi0 phi1)) with ring-supported profile spectra.
/// 1/eps is snapped to the nearest nonzero lattice wavenumber along x1.
struct OscillatoryDataSpec {
  double epsilon = 0.125;
  double q_exponent = 4.0;
  double ring_scale_h = 1.0;  // horizontal profile ring (3/4, 8/3) * scale
  double ring_scale_v = 1.0;  // vertical profile ring
  double amplitude = 1.0;     // overall multiplier on top of the eps power

  void validate(const Grid& g) const;
};

struct OscillatoryData {
  VectorField u0;
  double epsilon_snapped = 0.0;
  int carrier_mode = 0;  // integer mode index of 1/eps along x1
};

OscillatoryData gen_oscillatory(const OscillatoryDataSpec& spec, const Grid& g);

/// 2-D modulated profile phi_eps = e^{i x1/eps} phi(x_h) with ring-supported
/// phi-hat; the field is complex (no conjugate symmetry). Requires n3 == 1.
struct ModulatedProfile {
  SpectralField field;
  double epsilon_snapped = 0.0;
  int carrier_mode = 0;
};

ModulatedProfile gen_modulated_profile_2d(double epsilon, const Grid& g,
                                          double ring_scale = 1.0);

/// Closed frequency-magnitude window.
struct BandWindow {
  double lo = 0.0, hi = 0.0;
  bool contains(double xi) const { return xi >= lo && xi <= hi; }
};

/// Seed-deterministic random fields with conjugate symmetry supported where
/// |xi_h| lies in `h` and |xi_3| in `v`; the vector variant is
/// Leray-projected and rescaled to the requested L^2 amplitude.
SpectralField gen_random_scalar(const Grid& g, std::uint64_t seed,
                                const BandWindow& h, const BandWindow& v,
                                double amplitude);
VectorField gen_random_bandlimited(const Grid& g, std::uint64_t seed,
                                   const BandWindow& h, const BandWindow& v,
                                   double amplitude);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares fit of log(y) against log(x).
SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y);

struct EpsilonSweepConfig {
  Grid grid3d{32, 32, 32};
  Grid grid2d = Grid::horizontal(256, 256);
  std::vector<double> epsilons{0.125, 0.0625, 0.03125};
  double q = 4.0;                  // L^q of the profile scaling norms
  double sigma_lo = 0.5, sigma_hi = 1.0;
  double alpha_lo = 0.5, alpha_hi = 1.0;
  double p = 8.0;                  // E-functional exponent
  double q_data = 4.0;             // data family exponent
  double amplitude = 0.25;         // overall data amplitude
  double nu_h = 1.0, nu_3 = 0.0;
  double ring_scale_h = 1.0, ring_scale_v = 1.0;
};

struct EpsilonSweepRow {
  double eps_nominal = 0.0, eps_2d = 0.0, eps_3d = 0.0;
  double tilde_B_lo = 0.0, dot_B1_lo = 0.0, dot_Binf_lo = 0.0;
  double tilde_B_hi = 0.0, dot_B1_hi = 0.0, dot_Binf_hi = 0.0;
  double besov_b_half_p4 = 0.0;  // ||u0^eps||_{B^{-1/2,1/2}_4}
  double e_besov = 0.0, e_forcing = 0.0, e_total = 0.0;
};

struct EpsilonSweepResult {
  std::vector<EpsilonSweepRow> rows;
  double slope_dot_B1_lo = 0.0, slope_dot_B1_hi = 0.0;
  double slope_dot_Binf_lo = 0.0, slope_dot_Binf_hi = 0.0;
  double slope_e_total = 0.0, slope_e_forcing = 0.0;
  double besov_b_half_variation = 0.0;  // max/min - 1 across the sweep
};

EpsilonSweepResult run_epsilon_sweep(const EpsilonSweepConfig& cfg);

struct SmallnessConfig {
  Grid grid{32, 32, 32};
  double nu_h = 0.5, nu_3 = 0.0;
  double p = 8.0;
  double epsilon = 0.125;
  double q_data = 4.0;
  /// Relative weight of a random low-horizontal component mixed into the
  /// oscillatory data. The pure oscillatory family has an empty ll part, so
  /// w would be driven only quadratically; the blend keeps w0 nonzero and the
  /// small-amplitude ratio finite.
  double ll_fraction = 0.25;
  std::uint64_t seed = 42;
  double T = 2.0;
  double dt = 5e-3;
  double n_cutoff = 0.0;
  int record_every = 50;
  std::vector<double> amplitudes{1e-4, 1e-3, 1e-2, 1e-1, 1.0};
};

struct SmallnessRow {
  double amplitude = 0.0;
  double e_total = 0.0;
  double w_b012T = 0.0;
  double ratio = 0.0;  // w_b012T / e_total
  bool blew_up = false;
  bool flagged = false;  // ratio left the O(1) regime
};

std::vector<SmallnessRow> run_smallness_study(const SmallnessConfig& cfg);

}  // namespace ans
