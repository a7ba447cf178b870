#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ans/accumulator.hpp"

namespace ans {

enum class Integrator { IfRk4 };

struct SolverConfig {
  Grid grid;
  double nu_h = 1.0;
  double nu_3 = 0.0;
  double dt = 1e-3;
  double T = 1.0;
  double n_cutoff = 0.0;  // Friedrichs radius for solve_w; 0 = max resolvable
  Integrator integrator = Integrator::IfRk4;
  double p = 2.0;
  int record_every = 1;       // stride for RunRecord rows and snapshots
  int mixed_stats_every = 1;  // stride for the p != 2 mixed band statistics
  bool keep_snapshots = false;
  double blowup_threshold = 1e12;

  void validate() const;
  long long steps() const;
};

struct RunRecord {
  std::vector<double> times, energy, diss_h, diss_v, div_residual, b012_accum,
      besov_accum;
  bool blew_up = false;
  double blowup_time = 0.0;
  double max_div_residual = 0.0;
  // Stage-quadrature dissipation integrals 2 nu int ||.||^2 dt, accumulated
  // with the same RK4 weights as the trajectory.
  double diss_integral_h = 0.0;
  double diss_integral_v = 0.0;

  /// |E(T) + 2 int (nu_h ||grad_h u||^2 + nu_3 ||d3 u||^2) - E(0)| / E(0).
  double energy_identity_residual() const;
};

/// The Friedrichs projector family: P_n (ball |xi| <= n), P_1n (ball with
/// |xi_3| >= 1/n) and P_2n (slab |xi_3| < 1/n).
struct FriedrichsMasks {
  double n = 0.0;
  bool pn(double xi_sq) const { return xi_sq <= n * n; }
  bool p2n(double xi3_abs) const { return xi3_abs < 1.0 / n; }
  bool p1n(double xi_sq, double xi3_abs) const {
    return pn(xi_sq) && !p2n(xi3_abs);
  }
};

FriedrichsMasks friedrichs_projectors(const Grid& g, double n);
SpectralField apply_pn(const SpectralField& a, const FriedrichsMasks& m);
VectorField apply_pn(const VectorField& a, const FriedrichsMasks& m);
/// Largest coefficient magnitude outside the P_n ball.
double support_residual_outside_ball(const VectorField& a,
                                     const FriedrichsMasks& m);

/// -P_leray dealias(div(u (x) u)): right-hand side of the direct solver.
VectorField rhs_u(const VectorField& u, const SolverConfig& cfg);

/// Right-hand side of the Friedrichs-regularized w system (viscous terms
/// excluded, they are handled by the integrating factor):
///   -P_n div((w+uF)(x)(w+uF) - uF(x)uF) - P_1n div(uF(x)uF)
///   - P_n grad (-Delta)^{-1} d_j d_k ((w+uF)^j(w+uF)^k - P_2n(uF^j uF^k)).
VectorField rhs_w(const VectorField& w, const VectorField& uF,
                  const FriedrichsMasks& masks, const SolverConfig& cfg);

/// One integrating-factor RK4 step of u' = L u + N(u) with the exact viscous
/// multiplier exp(-(nu_h |xi_h|^2 + nu_3 xi_3^2) dt). `nonlin(stage, s, out)`
/// evaluates N on the stage state; s in {1,2,3,4} identifies the stage time
/// (t, t+dt/2, t+dt/2, t+dt). Stage dissipation is accumulated with RK4
/// weights into the optional quadrature sinks.
class IfRk4Stepper {
 public:
  IfRk4Stepper(const Grid& g, double nu_h, double nu_3, double dt);

  using Nonlinearity =
      std::function<void(const VectorField&, int stage, VectorField&)>;
  void step(VectorField& u, const Nonlinearity& nonlin);

  double diss_quadrature_h() const { return quad_h_; }
  double diss_quadrature_v() const { return quad_v_; }
  const std::vector<double>& half_factor() const { return e_half_; }
  const std::vector<double>& full_factor() const { return e_full_; }

 private:
  void stage_dissipation(const VectorField& s, double weight);

  Grid grid_;
  double dt_;
  std::vector<double> e_half_, e_full_;   // exp(-lam dt/2), exp(-lam dt)
  std::vector<double> lam_h_, lam_v_;     // nu_h |xi_h|^2, nu_3 xi_3^2
  VectorField k_, s_, acc_, e2u_, eu_;
  double quad_h_ = 0.0, quad_v_ = 0.0;
};

struct SolveResult {
  RunRecord record;
  NormAccumulator accumulator;
  std::vector<double> snapshot_times;
  std::vector<VectorField> snapshots;
  VectorField final_state;
};

/// Direct pseudo-spectral solve of the anisotropic system for u.
SolveResult solve_u(const VectorField& u0, const SolverConfig& cfg);

/// Friedrichs-Galerkin solve of the w system with u_F driven exactly.
SolveResult solve_w(const VectorField& u0, const SolverConfig& cfg);

struct ContinuousDependenceReport {
  std::vector<double> times, ratio;  // ||delta(t)|| / ||delta_0||
  double delta0_norm = 0.0;
  double sup_ratio = 0.0;
  double besov_T_u1 = 0.0, besov_T_u2 = 0.0;
  /// nu_h^{-1}(nu_h^{-(p+1)/(p-1)} + nu_3^{-(p+1)/(p-1)})(sum_i ||u_i||)^{2p/(p-1)}
  double exponent_ingredient = 0.0;
  double fitted_C = 0.0;  // log(max(sup_ratio, 1)) / exponent_ingredient
  bool blew_up = false;
};

/// Runs the direct solver on both data in lockstep and records the L^2 growth
/// of the difference. Requires nu_3 > 0 (hypothesis of the stability
/// estimate).
ContinuousDependenceReport continuous_dependence_run(const VectorField& u01,
                                                     const VectorField& u02,
                                                     const SolverConfig& cfg);

}  // namespace ans
