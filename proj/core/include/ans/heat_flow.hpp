#pragma once

#include <span>
#include <vector>

#include "ans/besov.hpp"

namespace ans {

struct HeatFlowParams {
  double nu_h = 1.0;
  double nu_3 = 0.0;
  std::vector<double> times;  // strictly increasing, first entry >= 0

  void validate() const;
};

/// Multiply every coefficient by exp(-(nu_h |xi_h|^2 + nu_3 xi_3^2) t).
SpectralField semigroup(const SpectralField& a, double t, double nu_h,
                        double nu_3);
VectorField semigroup(const VectorField& a, double t, double nu_h, double nu_3);

/// u_F(t) = semigroup applied to the hh part of u0. Snapshots are produced on
/// demand, so long time grids do not hold the whole sequence in memory.
class HeatFlow {
 public:
  HeatFlow(const VectorField& u0, HeatFlowParams params,
           const DyadicDecomposition& dec);

  const std::vector<double>& times() const { return params_.times; }
  std::size_t size() const { return params_.times.size(); }
  VectorField snapshot(std::size_t i) const;
  VectorField at(double t) const;
  const VectorField& hh0() const { return hh0_; }
  const HeatFlowParams& params() const { return params_; }

 private:
  VectorField hh0_;
  HeatFlowParams params_;
};

HeatFlow make_uF(const VectorField& u0, HeatFlowParams params,
                 const DyadicDecomposition& dec);

/// Snapshot grid resolving every decay rate of the spectrum of `a`: dense near
/// zero, geometric afterwards, ending where the slowest populated mode has
/// decayed by e^{-efolds}. Used to approximate T = infinity.
std::vector<double> decay_time_grid(const VectorField& a, double nu_h,
                                    double nu_3, int points_per_doubling = 8,
                                    double efolds = 12.0);

struct DecayRow {
  int k = 0, l = 0;
  double lhs = 0.0, bound = 0.0, ratio = 0.0;
};

struct DecayReport {
  double q = 0.0, p = 0.0;
  bool vertical_branch_skipped = false;  // nu_3 == 0
  std::vector<DecayRow> rows;            // populated bands only
  double max_ratio = 0.0, min_ratio = 0.0, median_ratio = 0.0;
  double spread() const {
    return min_ratio > 0.0 ? max_ratio / min_ratio : 0.0;
  }
};

/// Per-band check of the heat-decay bound
///   ||Delta^h_k Delta^v_l u_F||_{L^q_T(L^p_h(L^2_v))}
///     <~ 2^{(1-2/p)k} 2^{-l/2} min(nu_h^{-1/q} 2^{-2k/q}, nu_3^{-1/q} 2^{-2l/q})
/// over bands k >= l-1 that carry data.
DecayReport verify_heat_decay(const VectorField& u0,
                                 const HeatFlowParams& params,
                                 const DyadicDecomposition& dec, double q,
                                 double p);

struct LinfL2Row {
  int j = 0;
  double lhs = 0.0, bound = 0.0, ratio = 0.0;
};

struct LinfL2Report {
  std::vector<LinfL2Row> rows;
  double ratio_sum = 0.0;     // summability proxy for the d_j sequence
  double scalar_lhs = 0.0;    // ||u_F||_{L^2_T(L^inf)}
  double scalar_fitted_C = 0.0;  // scalar_lhs / (nu_h^{-1/2} ||u0||_B)
};

/// Check of ||Delta^v_j u_F||_{L^2_T(L^inf_h(L^2_v))} <~ nu_h^{-1/2} 2^{-j/2},
/// plus the scalar bound ||u_F||_{L^2_T(L^inf)} <~ nu_h^{-1/2} ||u0||_B.
LinfL2Report verify_linf_l2_decay(const VectorField& u0,
                                    const HeatFlowParams& params,
                                    const DyadicDecomposition& dec, double p);

}  // namespace ans
