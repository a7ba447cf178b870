#pragma once

#include <memory>

#include "ans/besov.hpp"

namespace ans {

/// Running per-band time statistics assembling the two-term time norms
/// B^{0,1/2}(T) and B^{-1+2/p,1/2}_p(T) during time stepping. L^inf_T pieces
/// are running maxima, L^2_T pieces trapezoid integrals of squared band norms;
/// every statistic is non-decreasing in T. The vertical (p = 2) statistics are
/// cheap spectral reductions; the mixed L^p_h(L^2_v) band statistics cost one
/// transform per populated band and may be updated on a stride.
class NormAccumulator {
 public:
  NormAccumulator(std::shared_ptr<const DyadicDecomposition> dec,
                  BesovParams params);

  /// Ingest a snapshot at time t (t non-decreasing across calls).
  void update(double t, const VectorField& u, bool with_mixed = true);

  double elapsed() const { return t_last_; }
  std::size_t updates() const { return n_updates_; }

  /// sum_j 2^{j/2} ( ||D^v_j a||_{Linf_T(L2)} + nu_h^{1/2}||grad_h D^v_j a||_{L2_T(L2)}
  ///                + nu_3^{1/2}||d_3 D^v_j a||_{L2_T(L2)} ), components combined
  /// in Euclidean fashion.
  double b012_time_norm() const;

  /// The full two-term B^{-1+2/p,1/2}_p(T) norm.
  double besov_time_norm() const;

  const BesovParams& params() const { return params_; }
  const DyadicDecomposition& decomposition() const { return *dec_; }

 private:
  struct BandStats {
    // Vertical-band statistics of Delta^v_j, per component.
    std::vector<double> v_max, v_gradh_int, v_d3_int, v_gradh_prev, v_d3_prev;
    // S^h_{j-1} Delta^v_j statistics, per component.
    std::vector<double> s_max, s_gradh_int, s_d3_int, s_gradh_prev, s_d3_prev;
    // Mixed L^p_h(L^2_v) statistics per (k, l).
    BandMatrix m_max, m_sq_int, m_prev;
  };

  void update_cheap(double t, double dt, const VectorField& u);
  void update_mixed(double t, const VectorField& u);

  std::shared_ptr<const DyadicDecomposition> dec_;
  BesovParams params_;
  double t_last_ = 0.0;
  double t_last_mixed_ = 0.0;
  bool started_ = false;
  bool mixed_started_ = false;
  std::size_t n_updates_ = 0;
  std::array<BandStats, 3> comp_;
};

}  // namespace ans
