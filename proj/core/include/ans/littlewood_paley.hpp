#pragma once

#include <climits>
#include <memory>
#include <utility>
#include <vector>

#include "ans/field.hpp"

namespace ans {

/// Dyadic bump phi supported in (3/4, 8/3) with sum_j phi(2^-j tau) = 1 for
/// tau > 0. Built from the smooth step chi = 1 on [0, 3/2], 0 on [8/3, inf):
///   chi(tau) = h(8/3 - tau) / (h(8/3 - tau) + h(tau - 3/2)),  h(x) = e^{-1/x},
///   phi(tau) = chi(tau) - chi(2 tau).
struct PartitionFunction {
  static constexpr double support_lo = 0.75;
  static constexpr double support_hi = 8.0 / 3.0;

  static double chi(double tau);
  double operator()(double tau) const { return chi(tau) - chi(2.0 * tau); }
  /// Symbol of the low-pass S_k: sum_{k' <= k-1} phi(2^-k' tau) = chi(2^{-(k-1)} tau).
  double lowpass(double tau, int k) const;
  /// sum_{j=j_lo}^{j_hi} phi(2^-j tau), for partition-identity checks.
  double partial_sum(double tau, int j_lo, int j_hi) const;
};

PartitionFunction make_partition();

/// Anisotropic dyadic decomposition on a fixed grid, with cached multiplier
/// tables for the horizontal bands Delta^h_k (functions of |xi_h|), vertical
/// bands Delta^v_l (functions of |xi_3|) and the matching low-passes S^h_k,
/// S^v_l. All masks are read-only after construction.
class DyadicDecomposition {
 public:
  static constexpr int no_band = INT_MIN;

  explicit DyadicDecomposition(const Grid& g, PartitionFunction pf = {});

  const Grid& grid() const { return grid_; }
  const PartitionFunction& partition() const { return pf_; }

  int k_min() const { return kh_min_; }
  int k_max() const { return kh_max_; }
  int l_min() const { return lv_min_; }
  int l_max() const { return lv_max_; }
  int iso_min() const { return ki_min_; }
  int iso_max() const { return ki_max_; }
  bool has_vertical() const { return lv_min_ <= lv_max_; }

  SpectralField delta_h(const SpectralField& a, int k) const;
  SpectralField delta_v(const SpectralField& a, int l) const;
  SpectralField delta_iso(const SpectralField& a, int k) const;
  SpectralField s_h(const SpectralField& a, int k) const;
  SpectralField s_v(const SpectralField& a, int l) const;
  /// Inhomogeneous vertical band: Delta^v_j for j >= 0, S^v_0 at j = -1,
  /// zero for j <= -2.
  SpectralField delta_vi(const SpectralField& a, int j) const;

  VectorField delta_h(const VectorField& a, int k) const;
  VectorField delta_v(const VectorField& a, int l) const;
  VectorField s_h(const VectorField& a, int k) const;
  VectorField s_v(const VectorField& a, int l) const;

  /// (hh, ll) split: ll = sum_j S^h_{j-1} Delta^v_j a, hh = a - ll. The
  /// under-resolved vertical residue (xi_3 = 0 content) stays in hh.
  std::pair<VectorField, VectorField> split_hh_ll(const VectorField& u0) const;
  SpectralField ll_part(const SpectralField& a) const;
  SpectralField hh_part(const SpectralField& a) const;

  // Low-level table access for fused per-mode loops.
  double mask_h(int k, std::size_t ih) const;   // ih = i1 * n2 + i2
  double mask_v(int l, int i3) const;
  double lowpass_h(int k, std::size_t ih) const;  // symbol of S^h_k
  double lowpass_v(int l, int i3) const;

  /// At most two adjacent bands carry a given frequency.
  struct WeightPair {
    int k0 = no_band;
    double w0 = 0.0;
    int k1 = no_band;
    double w1 = 0.0;
  };
  const WeightPair& h_pair(std::size_t ih) const { return h_pairs_[ih]; }
  const WeightPair& v_pair(int i3) const { return v_pairs_[i3]; }

  const std::vector<double>& xi_h_table() const { return xi_h_; }
  const std::vector<double>& xi3_abs_table() const { return xi3_abs_; }

 private:
  std::vector<double>& lowpass_table_h(int k);
  WeightPair pair_for(double xi, int k_lo, int k_hi) const;

  Grid grid_;
  PartitionFunction pf_;
  int kh_min_ = 0, kh_max_ = -1;
  int lv_min_ = 0, lv_max_ = -1;
  int ki_min_ = 0, ki_max_ = -1;
  int lp_h_lo_ = 0, lp_v_lo_ = 0;  // first cached low-pass index per axis

  std::vector<double> xi_h_;    // |xi_h| per (i1, i2)
  std::vector<double> xi3_abs_;  // |xi_3| per i3
  std::vector<std::vector<double>> masks_h_;     // per k, size n1*n2
  std::vector<std::vector<double>> masks_v_;     // per l, size n3
  std::vector<std::vector<double>> lowpass_h_;   // per k, size n1*n2
  std::vector<std::vector<double>> lowpass_v_;   // per l, size n3
  std::vector<WeightPair> h_pairs_;
  std::vector<WeightPair> v_pairs_;
};

}  // namespace ans
