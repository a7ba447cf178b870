#pragma once

#include <vector>

#include "ans/littlewood_paley.hpp"

namespace ans {

struct BesovParams {
  double p = 2.0;
  double nu_h = 1.0;
  double nu_3 = 0.0;

  void validate() const;
};

/// Values indexed by horizontal band k and vertical band l.
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(int k_lo, int k_hi, int l_lo, int l_hi)
      : k_lo_(k_lo), k_hi_(k_hi), l_lo_(l_lo), l_hi_(l_hi),
        v_(static_cast<std::size_t>(std::max(0, k_hi - k_lo + 1)) *
           std::max(0, l_hi - l_lo + 1)) {}

  int k_lo() const { return k_lo_; }
  int k_hi() const { return k_hi_; }
  int l_lo() const { return l_lo_; }
  int l_hi() const { return l_hi_; }

  double& at(int k, int l) { return v_[offset(k, l)]; }
  double at(int k, int l) const { return v_[offset(k, l)]; }

 private:
  std::size_t offset(int k, int l) const {
    return static_cast<std::size_t>(k - k_lo_) * (l_hi_ - l_lo_ + 1) +
           (l - l_lo_);
  }
  int k_lo_ = 0, k_hi_ = -1, l_lo_ = 0, l_hi_ = -1;
  std::vector<double> v_;
};

/// Per-band mixed norms ||Delta^h_k Delta^v_l a||_{L^p_h(L^2_v)} over the
/// resolvable ranges. Vector fields combine components as the root of the sum
/// of squared component norms.
BandMatrix band_mixed_norms(const SpectralField& a,
                            const DyadicDecomposition& dec, double p);
BandMatrix band_mixed_norms(const VectorField& a,
                            const DyadicDecomposition& dec, double p);

/// The static two-term norm of B^{-1+2/p,1/2}_p:
///   sum_l 2^{l/2} ( sum_{k>=l-1} 2^{(-2+4/p)k} ||Delta^h_k Delta^v_l a||^2 )^{1/2}
///   + sum_j 2^{j/2} ||S^h_{j-1} Delta^v_j a||_{L^2}.
double besov_static(const SpectralField& a, const DyadicDecomposition& dec,
                    const BesovParams& params);
double besov_static(const VectorField& a, const DyadicDecomposition& dec,
                    const BesovParams& params);

/// ||a||_{B^{0,1/2}} = sum_j 2^{j/2} ||Delta^v_j a||_{L^2}.
double besov_b012(const SpectralField& a, const DyadicDecomposition& dec);
double besov_b012(const VectorField& a, const DyadicDecomposition& dec);

/// ||a||_{H^{0,s}} = ( sum_j 2^{2js} ||Delta^v_j a||^2_{L^2} )^{1/2}.
double h0s_norm(const SpectralField& a, const DyadicDecomposition& dec,
                double s);
double h0s_norm(const VectorField& a, const DyadicDecomposition& dec, double s);

/// ||a||_{H-cal}^2 = sum_{j>=-1} 2^{-j} ||Delta^{vi}_j a||^2_{L^2}, with
/// Delta^{vi}_{-1} = S^v_0.
double calH_norm(const SpectralField& a, const DyadicDecomposition& dec);
double calH_norm(const VectorField& a, const DyadicDecomposition& dec);

/// ||a||_{B-cal}^2 = sum_{k, j>=0} 2^{j - k(2-4/p)} ||Delta^h_k Delta^v_j a||^2.
double calB_norm(const SpectralField& a, const DyadicDecomposition& dec,
                 double p);
double calB_norm(const VectorField& a, const DyadicDecomposition& dec, double p);

/// ||f||_{B^{-1}_{inf,q}} = || 2^{-k} ||Delta_k f||_{L^inf} ||_{l^q_k} with the
/// isotropic bands Delta_k. q in {1, 2, inf}.
double b_neg1_inf_q(const SpectralField& a, const DyadicDecomposition& dec,
                    double q);
double b_neg1_inf_q(const VectorField& a, const DyadicDecomposition& dec,
                    double q);

struct ScalingNorms {
  double tilde_B = 0.0;   // ||S^h_0 a||_{L^2} + sum_{k>=0} 2^{-sigma k} ||Delta^h_k a||_{L^q}
  double dot_B1 = 0.0;    // sum_k 2^{-alpha k} ||Delta^h_k a||_{L^q}
  double dot_Binf = 0.0;  // sup_k 2^{-sigma k} ||Delta^h_k a||_{L^q}
};

/// One-dimensional-in-scale norms of a horizontal (n3 == 1 or x3-independent)
/// field. Requires sigma > 0 and alpha in (0, 2(1 - 1/q)).
ScalingNorms scaling_norms_2d(const SpectralField& phi_eps,
                       const DyadicDecomposition& dec, double sigma,
                       double alpha, double q);

/// Osgood modulus mu(r) = r (1 - log2 r) log2(1 - log2 r), r in (0, 1].
double osgood_mu(double r);

}  // namespace ans
