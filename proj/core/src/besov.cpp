#include "ans/besov.hpp"

#include <cmath>
#include <stdexcept>

#include "ans/mixed_norm.hpp"
#include "ans/transform.hpp"

namespace ans {
namespace {

double hypot3(double a, double b, double c) {
  return std::sqrt(a * a + b * b + c * c);
}

double pow2(double e) { return std::exp2(e); }

template <typename F>
double vector_combined(const VectorField& v, F&& per_component) {
  return hypot3(per_component(v.u1), per_component(v.u2), per_component(v.u3));
}

}  // namespace

void BesovParams::validate() const {
  if (!(p >= 2.0)) throw std::invalid_argument("besov parameter p must be >= 2");
  if (!(nu_h > 0.0)) throw std::invalid_argument("nu_h must be positive");
  if (!(nu_3 >= 0.0)) throw std::invalid_argument("nu_3 must be nonnegative");
}

BandMatrix band_mixed_norms(const SpectralField& a,
                            const DyadicDecomposition& dec, double p) {
  const Grid& g = dec.grid();
  BandMatrix out(dec.k_min(), dec.k_max(), dec.l_min(), dec.l_max());
  if (!dec.has_vertical()) return out;

  if (p == 2.0) {
    // Parseval: accumulate squared masked amplitudes in one pass.
    std::size_t idx = 0;
    for (int i1 = 0; i1 < g.n1; ++i1)
      for (int i2 = 0; i2 < g.n2; ++i2) {
        std::size_t ih = static_cast<std::size_t>(i1) * g.n2 + i2;
        const auto& hp = dec.h_pair(ih);
        for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
          if (hp.k0 == DyadicDecomposition::no_band) continue;
          const auto& vp = dec.v_pair(i3);
          if (vp.k0 == DyadicDecomposition::no_band) continue;
          double a2 = std::norm(a.coeffs[idx]);
          if (a2 == 0.0) continue;
          auto add = [&](int k, double wh, int l, double wv) {
            double w = wh * wv;
            out.at(k, l) += w * w * a2;
          };
          add(hp.k0, hp.w0, vp.k0, vp.w0);
          if (vp.k1 != DyadicDecomposition::no_band)
            add(hp.k0, hp.w0, vp.k1, vp.w1);
          if (hp.k1 != DyadicDecomposition::no_band) {
            add(hp.k1, hp.w1, vp.k0, vp.w0);
            if (vp.k1 != DyadicDecomposition::no_band)
              add(hp.k1, hp.w1, vp.k1, vp.w1);
          }
        }
      }
    double vol = g.volume();
    for (int k = out.k_lo(); k <= out.k_hi(); ++k)
      for (int l = out.l_lo(); l <= out.l_hi(); ++l)
        out.at(k, l) = std::sqrt(out.at(k, l) * vol);
    return out;
  }

  SpectralField band(g);
  aligned_vector<cplx> phys(g.size());
  for (int l = dec.l_min(); l <= dec.l_max(); ++l) {
    for (int k = dec.k_min(); k <= dec.k_max(); ++k) {
      double peak = 0.0;
      std::size_t idx = 0;
      for (int i1 = 0; i1 < g.n1; ++i1)
        for (int i2 = 0; i2 < g.n2; ++i2) {
          std::size_t ih = static_cast<std::size_t>(i1) * g.n2 + i2;
          double wh = dec.mask_h(k, ih);
          for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
            double w = wh * dec.mask_v(l, i3);
            cplx c = w * a.coeffs[idx];
            band.coeffs[idx] = c;
            peak = std::max(peak, std::abs(c));
          }
        }
      if (peak == 0.0) {
        out.at(k, l) = 0.0;
        continue;
      }
      backward_raw(band.coeffs, phys, g);
      out.at(k, l) = mixed_norm_physical(std::span<const cplx>(phys), g, p, 2.0);
    }
  }
  return out;
}

BandMatrix band_mixed_norms(const VectorField& a,
                            const DyadicDecomposition& dec, double p) {
  BandMatrix b1 = band_mixed_norms(a.u1, dec, p);
  BandMatrix b2 = band_mixed_norms(a.u2, dec, p);
  BandMatrix b3 = band_mixed_norms(a.u3, dec, p);
  for (int k = b1.k_lo(); k <= b1.k_hi(); ++k)
    for (int l = b1.l_lo(); l <= b1.l_hi(); ++l)
      b1.at(k, l) = hypot3(b1.at(k, l), b2.at(k, l), b3.at(k, l));
  return b1;
}

namespace {

/// sum_j 2^{j/2} ||S^h_{j-1} Delta^v_j a||_{L^2}, evaluated spectrally.
double lowhigh_term(const SpectralField& a, const DyadicDecomposition& dec) {
  const Grid& g = dec.grid();
  if (!dec.has_vertical()) return 0.0;
  std::vector<double> sq(dec.l_max() - dec.l_min() + 1, 0.0);
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      std::size_t ih = static_cast<std::size_t>(i1) * g.n2 + i2;
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        const auto& vp = dec.v_pair(i3);
        if (vp.k0 == DyadicDecomposition::no_band) continue;
        double a2 = std::norm(a.coeffs[idx]);
        if (a2 == 0.0) continue;
        double w0 = vp.w0 * dec.lowpass_h(vp.k0 - 1, ih);
        sq[vp.k0 - dec.l_min()] += w0 * w0 * a2;
        if (vp.k1 != DyadicDecomposition::no_band) {
          double w1 = vp.w1 * dec.lowpass_h(vp.k1 - 1, ih);
          sq[vp.k1 - dec.l_min()] += w1 * w1 * a2;
        }
      }
    }
  double vol = g.volume();
  double sum = 0.0;
  for (int j = dec.l_min(); j <= dec.l_max(); ++j)
    sum += pow2(0.5 * j) * std::sqrt(sq[j - dec.l_min()] * vol);
  return sum;
}

/// Per-vertical-band squared L^2 norms ||Delta^v_j a||^2_{L^2}.
std::vector<double> vertical_band_sq(const SpectralField& a,
                                     const DyadicDecomposition& dec) {
  const Grid& g = dec.grid();
  std::vector<double> sq(std::max(0, dec.l_max() - dec.l_min() + 1), 0.0);
  if (!dec.has_vertical()) return sq;
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        const auto& vp = dec.v_pair(i3);
        if (vp.k0 == DyadicDecomposition::no_band) continue;
        double a2 = std::norm(a.coeffs[idx]);
        if (a2 == 0.0) continue;
        sq[vp.k0 - dec.l_min()] += vp.w0 * vp.w0 * a2;
        if (vp.k1 != DyadicDecomposition::no_band)
          sq[vp.k1 - dec.l_min()] += vp.w1 * vp.w1 * a2;
      }
  double vol = g.volume();
  for (auto& v : sq) v *= vol;
  return sq;
}

}  // namespace

double besov_static(const SpectralField& a, const DyadicDecomposition& dec,
                    const BesovParams& params) {
  params.validate();
  const double p = params.p;
  BandMatrix B = band_mixed_norms(a, dec, p);
  double term1 = 0.0;
  for (int l = B.l_lo(); l <= B.l_hi(); ++l) {
    double inner = 0.0;
    for (int k = std::max(l - 1, B.k_lo()); k <= B.k_hi(); ++k) {
      double b = B.at(k, l);
      inner += pow2((-2.0 + 4.0 / p) * k) * b * b;
    }
    term1 += pow2(0.5 * l) * std::sqrt(inner);
  }
  return term1 + lowhigh_term(a, dec);
}

double besov_static(const VectorField& a, const DyadicDecomposition& dec,
                    const BesovParams& params) {
  return vector_combined(
      a, [&](const SpectralField& f) { return besov_static(f, dec, params); });
}

double besov_b012(const SpectralField& a, const DyadicDecomposition& dec) {
  auto sq = vertical_band_sq(a, dec);
  double sum = 0.0;
  for (int j = dec.l_min(); j <= dec.l_max(); ++j)
    sum += pow2(0.5 * j) * std::sqrt(sq[j - dec.l_min()]);
  return sum;
}

double besov_b012(const VectorField& a, const DyadicDecomposition& dec) {
  return vector_combined(
      a, [&](const SpectralField& f) { return besov_b012(f, dec); });
}

double h0s_norm(const SpectralField& a, const DyadicDecomposition& dec,
                double s) {
  auto sq = vertical_band_sq(a, dec);
  double sum = 0.0;
  for (int j = dec.l_min(); j <= dec.l_max(); ++j)
    sum += pow2(2.0 * s * j) * sq[j - dec.l_min()];
  return std::sqrt(sum);
}

double h0s_norm(const VectorField& a, const DyadicDecomposition& dec,
                double s) {
  return vector_combined(
      a, [&](const SpectralField& f) { return h0s_norm(f, dec, s); });
}

double calH_norm(const SpectralField& a, const DyadicDecomposition& dec) {
  const Grid& g = dec.grid();
  // j = -1 term: S^v_0.
  double s0 = 0.0;
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        double w = dec.lowpass_v(0, i3);
        if (w != 0.0) s0 += w * w * std::norm(a.coeffs[idx]);
      }
  double sum = 2.0 * s0 * g.volume();  // 2^{-(-1)} = 2
  auto sq = vertical_band_sq(a, dec);
  for (int j = std::max(0, dec.l_min()); j <= dec.l_max(); ++j)
    sum += pow2(-static_cast<double>(j)) * sq[j - dec.l_min()];
  return std::sqrt(sum);
}

double calH_norm(const VectorField& a, const DyadicDecomposition& dec) {
  return vector_combined(
      a, [&](const SpectralField& f) { return calH_norm(f, dec); });
}

double calB_norm(const SpectralField& a, const DyadicDecomposition& dec,
                 double p) {
  BandMatrix B = band_mixed_norms(a, dec, p);
  double sum = 0.0;
  for (int k = B.k_lo(); k <= B.k_hi(); ++k)
    for (int j = std::max(0, B.l_lo()); j <= B.l_hi(); ++j) {
      double b = B.at(k, j);
      sum += pow2(j - k * (2.0 - 4.0 / p)) * b * b;
    }
  return std::sqrt(sum);
}

double calB_norm(const VectorField& a, const DyadicDecomposition& dec,
                 double p) {
  return vector_combined(
      a, [&](const SpectralField& f) { return calB_norm(f, dec, p); });
}

double b_neg1_inf_q(const SpectralField& a, const DyadicDecomposition& dec,
                    double q) {
  if (!(q == 1.0 || q == 2.0 || std::isinf(q)))
    throw std::invalid_argument("q must be 1, 2 or inf");
  double acc = 0.0;
  for (int k = dec.iso_min(); k <= dec.iso_max(); ++k) {
    SpectralField band = dec.delta_iso(a, k);
    double peak = 0.0;
    for (const auto& c : band.coeffs) peak = std::max(peak, std::abs(c));
    double linf = 0.0;
    if (peak > 0.0) {
      auto phys = inverse_transform(band);
      for (const auto& v : phys) linf = std::max(linf, std::abs(v));
    }
    double val = pow2(-static_cast<double>(k)) * linf;
    if (std::isinf(q))
      acc = std::max(acc, val);
    else if (q == 1.0)
      acc += val;
    else
      acc += val * val;
  }
  return q == 2.0 ? std::sqrt(acc) : acc;
}

double b_neg1_inf_q(const VectorField& a, const DyadicDecomposition& dec,
                    double q) {
  return vector_combined(
      a, [&](const SpectralField& f) { return b_neg1_inf_q(f, dec, q); });
}

ScalingNorms scaling_norms_2d(const SpectralField& phi_eps,
                       const DyadicDecomposition& dec, double sigma,
                       double alpha, double q) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!(alpha > 0.0 && alpha < 2.0 * (1.0 - 1.0 / q)))
    throw std::invalid_argument("alpha must lie in (0, 2(1 - 1/q))");
  const Grid& g = dec.grid();
  if (g.n3 != 1) {
    double peak = 0.0, off = 0.0;
    for (int i1 = 0; i1 < g.n1; ++i1)
      for (int i2 = 0; i2 < g.n2; ++i2)
        for (int i3 = 0; i3 < g.n3; ++i3) {
          double v = std::abs(phi_eps.at(i1, i2, i3));
          peak = std::max(peak, v);
          if (i3 != 0) off = std::max(off, v);
        }
    if (off > 1e-12 * std::max(peak, 1e-300))
      throw std::invalid_argument("scaling_norms_2d requires an x3-independent field");
  }

  ScalingNorms out;
  // 2-D L^2 norm of the S^h_0 part (Parseval over the horizontal plane).
  {
    double s = 0.0;
    for (int i1 = 0; i1 < g.n1; ++i1)
      for (int i2 = 0; i2 < g.n2; ++i2) {
        std::size_t ih = static_cast<std::size_t>(i1) * g.n2 + i2;
        double w = dec.lowpass_h(0, ih);
        if (w != 0.0) s += w * w * std::norm(phi_eps.at(i1, i2, 0));
      }
    out.tilde_B = std::sqrt(s * g.L1 * g.L2);
  }
  for (int k = dec.k_min(); k <= dec.k_max(); ++k) {
    SpectralField band = dec.delta_h(phi_eps, k);
    double peak = 0.0;
    for (const auto& c : band.coeffs) peak = std::max(peak, std::abs(c));
    double lq = peak > 0.0 ? horizontal_lq_norm(band, q) : 0.0;
    if (k >= 0) out.tilde_B += pow2(-sigma * k) * lq;
    out.dot_B1 += pow2(-alpha * k) * lq;
    out.dot_Binf = std::max(out.dot_Binf, pow2(-sigma * k) * lq);
  }
  return out;
}

double osgood_mu(double r) {
  if (!(r > 0.0 && r <= 1.0))
    throw std::invalid_argument("osgood_mu requires r in (0, 1]");
  double lg = std::log2(r);
  return r * (1.0 - lg) * std::log2(1.0 - lg);
}

}  // namespace ans
