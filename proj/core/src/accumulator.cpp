#include "ans/accumulator.hpp"

#include <cmath>
#include <stdexcept>

#include "ans/operators.hpp"

namespace ans {

NormAccumulator::NormAccumulator(
    std::shared_ptr<const DyadicDecomposition> dec, BesovParams params)
    : dec_(std::move(dec)), params_(params) {
  params_.validate();
  int nl = std::max(0, dec_->l_max() - dec_->l_min() + 1);
  for (auto& c : comp_) {
    c.v_max.assign(nl, 0.0);
    c.v_gradh_int.assign(nl, 0.0);
    c.v_d3_int.assign(nl, 0.0);
    c.v_gradh_prev.assign(nl, 0.0);
    c.v_d3_prev.assign(nl, 0.0);
    c.s_max.assign(nl, 0.0);
    c.s_gradh_int.assign(nl, 0.0);
    c.s_d3_int.assign(nl, 0.0);
    c.s_gradh_prev.assign(nl, 0.0);
    c.s_d3_prev.assign(nl, 0.0);
    c.m_max = BandMatrix(dec_->k_min(), dec_->k_max(), dec_->l_min(),
                         dec_->l_max());
    c.m_sq_int = c.m_max;
    c.m_prev = c.m_max;
  }
}

void NormAccumulator::update(double t, const VectorField& u, bool with_mixed) {
  if (started_ && t < t_last_)
    throw std::invalid_argument("accumulator requires non-decreasing times");
  double dt = started_ ? t - t_last_ : 0.0;
  update_cheap(t, dt, u);
  if (with_mixed) update_mixed(t, u);
  t_last_ = t;
  started_ = true;
  ++n_updates_;
}

void NormAccumulator::update_cheap(double /*t*/, double dt,
                                   const VectorField& u) {
  const auto& dec = *dec_;
  const Grid& g = dec.grid();
  if (!dec.has_vertical()) return;
  const int l_lo = dec.l_min();
  const int nl = dec.l_max() - l_lo + 1;
  const auto& xi_h = dec.xi_h_table();
  const auto& xi3 = dec.xi3_abs_table();

  // Per-j sums of w^2 |c|^2, w^2 |xi_h c|^2, w^2 |xi_3 c|^2 for the plain
  // vertical bands and the S^h_{j-1}-filtered ones.
  std::vector<double> v_sq(nl), v_gh(nl), v_d3(nl), s_sq(nl), s_gh(nl),
      s_d3(nl);
  for (int c = 0; c < 3; ++c) {
    std::fill(v_sq.begin(), v_sq.end(), 0.0);
    std::fill(v_gh.begin(), v_gh.end(), 0.0);
    std::fill(v_d3.begin(), v_d3.end(), 0.0);
    std::fill(s_sq.begin(), s_sq.end(), 0.0);
    std::fill(s_gh.begin(), s_gh.end(), 0.0);
    std::fill(s_d3.begin(), s_d3.end(), 0.0);
    const auto& coeffs = u.comp(c).coeffs;
    std::size_t idx = 0;
    for (int i1 = 0; i1 < g.n1; ++i1)
      for (int i2 = 0; i2 < g.n2; ++i2) {
        std::size_t ih = static_cast<std::size_t>(i1) * g.n2 + i2;
        double xh2 = xi_h[ih] * xi_h[ih];
        for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
          const auto& vp = dec.v_pair(i3);
          if (vp.k0 == DyadicDecomposition::no_band) continue;
          double a2 = std::norm(coeffs[idx]);
          if (a2 == 0.0) continue;
          double x32 = xi3[i3] * xi3[i3];
          auto add = [&](int j, double wv) {
            double w2 = wv * wv;
            int o = j - l_lo;
            v_sq[o] += w2 * a2;
            v_gh[o] += w2 * xh2 * a2;
            v_d3[o] += w2 * x32 * a2;
            double lp = dec.lowpass_h(j - 1, ih);
            double ws2 = w2 * lp * lp;
            s_sq[o] += ws2 * a2;
            s_gh[o] += ws2 * xh2 * a2;
            s_d3[o] += ws2 * x32 * a2;
          };
          add(vp.k0, vp.w0);
          if (vp.k1 != DyadicDecomposition::no_band) add(vp.k1, vp.w1);
        }
      }
    double vol = g.volume();
    auto& st = comp_[c];
    for (int o = 0; o < nl; ++o) {
      double vmax = std::sqrt(v_sq[o] * vol);
      double vg = v_gh[o] * vol, vd = v_d3[o] * vol;
      st.v_max[o] = std::max(st.v_max[o], vmax);
      st.v_gradh_int[o] += 0.5 * (st.v_gradh_prev[o] + vg) * dt;
      st.v_d3_int[o] += 0.5 * (st.v_d3_prev[o] + vd) * dt;
      st.v_gradh_prev[o] = vg;
      st.v_d3_prev[o] = vd;

      double smax = std::sqrt(s_sq[o] * vol);
      double sg = s_gh[o] * vol, sd = s_d3[o] * vol;
      st.s_max[o] = std::max(st.s_max[o], smax);
      st.s_gradh_int[o] += 0.5 * (st.s_gradh_prev[o] + sg) * dt;
      st.s_d3_int[o] += 0.5 * (st.s_d3_prev[o] + sd) * dt;
      st.s_gradh_prev[o] = sg;
      st.s_d3_prev[o] = sd;
    }
  }
}

void NormAccumulator::update_mixed(double t, const VectorField& u) {
  double dt = mixed_started_ ? t - t_last_mixed_ : 0.0;
  for (int c = 0; c < 3; ++c) {
    BandMatrix cur = band_mixed_norms(u.comp(c), *dec_, params_.p);
    auto& st = comp_[c];
    for (int k = cur.k_lo(); k <= cur.k_hi(); ++k)
      for (int l = cur.l_lo(); l <= cur.l_hi(); ++l) {
        double v = cur.at(k, l);
        st.m_max.at(k, l) = std::max(st.m_max.at(k, l), v);
        double prev = st.m_prev.at(k, l);
        st.m_sq_int.at(k, l) += 0.5 * (prev * prev + v * v) * dt;
        st.m_prev.at(k, l) = v;
      }
  }
  t_last_mixed_ = t;
  mixed_started_ = true;
}

double NormAccumulator::b012_time_norm() const {
  const auto& dec = *dec_;
  if (!dec.has_vertical()) return 0.0;
  double sq_sum = 0.0;
  for (const auto& st : comp_) {
    double norm_c = 0.0;
    for (int j = dec.l_min(); j <= dec.l_max(); ++j) {
      int o = j - dec.l_min();
      norm_c += std::exp2(0.5 * j) *
                (st.v_max[o] + std::sqrt(params_.nu_h * st.v_gradh_int[o]) +
                 std::sqrt(params_.nu_3 * st.v_d3_int[o]));
    }
    sq_sum += norm_c * norm_c;
  }
  return std::sqrt(sq_sum);
}

double NormAccumulator::besov_time_norm() const {
  const auto& dec = *dec_;
  if (!dec.has_vertical()) return 0.0;
  const double p = params_.p;
  double sq_sum = 0.0;
  for (const auto& st : comp_) {
    double term1 = 0.0;
    for (int l = dec.l_min(); l <= dec.l_max(); ++l) {
      double inner = 0.0;
      for (int k = std::max(l - 1, dec.k_min()); k <= dec.k_max(); ++k) {
        double mx = st.m_max.at(k, l);
        double i2 = st.m_sq_int.at(k, l);
        inner += std::exp2((-2.0 + 4.0 / p) * k) * mx * mx +
                 params_.nu_h * std::exp2(4.0 * k / p) * i2 +
                 params_.nu_3 * std::exp2((-2.0 + 4.0 / p) * k + 2.0 * l) * i2;
      }
      term1 += std::exp2(0.5 * l) * std::sqrt(inner);
    }
    double term2 = 0.0;
    for (int j = dec.l_min(); j <= dec.l_max(); ++j) {
      int o = j - dec.l_min();
      term2 += std::exp2(0.5 * j) *
               (st.s_max[o] + std::sqrt(params_.nu_h * st.s_gradh_int[o]) +
                std::sqrt(params_.nu_3 * st.s_d3_int[o]));
    }
    double norm_c = term1 + term2;
    sq_sum += norm_c * norm_c;
  }
  return std::sqrt(sq_sum);
}

}  // namespace ans
