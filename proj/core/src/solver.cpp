#include "ans/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "ans/mixed_norm.hpp"
#include "ans/operators.hpp"
#include "ans/transform.hpp"

namespace ans {

void SolverConfig::validate() const {
  grid.validate();
  if (!(nu_h > 0.0)) throw std::invalid_argument("nu_h must be positive");
  if (!(nu_3 >= 0.0)) throw std::invalid_argument("nu_3 must be nonnegative");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(T >= dt)) throw std::invalid_argument("T must be at least dt");
  if (record_every < 1 || mixed_stats_every < 1)
    throw std::invalid_argument("strides must be >= 1");
  if (n_cutoff < 0.0) throw std::invalid_argument("n_cutoff must be >= 0");
}

long long SolverConfig::steps() const {
  return std::llround(T / dt);
}

double RunRecord::energy_identity_residual() const {
  if (energy.empty() || energy.front() <= 0.0) return 0.0;
  double e0 = energy.front(), eT = energy.back();
  return std::abs(eT + diss_integral_h + diss_integral_v - e0) / e0;
}

FriedrichsMasks friedrichs_projectors(const Grid& g, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("Friedrichs radius must be > 0");
  if (n > g.max_xi() + 1e-12)
    throw std::invalid_argument("Friedrichs radius exceeds resolvable modes");
  return FriedrichsMasks{n};
}

SpectralField apply_pn(const SpectralField& a, const FriedrichsMasks& m) {
  const Grid& g = a.grid;
  WavenumberTables k(g);
  SpectralField out(g);
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      double xh2 = k.xi1[i1] * k.xi1[i1] + k.xi2[i2] * k.xi2[i2];
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        double q = xh2 + k.xi3[i3] * k.xi3[i3];
        out.coeffs[idx] = m.pn(q) ? a.coeffs[idx] : cplx(0.0);
      }
    }
  return out;
}

VectorField apply_pn(const VectorField& a, const FriedrichsMasks& m) {
  VectorField out;
  out.u1 = apply_pn(a.u1, m);
  out.u2 = apply_pn(a.u2, m);
  out.u3 = apply_pn(a.u3, m);
  out.divergence_free = a.divergence_free;
  return out;
}

double support_residual_outside_ball(const VectorField& a,
                                     const FriedrichsMasks& m) {
  const Grid& g = a.grid();
  WavenumberTables k(g);
  double worst = 0.0;
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      double xh2 = k.xi1[i1] * k.xi1[i1] + k.xi2[i2] * k.xi2[i2];
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        double q = xh2 + k.xi3[i3] * k.xi3[i3];
        if (m.pn(q)) continue;
        worst = std::max({worst, std::abs(a.u1.coeffs[idx]),
                          std::abs(a.u2.coeffs[idx]),
                          std::abs(a.u3.coeffs[idx])});
      }
    }
  return worst;
}

namespace {

constexpr int sym_index[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};

/// Scratch and fused kernels for the pseudo-spectral right-hand sides. States
/// are conjugate-symmetric, so the quadratic terms run through half-spectrum
/// r2c/c2r transforms: the products are formed on real arrays, the right-hand
/// side is assembled on the m3 >= 0 half and mirrored.
class ConvectionEvaluator {
 public:
  explicit ConvectionEvaluator(const Grid& g)
      : g_(g), k_(g), nh_(g.n3 / 2 + 1) {
    std::size_t n = g.size(), h = half_spectrum_size(g);
    for (auto& b : rphys_) b.resize(n);
    rprod_.resize(n);
    hs_tmp_.resize(h);
    for (auto& b : shat_) b.resize(h);
    keep1_.resize(g.n1);
    keep2_.resize(g.n2);
    keep3_.resize(g.n3);
    for (int i = 0; i < g.n1; ++i)
      keep1_[i] = 3 * std::abs(Grid::mode_of(i, g.n1)) <= g.n1;
    for (int i = 0; i < g.n2; ++i)
      keep2_[i] = 3 * std::abs(Grid::mode_of(i, g.n2)) <= g.n2;
    for (int i = 0; i < g.n3; ++i)
      keep3_[i] = g.n3 == 1 || 3 * std::abs(Grid::mode_of(i, g.n3)) <= g.n3;
  }

  void rhs_u(const VectorField& u, VectorField& out) {
    transform_and_products(u, rphys_, shat_);
    const double scale = 1.0 / static_cast<double>(g_.size());
    for (int i1 = 0; i1 < g_.n1; ++i1)
      for (int i2 = 0; i2 < g_.n2; ++i2) {
        double x1 = k_.xi1[i1], x2 = k_.xi2[i2];
        bool keep12 = keep1_[i1] && keep2_[i2];
        std::size_t row = static_cast<std::size_t>(i1) * g_.n2 + i2;
        std::size_t idx = row * g_.n3;
        std::size_t hidx = row * nh_;
        for (int i3 = 0; i3 < nh_; ++i3, ++idx, ++hidx) {
          if (!keep12 || !keep3_[i3]) {
            out.u1.coeffs[idx] = out.u2.coeffs[idx] = out.u3.coeffs[idx] =
                cplx(0.0);
            continue;
          }
          double x3 = k_.xi3[i3];
          double q = x1 * x1 + x2 * x2 + x3 * x3;
          cplx s1 =
              x1 * shat_[0][hidx] + x2 * shat_[1][hidx] + x3 * shat_[2][hidx];
          cplx s2 =
              x1 * shat_[1][hidx] + x2 * shat_[3][hidx] + x3 * shat_[4][hidx];
          cplx s3 =
              x1 * shat_[2][hidx] + x2 * shat_[4][hidx] + x3 * shat_[5][hidx];
          // div(u (x) u), then Leray projection, then the overall minus sign.
          cplx c1 = cplx(0.0, scale) * s1;
          cplx c2 = cplx(0.0, scale) * s2;
          cplx c3 = cplx(0.0, scale) * s3;
          if (q > 0.0) {
            cplx dot = (x1 * c1 + x2 * c2 + x3 * c3) / q;
            c1 -= x1 * dot;
            c2 -= x2 * dot;
            c3 -= x3 * dot;
          }
          out.u1.coeffs[idx] = -c1;
          out.u2.coeffs[idx] = -c2;
          out.u3.coeffs[idx] = -c3;
        }
      }
    mirror_upper_half(out);
    out.divergence_free = true;
  }

  void rhs_w(const VectorField& w, const VectorField& uF,
             const FriedrichsMasks& m, VectorField& out) {
    if (qhat_[0].empty())
      for (auto& b : qhat_) b.resize(half_spectrum_size(g_));
    if (rphysF_[0].empty())
      for (auto& b : rphysF_) b.resize(g_.size());

    // v = w + uF drives the full quadratic form; uF alone drives Q.
    VectorField v = w;
    v += uF;
    transform_and_products(v, rphys_, shat_);
    transform_and_products(uF, rphysF_, qhat_);

    const double scale = 1.0 / static_cast<double>(g_.size());
    for (int i1 = 0; i1 < g_.n1; ++i1)
      for (int i2 = 0; i2 < g_.n2; ++i2) {
        double x1 = k_.xi1[i1], x2 = k_.xi2[i2];
        bool keep12 = keep1_[i1] && keep2_[i2];
        std::size_t row = static_cast<std::size_t>(i1) * g_.n2 + i2;
        std::size_t idx = row * g_.n3;
        std::size_t hidx = row * nh_;
        for (int i3 = 0; i3 < nh_; ++i3, ++idx, ++hidx) {
          double x3 = k_.xi3[i3];
          double q = x1 * x1 + x2 * x2 + x3 * x3;
          if (!keep12 || !keep3_[i3] || !m.pn(q)) {
            out.u1.coeffs[idx] = out.u2.coeffs[idx] = out.u3.coeffs[idx] =
                cplx(0.0);
            continue;
          }
          cplx sS1 =
              x1 * shat_[0][hidx] + x2 * shat_[1][hidx] + x3 * shat_[2][hidx];
          cplx sS2 =
              x1 * shat_[1][hidx] + x2 * shat_[3][hidx] + x3 * shat_[4][hidx];
          cplx sS3 =
              x1 * shat_[2][hidx] + x2 * shat_[4][hidx] + x3 * shat_[5][hidx];
          cplx sQ1 =
              x1 * qhat_[0][hidx] + x2 * qhat_[1][hidx] + x3 * qhat_[2][hidx];
          cplx sQ2 =
              x1 * qhat_[1][hidx] + x2 * qhat_[3][hidx] + x3 * qhat_[4][hidx];
          cplx sQ3 =
              x1 * qhat_[2][hidx] + x2 * qhat_[4][hidx] + x3 * qhat_[5][hidx];
          bool in_slab = m.p2n(std::abs(x3));
          double p1n = in_slab ? 0.0 : 1.0;  // P_1n on the P_n ball
          double p2n = in_slab ? 1.0 : 0.0;
          cplx out1 = -(sS1 - sQ1) - p1n * sQ1;
          cplx out2 = -(sS2 - sQ2) - p1n * sQ2;
          cplx out3 = -(sS3 - sQ3) - p1n * sQ3;
          if (q > 0.0) {
            cplx qqS = x1 * sS1 + x2 * sS2 + x3 * sS3;
            cplx qqQ = x1 * sQ1 + x2 * sQ2 + x3 * sQ3;
            cplx press = (qqS - p2n * qqQ) / q;
            out1 += x1 * press;
            out2 += x2 * press;
            out3 += x3 * press;
          }
          out.u1.coeffs[idx] = cplx(0.0, scale) * out1;
          out.u2.coeffs[idx] = cplx(0.0, scale) * out2;
          out.u3.coeffs[idx] = cplx(0.0, scale) * out3;
        }
      }
    mirror_upper_half(out);
    out.divergence_free = true;
  }

 private:
  /// Inverse-transform the components to real samples and forward-transform
  /// the six symmetric products (unnormalized half-spectra; the 1/N scale is
  /// folded into the mode pass).
  void transform_and_products(const VectorField& a,
                              std::array<aligned_vector<double>, 3>& rphys,
                              std::array<aligned_vector<cplx>, 6>& hat) {
    for (int c = 0; c < 3; ++c) {
      pack_half(a.comp(c));
      backward_raw_c2r(hs_tmp_, rphys[c], g_);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        const auto& pa = rphys[i];
        const auto& pb = rphys[j];
        const std::size_t n = rprod_.size();
        for (std::size_t x = 0; x < n; ++x) rprod_[x] = pa[x] * pb[x];
        forward_raw_r2c(rprod_, hat[sym_index[i][j]], g_);
      }
  }

  /// Copy the m3 in [0, n3/2] prefix of every (i1, i2) row into the compact
  /// half-spectrum layout.
  void pack_half(const SpectralField& a) {
    const std::size_t rows = static_cast<std::size_t>(g_.n1) * g_.n2;
    for (std::size_t r = 0; r < rows; ++r)
      std::copy_n(a.coeffs.data() + r * g_.n3, nh_, hs_tmp_.data() + r * nh_);
  }

  /// Fill m3 < 0 from the assembled half: out(-m) = conj(out(m)).
  void mirror_upper_half(VectorField& out) {
    for (int i1 = 0; i1 < g_.n1; ++i1) {
      int m1 = (g_.n1 - i1) % g_.n1;
      for (int i2 = 0; i2 < g_.n2; ++i2) {
        int m2 = (g_.n2 - i2) % g_.n2;
        std::size_t dst_row = (static_cast<std::size_t>(i1) * g_.n2 + i2) * g_.n3;
        std::size_t src_row = (static_cast<std::size_t>(m1) * g_.n2 + m2) * g_.n3;
        for (int c = 0; c < 3; ++c) {
          auto& coeffs = out.comp(c).coeffs;
          for (int i3 = nh_; i3 < g_.n3; ++i3)
            coeffs[dst_row + i3] = std::conj(coeffs[src_row + (g_.n3 - i3)]);
        }
      }
    }
  }

  Grid g_;
  WavenumberTables k_;
  int nh_;
  std::array<aligned_vector<double>, 3> rphys_, rphysF_;
  aligned_vector<double> rprod_;
  aligned_vector<cplx> hs_tmp_;
  std::array<aligned_vector<cplx>, 6> shat_, qhat_;
  std::vector<std::uint8_t> keep1_, keep2_, keep3_;
};

}  // namespace

VectorField rhs_u(const VectorField& u, const SolverConfig& cfg) {
  ConvectionEvaluator eval(u.grid());
  VectorField out(u.grid());
  eval.rhs_u(u, out);
  (void)cfg;
  return out;
}

VectorField rhs_w(const VectorField& w, const VectorField& uF,
                  const FriedrichsMasks& masks, const SolverConfig& cfg) {
  double resid = support_residual_outside_ball(w, masks);
  double peak = 0.0;
  for (int c = 0; c < 3; ++c)
    for (const auto& z : w.comp(c).coeffs) peak = std::max(peak, std::abs(z));
  if (resid > 1e-12 * std::max(peak, 1e-300))
    throw std::invalid_argument("w is not supported in the Friedrichs ball");
  ConvectionEvaluator eval(w.grid());
  VectorField out(w.grid());
  eval.rhs_w(w, uF, masks, out);
  (void)cfg;
  return out;
}

IfRk4Stepper::IfRk4Stepper(const Grid& g, double nu_h, double nu_3, double dt)
    : grid_(g), dt_(dt), k_(g), s_(g), acc_(g), e2u_(g), eu_(g) {
  WavenumberTables k(g);
  std::size_t n = g.size();
  e_half_.resize(n);
  e_full_.resize(n);
  lam_h_.resize(n);
  lam_v_.resize(n);
  std::size_t idx = 0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      double xh2 = k.xi1[i1] * k.xi1[i1] + k.xi2[i2] * k.xi2[i2];
      for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
        lam_h_[idx] = nu_h * xh2;
        lam_v_[idx] = nu_3 * k.xi3[i3] * k.xi3[i3];
        double lam = lam_h_[idx] + lam_v_[idx];
        e_half_[idx] = std::exp(-lam * 0.5 * dt);
        e_full_[idx] = e_half_[idx] * e_half_[idx];
      }
    }
}

void IfRk4Stepper::stage_dissipation(const VectorField& s, double weight) {
  // Fixed-chunk partial sums keep the reduction order deterministic.
  constexpr int chunks = 8;
  double dh[chunks] = {}, dv[chunks] = {};
  const std::size_t n = lam_h_.size();
  for (int c = 0; c < 3; ++c) {
    const auto& coeffs = s.comp(c).coeffs;
    for (int ch = 0; ch < chunks; ++ch) {
      std::size_t lo = n * ch / chunks, hi = n * (ch + 1) / chunks;
      double ph = 0.0, pv = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        double a2 = std::norm(coeffs[i]);
        ph += lam_h_[i] * a2;
        pv += lam_v_[i] * a2;
      }
      dh[ch] += ph;
      dv[ch] += pv;
    }
  }
  double sh = 0.0, sv = 0.0;
  for (int ch = 0; ch < chunks; ++ch) {
    sh += dh[ch];
    sv += dv[ch];
  }
  double vol = grid_.volume();
  quad_h_ += weight * 2.0 * vol * sh;
  quad_v_ += weight * 2.0 * vol * sv;
}

void IfRk4Stepper::step(VectorField& u, const Nonlinearity& nonlin) {
  const double dt = dt_;
  const std::size_t n = grid_.size();

  stage_dissipation(u, dt / 6.0);
  nonlin(u, 1, k_);
  for (int c = 0; c < 3; ++c) {
    auto& uc = u.comp(c).coeffs;
    auto& kc = k_.comp(c).coeffs;
    auto& e2u = e2u_.comp(c).coeffs;
    auto& eu = eu_.comp(c).coeffs;
    auto& ac = acc_.comp(c).coeffs;
    auto& sc = s_.comp(c).coeffs;
    for (std::size_t i = 0; i < n; ++i) {
      e2u[i] = e_half_[i] * uc[i];
      eu[i] = e_half_[i] * e2u[i];
      ac[i] = eu[i] + (dt / 6.0) * e_full_[i] * kc[i];
      sc[i] = e2u[i] + (0.5 * dt) * e_half_[i] * kc[i];
    }
  }

  stage_dissipation(s_, dt / 3.0);
  nonlin(s_, 2, k_);
  for (int c = 0; c < 3; ++c) {
    auto& kc = k_.comp(c).coeffs;
    auto& e2u = e2u_.comp(c).coeffs;
    auto& ac = acc_.comp(c).coeffs;
    auto& sc = s_.comp(c).coeffs;
    for (std::size_t i = 0; i < n; ++i) {
      ac[i] += (dt / 3.0) * e_half_[i] * kc[i];
      sc[i] = e2u[i] + (0.5 * dt) * kc[i];
    }
  }

  stage_dissipation(s_, dt / 3.0);
  nonlin(s_, 3, k_);
  for (int c = 0; c < 3; ++c) {
    auto& kc = k_.comp(c).coeffs;
    auto& eu = eu_.comp(c).coeffs;
    auto& ac = acc_.comp(c).coeffs;
    auto& sc = s_.comp(c).coeffs;
    for (std::size_t i = 0; i < n; ++i) {
      ac[i] += (dt / 3.0) * e_half_[i] * kc[i];
      sc[i] = eu[i] + dt * e_half_[i] * kc[i];
    }
  }

  stage_dissipation(s_, dt / 6.0);
  nonlin(s_, 4, k_);
  for (int c = 0; c < 3; ++c) {
    auto& uc = u.comp(c).coeffs;
    auto& kc = k_.comp(c).coeffs;
    auto& ac = acc_.comp(c).coeffs;
    for (std::size_t i = 0; i < n; ++i) uc[i] = ac[i] + (dt / 6.0) * kc[i];
  }
}

namespace {

struct InstantDiagnostics {
  double energy = 0.0, diss_h = 0.0, diss_v = 0.0;
};

InstantDiagnostics instant_diagnostics(const VectorField& u, double nu_h,
                                       double nu_3,
                                       const WavenumberTables& k) {
  const Grid& g = u.grid();
  double e = 0.0, dh = 0.0, dv = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto& coeffs = u.comp(c).coeffs;
    std::size_t idx = 0;
    for (int i1 = 0; i1 < g.n1; ++i1)
      for (int i2 = 0; i2 < g.n2; ++i2) {
        double xh2 = k.xi1[i1] * k.xi1[i1] + k.xi2[i2] * k.xi2[i2];
        for (int i3 = 0; i3 < g.n3; ++i3, ++idx) {
          double a2 = std::norm(coeffs[idx]);
          e += a2;
          dh += xh2 * a2;
          dv += k.xi3[i3] * k.xi3[i3] * a2;
        }
      }
  }
  double vol = g.volume();
  return {e * vol, nu_h * dh * vol, nu_3 * dv * vol};
}

bool state_blew_up(const InstantDiagnostics& d, double threshold) {
  return !std::isfinite(d.energy) || std::sqrt(d.energy) > threshold;
}

enum class System { DirectU, FriedrichsW };

SolveResult run_solver(const VectorField& state0, const VectorField* uF0,
                       const FriedrichsMasks* masks, const SolverConfig& cfg,
                       System system) {
  const Grid& g = cfg.grid;
  auto dec = std::make_shared<DyadicDecomposition>(g);
  SolveResult result{RunRecord{},
                     NormAccumulator(dec, {cfg.p, cfg.nu_h, cfg.nu_3}),
                     {},
                     {},
                     VectorField(g)};
  RunRecord& rec = result.record;
  WavenumberTables ktab(g);
  ConvectionEvaluator eval(g);
  IfRk4Stepper stepper(g, cfg.nu_h, cfg.nu_3, cfg.dt);

  VectorField u = state0;
  VectorField uf, uf_half, uf_full;
  if (system == System::FriedrichsW) {
    uf = *uF0;
    uf_half = VectorField(g);
    uf_full = VectorField(g);
  }

  IfRk4Stepper::Nonlinearity nonlin;
  if (system == System::DirectU) {
    nonlin = [&](const VectorField& s, int, VectorField& out) {
      eval.rhs_u(s, out);
    };
  } else {
    nonlin = [&](const VectorField& s, int stage, VectorField& out) {
      const VectorField& f =
          stage == 1 ? uf : (stage == 4 ? uf_full : uf_half);
      eval.rhs_w(s, f, *masks, out);
    };
  }

  const long long nsteps = cfg.steps();
  auto record_row = [&](double t) {
    InstantDiagnostics d = instant_diagnostics(u, cfg.nu_h, cfg.nu_3, ktab);
    double div = divergence_residual(u);
    rec.times.push_back(t);
    rec.energy.push_back(d.energy);
    rec.diss_h.push_back(d.diss_h);
    rec.diss_v.push_back(d.diss_v);
    rec.div_residual.push_back(div);
    rec.b012_accum.push_back(result.accumulator.b012_time_norm());
    rec.besov_accum.push_back(result.accumulator.besov_time_norm());
    rec.max_div_residual = std::max(rec.max_div_residual, div);
    if (system == System::FriedrichsW &&
        support_residual_outside_ball(u, *masks) != 0.0)
      throw std::logic_error("w left the Friedrichs ball");
    if (cfg.keep_snapshots) {
      result.snapshot_times.push_back(t);
      result.snapshots.push_back(u);
    }
  };

  result.accumulator.update(0.0, u, true);
  record_row(0.0);

  for (long long i = 1; i <= nsteps; ++i) {
    if (system == System::FriedrichsW) {
      const std::size_t n = g.size();
      const auto& e2 = stepper.half_factor();
      for (int c = 0; c < 3; ++c) {
        auto& f = uf.comp(c).coeffs;
        auto& fh = uf_half.comp(c).coeffs;
        auto& ff = uf_full.comp(c).coeffs;
        for (std::size_t x = 0; x < n; ++x) {
          fh[x] = e2[x] * f[x];
          ff[x] = e2[x] * fh[x];
        }
      }
    }
    stepper.step(u, nonlin);
    if (system == System::FriedrichsW) std::swap(uf, uf_full);

    double t = static_cast<double>(i) * cfg.dt;
    bool mixed = cfg.p == 2.0 || i % cfg.mixed_stats_every == 0 || i == nsteps;
    result.accumulator.update(t, u, mixed);

    InstantDiagnostics d = instant_diagnostics(u, cfg.nu_h, cfg.nu_3, ktab);
    if (state_blew_up(d, cfg.blowup_threshold)) {
      rec.blew_up = true;
      rec.blowup_time = t;
      break;
    }
    if (i % cfg.record_every == 0 || i == nsteps) record_row(t);
  }

  rec.diss_integral_h = stepper.diss_quadrature_h();
  rec.diss_integral_v = stepper.diss_quadrature_v();
  result.final_state = std::move(u);
  return result;
}

VectorField prepared_initial(const VectorField& u0) {
  if (divergence_residual(u0) > 1e-8)
    throw std::invalid_argument("initial data is not divergence-free");
  VectorField u = u0;
  leray_project_inplace(u);
  dealias_inplace(u);
  return u;
}

}  // namespace

SolveResult solve_u(const VectorField& u0, const SolverConfig& cfg) {
  cfg.validate();
  if (!(u0.grid() == cfg.grid))
    throw std::invalid_argument("initial data grid does not match config");
  VectorField u = prepared_initial(u0);
  return run_solver(u, nullptr, nullptr, cfg, System::DirectU);
}

SolveResult solve_w(const VectorField& u0, const SolverConfig& cfg) {
  cfg.validate();
  if (!(u0.grid() == cfg.grid))
    throw std::invalid_argument("initial data grid does not match config");
  VectorField u = prepared_initial(u0);
  DyadicDecomposition dec(cfg.grid);
  auto [hh, ll] = dec.split_hh_ll(u);
  double radius = cfg.n_cutoff > 0.0 ? cfg.n_cutoff : cfg.grid.max_xi();
  FriedrichsMasks masks = friedrichs_projectors(cfg.grid, radius);
  VectorField w0 = apply_pn(ll, masks);
  return run_solver(w0, &hh, &masks, cfg, System::FriedrichsW);
}

ContinuousDependenceReport continuous_dependence_run(const VectorField& u01,
                                                     const VectorField& u02,
                                                     const SolverConfig& cfg) {
  cfg.validate();
  if (!(cfg.nu_3 > 0.0))
    throw std::invalid_argument(
        "continuous dependence requires nu_3 > 0 (the stability estimate of "
        "the anisotropic system is only proved for positive vertical "
        "viscosity)");
  const Grid& g = cfg.grid;
  VectorField a = prepared_initial(u01);
  VectorField b = prepared_initial(u02);

  auto dec = std::make_shared<DyadicDecomposition>(g);
  NormAccumulator acc_a(dec, {cfg.p, cfg.nu_h, cfg.nu_3});
  NormAccumulator acc_b(dec, {cfg.p, cfg.nu_h, cfg.nu_3});
  ConvectionEvaluator eval(g);
  IfRk4Stepper stepper_a(g, cfg.nu_h, cfg.nu_3, cfg.dt);
  IfRk4Stepper stepper_b(g, cfg.nu_h, cfg.nu_3, cfg.dt);
  IfRk4Stepper::Nonlinearity nonlin = [&](const VectorField& s, int,
                                          VectorField& out) {
    eval.rhs_u(s, out);
  };

  ContinuousDependenceReport rep;
  VectorField delta = a;
  delta -= b;
  rep.delta0_norm = l2_norm(delta);
  auto push_ratio = [&](double t) {
    VectorField d = a;
    d -= b;
    double nd = l2_norm(d);
    double r = rep.delta0_norm > 0.0 ? nd / rep.delta0_norm
                                     : (nd == 0.0 ? 1.0 : inf);
    rep.times.push_back(t);
    rep.ratio.push_back(r);
    rep.sup_ratio = std::max(rep.sup_ratio, r);
  };

  acc_a.update(0.0, a, true);
  acc_b.update(0.0, b, true);
  push_ratio(0.0);
  const long long nsteps = cfg.steps();
  for (long long i = 1; i <= nsteps; ++i) {
    stepper_a.step(a, nonlin);
    stepper_b.step(b, nonlin);
    double t = static_cast<double>(i) * cfg.dt;
    bool mixed = cfg.p == 2.0 || i % cfg.mixed_stats_every == 0 || i == nsteps;
    acc_a.update(t, a, mixed);
    acc_b.update(t, b, mixed);
    if (!std::isfinite(l2_norm(a)) || !std::isfinite(l2_norm(b)) ||
        l2_norm(a) > cfg.blowup_threshold || l2_norm(b) > cfg.blowup_threshold) {
      rep.blew_up = true;
      break;
    }
    if (i % cfg.record_every == 0 || i == nsteps) push_ratio(t);
  }

  rep.besov_T_u1 = acc_a.besov_time_norm();
  rep.besov_T_u2 = acc_b.besov_time_norm();
  double pp = cfg.p;
  double expf = (pp + 1.0) / (pp - 1.0);
  rep.exponent_ingredient =
      (std::pow(cfg.nu_h, -expf) + std::pow(cfg.nu_3, -expf)) / cfg.nu_h *
      std::pow(rep.besov_T_u1 + rep.besov_T_u2, 2.0 * pp / (pp - 1.0));
  rep.fitted_C = rep.exponent_ingredient > 0.0
                     ? std::log(std::max(rep.sup_ratio, 1.0)) /
                           rep.exponent_ingredient
                     : 0.0;
  return rep;
}

}  // namespace ans
