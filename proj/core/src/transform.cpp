#include "ans/transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace ans {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// One out-of-place c2c plan pair per grid dimension triple. Plans are created
// with FFTW_UNALIGNED so they can run on any caller buffer; sizes of 64^3 and
// up get FFTW_MEASURE since they are reused thousands of times per run, and
// use the threaded FFTW backend when it is linked in.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  PlanPair& get(const Grid& g) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(g.n1, g.n2, g.n3);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    std::size_t n = g.size();
    bool big = n >= 64ull * 64 * 64;
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    unsigned flags = FFTW_UNALIGNED;
    flags |= big ? FFTW_MEASURE : FFTW_ESTIMATE;
    PlanPair p;
    p.forward = fftw_plan_dft_3d(g.n1, g.n2, g.n3, a, b, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_3d(g.n1, g.n2, g.n3, a, b, FFTW_BACKWARD, flags);
    fftw_free(a);
    fftw_free(b);
    if (!p.forward || !p.backward)
      throw std::runtime_error("fftw plan creation failed");
    return plans_.emplace(key, p).first->second;
  }

  /// Half-spectrum (r2c/c2r) plans for conjugate-symmetric data.
  PlanPair& get_real(const Grid& g) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(g.n1, g.n2, g.n3);
    auto it = real_plans_.find(key);
    if (it != real_plans_.end()) return it->second;

    std::size_t n = g.size();
    std::size_t nh = static_cast<std::size_t>(g.n1) * g.n2 * (g.n3 / 2 + 1);
    double* r = fftw_alloc_real(n);
    fftw_complex* c = fftw_alloc_complex(nh);
    unsigned flags = FFTW_UNALIGNED;
    flags |= (n >= 64ull * 64 * 64) ? FFTW_MEASURE : FFTW_ESTIMATE;
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_3d(g.n1, g.n2, g.n3, r, c, flags);
    p.backward = fftw_plan_dft_c2r_3d(g.n1, g.n2, g.n3, c, r, flags);
    fftw_free(r);
    fftw_free(c);
    if (!p.forward || !p.backward)
      throw std::runtime_error("fftw r2c plan creation failed");
    return real_plans_.emplace(key, p).first->second;
  }

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [k, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
    for (auto& [k, p] : real_plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }
  std::mutex mu_;
  std::map<std::tuple<int, int, int>, PlanPair> plans_;
  std::map<std::tuple<int, int, int>, PlanPair> real_plans_;
};

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
const fftw_complex* as_fftw(const cplx* p) {
  return reinterpret_cast<const fftw_complex*>(p);
}

void check_size(std::size_t got, const Grid& g) {
  if (got != g.size())
    throw std::invalid_argument("sample array does not match grid dimensions");
}

}  // namespace

void forward_raw(std::span<const cplx> in, std::span<cplx> out,
                 const Grid& grid) {
  check_size(in.size(), grid);
  check_size(out.size(), grid);
  auto& plans = PlanCache::instance().get(grid);
  fftw_execute_dft(plans.forward, const_cast<fftw_complex*>(as_fftw(in.data())),
                   as_fftw(out.data()));
}

void backward_raw(std::span<const cplx> in, std::span<cplx> out,
                  const Grid& grid) {
  check_size(in.size(), grid);
  check_size(out.size(), grid);
  auto& plans = PlanCache::instance().get(grid);
  fftw_execute_dft(plans.backward,
                   const_cast<fftw_complex*>(as_fftw(in.data())),
                   as_fftw(out.data()));
}

std::size_t half_spectrum_size(const Grid& g) {
  return static_cast<std::size_t>(g.n1) * g.n2 * (g.n3 / 2 + 1);
}

void forward_raw_r2c(std::span<const double> in, std::span<cplx> half_out,
                     const Grid& grid) {
  check_size(in.size(), grid);
  if (half_out.size() != half_spectrum_size(grid))
    throw std::invalid_argument("half-spectrum buffer size mismatch");
  auto& plans = PlanCache::instance().get_real(grid);
  fftw_execute_dft_r2c(plans.forward, const_cast<double*>(in.data()),
                       as_fftw(half_out.data()));
}

void backward_raw_c2r(std::span<cplx> half_in, std::span<double> out,
                      const Grid& grid) {
  if (half_in.size() != half_spectrum_size(grid))
    throw std::invalid_argument("half-spectrum buffer size mismatch");
  check_size(out.size(), grid);
  auto& plans = PlanCache::instance().get_real(grid);
  fftw_execute_dft_c2r(plans.backward, as_fftw(half_in.data()), out.data());
}

SpectralField forward_transform(std::span<const cplx> physical,
                                const Grid& grid) {
  check_size(physical.size(), grid);
  SpectralField f(grid);
  forward_raw(physical, f.coeffs, grid);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : f.coeffs) c *= scale;
  return f;
}

SpectralField forward_transform(std::span<const double> physical,
                                const Grid& grid) {
  check_size(physical.size(), grid);
  aligned_vector<cplx> buf(physical.size());
  for (std::size_t i = 0; i < physical.size(); ++i) buf[i] = physical[i];
  return forward_transform(std::span<const cplx>(buf), grid);
}

void inverse_transform(const SpectralField& f, std::span<cplx> physical) {
  backward_raw(f.coeffs, physical, f.grid);
}

std::vector<cplx> inverse_transform(const SpectralField& f) {
  std::vector<cplx> out(f.grid.size());
  inverse_transform(f, out);
  return out;
}

void inverse_transform_real(const SpectralField& f,
                            std::span<double> physical) {
  check_size(physical.size(), f.grid);
  aligned_vector<cplx> buf(f.grid.size());
  backward_raw(f.coeffs, buf, f.grid);
  for (std::size_t i = 0; i < buf.size(); ++i) physical[i] = buf[i].real();
}

std::vector<double> inverse_transform_real(const SpectralField& f) {
  std::vector<double> out(f.grid.size());
  inverse_transform_real(f, out);
  return out;
}

double SpectralField::conjugate_symmetry_residual() const {
  double max_amp = 0.0, max_dev = 0.0;
  for (const auto& c : coeffs) max_amp = std::max(max_amp, std::abs(c));
  if (max_amp == 0.0) return 0.0;
  for (int i1 = 0; i1 < grid.n1; ++i1) {
    int j1 = (grid.n1 - i1) % grid.n1;
    for (int i2 = 0; i2 < grid.n2; ++i2) {
      int j2 = (grid.n2 - i2) % grid.n2;
      for (int i3 = 0; i3 < grid.n3; ++i3) {
        int j3 = (grid.n3 - i3) % grid.n3;
        cplx dev = at(i1, i2, i3) - std::conj(at(j1, j2, j3));
        max_dev = std::max(max_dev, std::abs(dev));
      }
    }
  }
  return max_dev / max_amp;
}

SpectralField operator+(SpectralField a, const SpectralField& b) {
  a += b;
  return a;
}
SpectralField operator-(SpectralField a, const SpectralField& b) {
  a -= b;
  return a;
}
SpectralField operator*(double c, SpectralField a) {
  a *= c;
  return a;
}

VectorField operator+(VectorField a, const VectorField& b) {
  a += b;
  return a;
}
VectorField operator-(VectorField a, const VectorField& b) {
  a -= b;
  return a;
}
VectorField operator*(double c, VectorField a) {
  a *= c;
  return a;
}

}  // namespace ans
